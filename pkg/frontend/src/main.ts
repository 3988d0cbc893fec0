/** Application shell: wires the service client to the editor components.
 *
 * The page starts on a paste-a-scenario landing view. Once a scenario is
 * created the workspace shows the criteria tree, the pairwise matrix of
 * the selected branch, the evaluation panels, and the decision dashboard.
 * Rule and strategy choices come from the service's published schema, so
 * the vocabulary always matches the engine the page is talking to.
 */

import { Client, ApiError } from "./api.js";
import type { ApiErrorItem, NodeDoc, Report, ScenarioDoc } from "./types.js";
import { initialState, isDirty, reduce, type ViewState } from "./state.js";
import { el, clear } from "./dom.js";
import { HierarchyEditor } from "./components/hierarchyEditor.js";
import { MatrixView } from "./components/matrixView.js";
import { EvaluationPanel } from "./components/evaluationPanel.js";
import { ProfileDashboard } from "./components/profileDashboard.js";

function enumAt(schema: Record<string, unknown>, ...path: string[]): string[] {
  let node: unknown = schema;
  for (const key of path) {
    if (typeof node !== "object" || node === null) return [];
    node = (node as Record<string, unknown>)[key];
  }
  return Array.isArray(node) ? (node as string[]) : [];
}

class App {
  private readonly client: Client;
  private readonly mount: HTMLElement;
  private state: ViewState = initialState();
  private scenario: ScenarioDoc | null = null;
  private report: Report | null = null;
  private rules: string[] = [];
  private strategies: string[] = [];
  private selectedBranch: { path: string; node: NodeDoc } | null = null;
  private statusSlot: HTMLElement = el("div", { class: "status" });

  constructor(client: Client, mount: HTMLElement) {
    this.client = client;
    this.mount = mount;
  }

  async start(): Promise<void> {
    try {
      const schema = await this.client.getSchema();
      this.rules = enumAt(schema, "properties", "fusion", "properties", "rule", "enum");
      this.strategies = enumAt(
        schema, "properties", "decision", "properties", "strategy", "enum",
      );
    } catch {
      this.rules = [];
      this.strategies = [];
    }
    this.renderLanding();
  }

  private setStatus(text: string, isError = false): void {
    clear(this.statusSlot);
    this.statusSlot.append(el("p", { class: isError ? "error" : "note" }, [text]));
  }

  private renderLanding(): void {
    clear(this.mount);
    const panel = el("section", { class: "landing" });
    panel.append(el("h2", {}, ["open a scenario"]));
    const area = el("textarea", {
      class: "scenario-json",
      rows: "16",
      placeholder: "paste a scenario document",
    });
    const go = el("button", { type: "button", class: "create" }, ["create scenario"]);
    go.addEventListener("click", () => {
      void this.createScenario(area.value);
    });
    panel.append(area, go, this.statusSlot);
    this.mount.append(panel);
  }

  private async createScenario(text: string): Promise<void> {
    let doc: ScenarioDoc;
    try {
      doc = JSON.parse(text) as ScenarioDoc;
    } catch {
      this.setStatus("that is not valid JSON", true);
      return;
    }
    try {
      const { id } = await this.client.createScenario(doc);
      this.scenario = await this.client.getScenario(id);
      this.state = reduce(this.state, {
        type: "loaded",
        id,
        rule: this.scenario.fusion.rule,
        strategy: this.scenario.decision.strategy,
      });
      this.report = null;
      this.selectedBranch = this.scenario.hierarchy.children
        ? { path: "hierarchy", node: this.scenario.hierarchy }
        : null;
      this.renderWorkspace();
    } catch (err) {
      this.showFailure(err);
    }
  }

  private showFailure(err: unknown): void {
    if (err instanceof ApiError) {
      this.setStatus(err.message, true);
      return;
    }
    this.setStatus(String(err), true);
  }

  private renderWorkspace(): void {
    const scenario = this.scenario;
    const id = this.state.scenarioId;
    if (!scenario || !id) return;
    clear(this.mount);

    const controls = el("div", { class: "controls" });
    const ruleSelect = el("select", { class: "rule-select" });
    for (const rule of this.rules.length ? this.rules : [scenario.fusion.rule]) {
      const option = el("option", { value: rule }, [rule]);
      if (rule === this.state.rule) option.setAttribute("selected", "");
      ruleSelect.append(option);
    }
    ruleSelect.addEventListener("change", () => {
      this.state = reduce(this.state, { type: "rule-selected", rule: ruleSelect.value });
    });
    const strategySelect = el("select", { class: "strategy-select" });
    for (const s of this.strategies.length ? this.strategies : [scenario.decision.strategy]) {
      const option = el("option", { value: s }, [s]);
      if (s === this.state.strategy) option.setAttribute("selected", "");
      strategySelect.append(option);
    }
    strategySelect.addEventListener("change", () => {
      this.state = reduce(this.state, {
        type: "strategy-selected",
        strategy: strategySelect.value,
      });
    });
    const runBtn = el("button", { type: "button", class: "run" }, ["run"]);
    runBtn.addEventListener("click", () => void this.run());
    const compareBtn = el("button", { type: "button", class: "compare" }, [
      "pin as comparison",
    ]);
    compareBtn.addEventListener("click", () => void this.pinComparison());
    const saveBtn = el("button", { type: "button", class: "save" }, ["save"]);
    saveBtn.addEventListener("click", () => void this.save());
    controls.append(
      el("label", {}, ["rule"]),
      ruleSelect,
      el("label", {}, ["strategy"]),
      strategySelect,
      runBtn,
      compareBtn,
      saveBtn,
    );
    this.mount.append(controls, this.statusSlot);

    const columns = el("div", { class: "workspace" });

    const editor = new HierarchyEditor({
      hierarchy: scenario.hierarchy,
      onChange: (hierarchy) => void this.putHierarchy(hierarchy),
      onSelect: (path, node) => {
        this.selectedBranch = { path, node };
        this.renderWorkspace();
      },
    });
    columns.append(editor.root);

    if (this.report && this.selectedBranch) {
      const view = new MatrixView({
        client: this.client,
        scenarioId: id,
        nodePath: this.selectedBranch.path,
        node: this.selectedBranch.node,
        report: this.report,
        onPatched: () => {
          this.setStatus("what-if applied; the draft itself is unchanged");
        },
      });
      columns.append(view.root);
    }

    const evaluations = el("div", { class: "evaluations" });
    scenario.evaluations.forEach((evaluation, index) => {
      const entry = this.report?.evaluations?.find(
        (e) => e.criterion === evaluation.criterion && e.source === evaluation.source,
      );
      const panelOpts = {
        evaluation,
        index,
        onEdit: (path: string, value: number | string) => void this.patchDraft(path, value),
        ...(entry ? { entry } : {}),
      };
      evaluations.append(new EvaluationPanel(panelOpts).root);
    });
    columns.append(evaluations);

    if (this.report) {
      columns.append(
        new ProfileDashboard({
          report: this.report,
          comparisons: this.state.comparisons,
          stale: isDirty(this.state),
        }).root,
      );
    }
    this.mount.append(columns);
  }

  private async putHierarchy(hierarchy: NodeDoc): Promise<void> {
    const scenario = this.scenario;
    const id = this.state.scenarioId;
    if (!scenario || !id) return;
    scenario.hierarchy = hierarchy;
    this.state = reduce(this.state, { type: "edited", path: "hierarchy" });
    try {
      await this.client.putScenario(id, scenario);
      this.scenario = await this.client.getScenario(id);
      this.setStatus("draft updated");
    } catch (err) {
      this.showInline(err);
    }
    this.renderWorkspace();
  }

  private async patchDraft(path: string, value: number | string): Promise<void> {
    const scenario = this.scenario;
    const id = this.state.scenarioId;
    if (!scenario || !id) return;
    const segments = path.split(".");
    let node: unknown = scenario;
    for (const seg of segments.slice(0, -1)) {
      if (Array.isArray(node)) node = node[Number(seg)];
      else if (typeof node === "object" && node !== null) {
        node = (node as Record<string, unknown>)[seg];
      }
    }
    const last = segments[segments.length - 1];
    if (typeof node === "object" && node !== null && last) {
      (node as Record<string, unknown>)[last] = value;
    }
    this.state = reduce(this.state, { type: "edited", path });
    try {
      await this.client.putScenario(id, scenario);
      this.setStatus("draft updated");
    } catch (err) {
      this.showInline(err);
    }
  }

  private showInline(err: unknown): void {
    if (err instanceof ApiError) {
      const items: ApiErrorItem[] = err.errors;
      this.setStatus(items.map((e) => `${e.path}: ${e.message}`).join("; "), true);
      return;
    }
    this.setStatus(String(err), true);
  }

  private async run(): Promise<void> {
    const id = this.state.scenarioId;
    if (!id) return;
    try {
      this.report = await this.client.run(id, {
        rule: this.state.rule,
        strategy: this.state.strategy,
      });
      this.state = reduce(this.state, { type: "ran" });
      this.setStatus(`recommendation: ${this.report.decision.choice}`);
      this.renderWorkspace();
    } catch (err) {
      this.showInline(err);
    }
  }

  private async pinComparison(): Promise<void> {
    const id = this.state.scenarioId;
    if (!id) return;
    try {
      const report = await this.client.whatif(id, { rule: this.state.rule });
      this.state = reduce(this.state, {
        type: "comparison-added",
        slot: { label: `rule ${report.rule}`, scenarioId: id, report },
      });
      this.renderWorkspace();
    } catch (err) {
      this.showInline(err);
    }
  }

  private async save(): Promise<void> {
    const id = this.state.scenarioId;
    if (!id) return;
    try {
      const { path } = await this.client.save(id);
      this.setStatus(`saved to ${path}`);
    } catch (err) {
      this.showInline(err);
    }
  }
}

export function boot(mount: HTMLElement): App {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("api") ?? undefined;
  const app = new App(new Client(baseUrl ? { baseUrl } : {}), mount);
  void app.start();
  return app;
}

const mount = document.getElementById("app");
if (mount) boot(mount);
