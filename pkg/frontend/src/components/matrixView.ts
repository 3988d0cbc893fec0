/** Pairwise comparison editor for one branch of the criteria tree.
 *
 * Upper-triangle judgments are editable inputs; the lower triangle is
 * implied by reciprocity and stays read-only. Committing a cell sends a
 * single what-if patch and repaints the consistency badge and the weight
 * bars from the response, so every visible number comes from the service.
 */

import type { Client } from "../api.js";
import { ApiError } from "../api.js";
import type { NodeDoc, Report } from "../types.js";
import { fmt } from "../format.js";
import { el, clear } from "../dom.js";

export interface MatrixViewOptions {
  client: Client;
  scenarioId: string;
  /** Dotted path of the branch inside the draft, e.g. "hierarchy" or "hierarchy.children.1". */
  nodePath: string;
  node: NodeDoc;
  report: Report;
  /** Called with the fresh what-if report after a successful patch. */
  onPatched?: (report: Report) => void;
}

/** Position of judgment k in an n-wide upper triangle, row-major. */
export function judgmentPair(n: number, k: number): [number, number] {
  let index = k;
  for (let i = 0; i < n - 1; i += 1) {
    const rowLen = n - 1 - i;
    if (index < rowLen) return [i, i + 1 + index];
    index -= rowLen;
  }
  throw new Error(`judgment ${k} out of range for ${n} children`);
}

function crBadge(cr: number): HTMLElement {
  const badge = el("span", { class: "cr-badge" }, [`CR ${fmt(cr)}`]);
  if (cr > 0.1) badge.classList.add("warn");
  return badge;
}

function weightBars(node: NodeDoc, report: Report): HTMLElement {
  const wrap = el("div", { class: "weight-bars" });
  for (const child of node.children ?? []) {
    const entry = report.weights.nodes[child.id];
    if (!entry) continue;
    const row = el("div", { class: "weight-row" });
    row.append(el("span", { class: "weight-label" }, [child.label]));
    const bar = el("span", { class: "weight-bar" });
    bar.setAttribute("style", `width: ${entry.local * 100}%`);
    row.append(bar);
    row.append(el("span", { class: "weight-value" }, [fmt(entry.local)]));
    wrap.append(row);
  }
  return wrap;
}

export class MatrixView {
  readonly root: HTMLElement;

  private readonly opts: MatrixViewOptions;
  private badgeSlot: HTMLElement;
  private barsSlot: HTMLElement;
  private errorSlot: HTMLElement;

  constructor(opts: MatrixViewOptions) {
    this.opts = opts;
    this.root = el("section", { class: "matrix-view" });
    this.badgeSlot = el("div", { class: "matrix-badge" });
    this.barsSlot = el("div", { class: "matrix-weights" });
    this.errorSlot = el("div", { class: "matrix-errors" });
    this.render();
  }

  private consistencyFor(report: Report): number {
    const entry = report.weights.consistency[this.opts.node.id];
    return entry ? entry.cr : 0;
  }

  private render(): void {
    const { node, report } = this.opts;
    clear(this.root);
    this.root.append(el("h3", {}, [node.label]));

    this.badgeSlot = el("div", { class: "matrix-badge" });
    this.badgeSlot.append(crBadge(this.consistencyFor(report)));
    this.root.append(this.badgeSlot);

    this.root.append(this.buildTable());

    this.barsSlot = el("div", { class: "matrix-weights" });
    this.barsSlot.append(weightBars(node, report));
    this.root.append(this.barsSlot);

    this.errorSlot = el("div", { class: "matrix-errors" });
    this.root.append(this.errorSlot);
  }

  private buildTable(): HTMLElement {
    const { node } = this.opts;
    const children = node.children ?? [];
    const judgments = node.judgments ?? [];
    const n = children.length;

    const table = el("table", { class: "matrix-table" });
    const head = el("tr");
    head.append(el("th"));
    for (const child of children) head.append(el("th", {}, [child.label]));
    table.append(head);

    // cell (i, j) of the upper triangle holds judgment index k in
    // row-major order; everything below the diagonal is the reciprocal
    const cellIndex = new Map<string, number>();
    for (let k = 0; k < judgments.length; k += 1) {
      const [i, j] = judgmentPair(n, k);
      cellIndex.set(`${i},${j}`, k);
    }

    for (let i = 0; i < n; i += 1) {
      const row = el("tr");
      const rowChild = children[i];
      row.append(el("th", {}, [rowChild ? rowChild.label : ""]));
      for (let j = 0; j < n; j += 1) {
        if (i === j) {
          row.append(el("td", { class: "diagonal" }));
        } else if (i < j) {
          const k = cellIndex.get(`${i},${j}`);
          const value = k === undefined ? undefined : judgments[k];
          const input = el("input", {
            type: "number",
            step: "any",
            min: "0",
            class: "judgment",
            "data-judgment": String(k),
          });
          if (value !== undefined) input.value = String(value);
          input.addEventListener("change", () => {
            if (k !== undefined) void this.commit(k, input);
          });
          const cell = el("td", { class: "judgment-cell" });
          cell.append(input);
          row.append(cell);
        } else {
          row.append(el("td", { class: "reciprocal", title: "reciprocal of the mirrored cell" }));
        }
      }
      table.append(row);
    }
    return table;
  }

  private async commit(k: number, input: HTMLInputElement): Promise<void> {
    const value = Number(input.value);
    clear(this.errorSlot);
    if (!Number.isFinite(value) || value <= 0) {
      this.errorSlot.append(el("p", { class: "error" }, ["judgments must be positive"]));
      return;
    }
    const path = `${this.opts.nodePath}.judgments.${k}`;
    try {
      const report = await this.opts.client.whatif(this.opts.scenarioId, {
        set: { [path]: value },
      });
      this.applyReport(report);
      this.opts.onPatched?.(report);
    } catch (err) {
      if (err instanceof ApiError) {
        for (const item of err.errors) {
          this.errorSlot.append(el("p", { class: "error" }, [`${item.path}: ${item.message}`]));
        }
        return;
      }
      throw err;
    }
  }

  private applyReport(report: Report): void {
    clear(this.badgeSlot);
    this.badgeSlot.append(crBadge(this.consistencyFor(report)));
    clear(this.barsSlot);
    this.barsSlot.append(weightBars(this.opts.node, report));
  }
}
