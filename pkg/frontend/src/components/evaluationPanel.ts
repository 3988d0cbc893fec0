/** Editor and viewer for one (criterion, source) evaluation.
 *
 * Interval statements are editable rows; the report side shows the mapped
 * mass, the possibility staircase, and the certainty quoted for each stated
 * interval. All rendered numbers are copied from service documents.
 */

import type { ApiErrorItem, EvaluationDoc, EvaluationEntry, Staircase } from "../types.js";
import { fmt, fmtInterval } from "../format.js";
import { el, svgEl, clear } from "../dom.js";

export interface EvaluationPanelOptions {
  /** Draft document entry (the editable inputs). */
  evaluation: EvaluationDoc;
  /** Position inside the draft's evaluations array. */
  index: number;
  /** Matching report entry, when a report is available. */
  entry?: EvaluationEntry;
  /** Allowed labels for qualitative criteria. */
  labels?: string[];
  /** Called with the dotted document path and the new value after an edit. */
  onEdit?: (path: string, value: number | string) => void;
}

const WIDTH = 320;
const HEIGHT = 130;
const PAD = 24;

/** Nested boxes, one per cut; the tallest box is the fully supported core. */
export function staircaseSvg(staircase: Staircase): SVGElement {
  const cuts = staircase.cuts;
  const lo = Math.min(...cuts.map((c) => c[0]));
  const hi = Math.max(...cuts.map((c) => c[1]));
  const span = hi - lo || 1;
  const x = (v: number) => PAD + ((v - lo) / span) * (WIDTH - 2 * PAD);
  const y = (level: number) => HEIGHT - PAD - level * (HEIGHT - 2 * PAD);

  const svg = svgEl("svg", {
    class: "staircase",
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    role: "img",
  });
  svg.append(
    svgEl("line", {
      x1: String(PAD),
      y1: String(HEIGHT - PAD),
      x2: String(WIDTH - PAD),
      y2: String(HEIGHT - PAD),
      class: "axis",
    }),
  );
  const ticks = new Set<number>();
  for (const [cutLo, cutHi, level] of cuts) {
    svg.append(
      svgEl("rect", {
        x: String(x(cutLo)),
        y: String(y(level)),
        width: String(x(cutHi) - x(cutLo)),
        height: String(HEIGHT - PAD - y(level)),
        class: "cut",
      }),
    );
    svg.append(
      svgEl(
        "text",
        { x: String(x(cutLo) + 3), y: String(y(level) - 3), class: "cut-level" },
        [fmt(level)],
      ),
    );
    ticks.add(cutLo);
    ticks.add(cutHi);
  }
  for (const tick of ticks) {
    svg.append(
      svgEl(
        "text",
        { x: String(x(tick)), y: String(HEIGHT - PAD + 14), class: "tick" },
        [fmt(tick)],
      ),
    );
  }
  return svg;
}

export class EvaluationPanel {
  readonly root: HTMLElement;

  private readonly opts: EvaluationPanelOptions;
  private errorSlot: HTMLElement;

  constructor(opts: EvaluationPanelOptions) {
    this.opts = opts;
    this.root = el("section", { class: "evaluation-panel" });
    this.errorSlot = el("div", { class: "evaluation-errors" });
    this.render();
  }

  private path(suffix: string): string {
    return `evaluations.${this.opts.index}.${suffix}`;
  }

  private render(): void {
    const { evaluation, entry } = this.opts;
    clear(this.root);
    this.root.append(
      el("h3", {}, [`${evaluation.criterion} / ${evaluation.source}`]),
    );
    if (evaluation.intervals) {
      this.root.append(this.intervalRows(evaluation.intervals));
    } else {
      this.root.append(this.qualitativeRow());
    }
    if (entry?.staircase) {
      this.root.append(staircaseSvg(entry.staircase));
      const notes = el("div", { class: "necessity-notes" });
      for (const n of entry.staircase.necessity) {
        notes.append(
          el("p", { class: "necessity" }, [
            `N(${fmtInterval(n.lo, n.hi)}) = ${fmt(n.value)}`,
          ]),
        );
      }
      this.root.append(notes);
    }
    if (entry) {
      this.root.append(this.bbaTable(entry.bba));
    }
    this.root.append(this.errorSlot);
  }

  private intervalRows(intervals: EvaluationDoc["intervals"]): HTMLElement {
    const wrap = el("div", { class: "interval-rows" });
    (intervals ?? []).forEach((interval, k) => {
      const row = el("div", { class: "interval-row" });
      const loInput = el("input", {
        type: "number",
        step: "any",
        class: "interval-lo",
        "data-path": this.path(`intervals.${k}.lo`),
      });
      loInput.value = String(interval.lo);
      const hiInput = el("input", {
        type: "number",
        step: "any",
        min: String(interval.lo),
        class: "interval-hi",
        "data-path": this.path(`intervals.${k}.hi`),
      });
      hiInput.value = String(interval.hi);
      const confInput = el("input", {
        type: "number",
        step: "any",
        min: "0",
        max: "1",
        class: "interval-confidence",
        "data-path": this.path(`intervals.${k}.confidence`),
      });
      confInput.value = String(interval.confidence);

      loInput.addEventListener("change", () => {
        // the bounds may not cross, so the lower handle caps the upper one
        hiInput.setAttribute("min", loInput.value);
        if (Number(hiInput.value) < Number(loInput.value)) {
          loInput.value = String(interval.lo);
          this.showErrors([
            { path: this.path(`intervals.${k}`), message: "bounds may not cross" },
          ]);
          return;
        }
        this.emit(loInput);
      });
      hiInput.addEventListener("change", () => {
        if (Number(hiInput.value) < Number(loInput.value)) {
          hiInput.value = String(interval.hi);
          this.showErrors([
            { path: this.path(`intervals.${k}`), message: "bounds may not cross" },
          ]);
          return;
        }
        this.emit(hiInput);
      });
      confInput.addEventListener("change", () => this.emit(confInput));

      row.append(
        el("label", {}, ["from"]),
        loInput,
        el("label", {}, ["to"]),
        hiInput,
        el("label", {}, ["confidence"]),
        confInput,
      );
      wrap.append(row);
    });
    return wrap;
  }

  private qualitativeRow(): HTMLElement {
    const { evaluation, labels } = this.opts;
    const row = el("div", { class: "qualitative-row" });
    const select = el("select", { class: "label-pick", "data-path": this.path("label") });
    for (const label of labels ?? (evaluation.label ? [evaluation.label] : [])) {
      const option = el("option", { value: label }, [label]);
      if (label === evaluation.label) option.setAttribute("selected", "");
      select.append(option);
    }
    select.addEventListener("change", () => {
      this.opts.onEdit?.(this.path("label"), select.value);
    });
    const confInput = el("input", {
      type: "number",
      step: "any",
      min: "0",
      max: "1",
      class: "label-confidence",
      "data-path": this.path("confidence"),
    });
    confInput.value = String(evaluation.confidence ?? 1);
    confInput.addEventListener("change", () => this.emit(confInput));
    row.append(
      el("label", {}, ["label"]),
      select,
      el("label", {}, ["confidence"]),
      confInput,
    );
    return row;
  }

  private bbaTable(bba: Record<string, number>): HTMLElement {
    const table = el("table", { class: "bba-table" });
    const head = el("tr");
    head.append(el("th", {}, ["element"]), el("th", {}, ["mapped mass"]));
    table.append(head);
    for (const [expression, mass] of Object.entries(bba)) {
      const row = el("tr");
      row.append(el("td", {}, [expression]), el("td", {}, [fmt(mass)]));
      table.append(row);
    }
    return table;
  }

  private emit(input: HTMLInputElement): void {
    const value = Number(input.value);
    if (!Number.isFinite(value)) return;
    clear(this.errorSlot);
    this.opts.onEdit?.(input.getAttribute("data-path") ?? "", value);
  }

  /** Surface service messages whose path points into this evaluation. */
  showErrors(items: ApiErrorItem[]): void {
    clear(this.errorSlot);
    const prefix = `evaluations.${this.opts.index}`;
    for (const item of items) {
      if (!item.path.startsWith(prefix) && item.path !== "$") continue;
      this.errorSlot.append(
        el("p", { class: "error" }, [`${item.path}: ${item.message}`]),
      );
    }
  }
}
