/** Decision profile dashboard.
 *
 * Shows the fused profile behind the recommendation: per-element mass,
 * belief and plausibility bars, the pignistic scores, and what each
 * strategy would pick. Up to three what-if reports can sit side by side
 * for comparison. A stale banner appears when the draft has moved on
 * since the report was produced.
 */

import type { Report } from "../types.js";
import type { ComparisonSlot } from "../state.js";
import { fmt } from "../format.js";
import { el, clear } from "../dom.js";

export interface DashboardOptions {
  report: Report;
  comparisons?: ComparisonSlot[];
  stale?: boolean;
}

function bar(kind: string, value: number): HTMLElement {
  const cell = el("td", { class: `bar-cell ${kind}` });
  const fill = el("span", { class: "bar-fill" });
  fill.setAttribute("style", `width: ${Math.max(0, Math.min(1, value)) * 100}%`);
  cell.append(fill, el("span", { class: "bar-value" }, [fmt(value)]));
  return cell;
}

function profileTable(report: Report): HTMLElement {
  const table = el("table", { class: "profile-table" });
  const head = el("tr");
  for (const title of ["element", "mass", "belief", "plausibility"]) {
    head.append(el("th", {}, [title]));
  }
  table.append(head);
  for (const row of report.profile.elements) {
    const tr = el("tr");
    tr.append(el("td", { class: "element" }, [row.element]));
    tr.append(bar("mass", row.mass), bar("bel", row.bel), bar("pl", row.pl));
    table.append(tr);
  }
  return table;
}

function betpTable(report: Report): HTMLElement {
  const table = el("table", { class: "betp-table" });
  const head = el("tr");
  head.append(el("th", {}, ["alternative"]), el("th", {}, ["pignistic score"]));
  table.append(head);
  for (const [atom, score] of Object.entries(report.profile.betp)) {
    const tr = el("tr");
    tr.append(el("td", {}, [atom]), bar("betp", score));
    table.append(tr);
  }
  return table;
}

function decisionBadges(report: Report): HTMLElement {
  const wrap = el("div", { class: "decision-badges" });
  for (const [strategy, entry] of Object.entries(report.profile.decisions)) {
    const badge = el("div", { class: "decision-badge" });
    if (strategy === report.decision.strategy) badge.classList.add("active");
    badge.append(el("span", { class: "strategy" }, [strategy]));
    badge.append(el("span", { class: "choice" }, [entry.choice]));
    const score = entry.scores[entry.choice];
    if (score !== undefined) {
      badge.append(el("span", { class: "score" }, [fmt(score)]));
    }
    for (const warning of entry.warnings) {
      badge.append(el("p", { class: "warning" }, [warning]));
    }
    wrap.append(badge);
  }
  return wrap;
}

function warningList(warnings: string[]): HTMLElement {
  const wrap = el("div", { class: "profile-warnings" });
  for (const warning of warnings) {
    wrap.append(el("p", { class: "warning" }, [warning]));
  }
  return wrap;
}

function slotColumn(slot: ComparisonSlot): HTMLElement {
  const column = el("div", { class: "comparison-slot" });
  column.append(el("h4", {}, [slot.label]));
  column.append(el("p", { class: "slot-rule" }, [`rule: ${slot.report.rule}`]));
  column.append(
    el("p", { class: "slot-choice" }, [`choice: ${slot.report.decision.choice}`]),
  );
  const table = el("table", { class: "slot-betp" });
  for (const [atom, score] of Object.entries(slot.report.profile.betp)) {
    const tr = el("tr");
    tr.append(el("td", {}, [atom]), el("td", {}, [fmt(score)]));
    table.append(tr);
  }
  column.append(table);
  return column;
}

export class ProfileDashboard {
  readonly root: HTMLElement;

  constructor(opts: DashboardOptions) {
    this.root = el("section", { class: "profile-dashboard" });
    this.update(opts);
  }

  update(opts: DashboardOptions): void {
    const { report, comparisons = [], stale = false } = opts;
    clear(this.root);
    if (stale) {
      this.root.append(
        el("p", { class: "stale-banner" }, [
          "the draft changed after this report was produced; run again to refresh",
        ]),
      );
    }
    const headline = el("div", { class: "headline" });
    headline.append(el("span", { class: "headline-rule" }, [`rule: ${report.rule}`]));
    headline.append(
      el("span", { class: "headline-choice" }, [`recommendation: ${report.decision.choice}`]),
    );
    this.root.append(headline);
    this.root.append(decisionBadges(report));
    this.root.append(profileTable(report));
    this.root.append(betpTable(report));
    if (report.profile.conflict !== undefined) {
      this.root.append(
        el("p", { class: "conflict-note" }, [`unresolved conflict: ${fmt(report.profile.conflict)}`]),
      );
    }
    this.root.append(warningList(report.profile.warnings));
    if (comparisons.length) {
      const row = el("div", { class: "comparison-row" });
      for (const slot of comparisons) row.append(slotColumn(slot));
      this.root.append(row);
    }
  }
}
