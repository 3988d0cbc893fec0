/** Interval editing guards: crossed bounds never reach the service, and
 * service messages land on the panel that owns the path. */

import { beforeEach, describe, expect, it } from "vitest";
import type { Report, ScenarioDoc } from "../src/types.js";
import { EvaluationPanel } from "../src/components/evaluationPanel.js";
import { fixture } from "./helpers.js";

const refScenario = fixture<ScenarioDoc>("reference-scenario");
const refReport = fixture<Report>("reference-report");

function intervalPanel(onEdit?: (path: string, value: number | string) => void) {
  const index = refScenario.evaluations.findIndex(
    (e) => e.criterion === "occupants" && e.source === "expert-a",
  );
  const evaluation = refScenario.evaluations[index]!;
  const entry = refReport.evaluations?.find(
    (e) => e.criterion === "occupants" && e.source === "expert-a",
  )!;
  const panel = new EvaluationPanel({
    evaluation,
    index,
    entry,
    ...(onEdit ? { onEdit } : {}),
  });
  document.body.append(panel.root);
  return { panel, index };
}

describe("interval editing", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("emits the dotted path of the edited field", () => {
    const edits: Array<[string, number | string]> = [];
    const { index } = intervalPanel((path, value) => edits.push([path, value]));
    const input = document.body.querySelector<HTMLInputElement>("input.interval-lo");
    input!.value = "9";
    input!.dispatchEvent(new Event("change"));
    expect(edits).toEqual([[`evaluations.${index}.intervals.0.lo`, 9]]);
  });

  it("blocks an upper bound dragged below the lower bound", () => {
    const edits: Array<[string, number | string]> = [];
    intervalPanel((path, value) => edits.push([path, value]));
    const row = document.body.querySelector(".interval-row")!;
    const hi = row.querySelector<HTMLInputElement>("input.interval-hi")!;
    const original = hi.value;
    hi.value = "2";
    hi.dispatchEvent(new Event("change"));
    expect(edits).toEqual([]);
    expect(hi.value).toBe(original);
    expect(document.body.querySelector(".evaluation-errors .error")?.textContent).toContain(
      "bounds may not cross",
    );
  });

  it("shows only the service messages addressed to this evaluation", () => {
    const { panel, index } = intervalPanel();
    panel.showErrors([
      { path: `evaluations.${index}.intervals.0`, message: "statement levels must reach 1" },
      { path: "evaluations.99.intervals.0", message: "someone else's problem" },
    ]);
    const text = document.body.querySelector(".evaluation-errors")?.textContent ?? "";
    expect(text).toContain("statement levels must reach 1");
    expect(text).not.toContain("someone else's problem");
  });
});
