/** The possibility staircase and its certainty annotations come straight
 * from the report's published cuts, including the quoted N value for each
 * stated interval. */

import { beforeEach, describe, expect, it } from "vitest";
import type { Report, ScenarioDoc } from "../src/types.js";
import { EvaluationPanel, staircaseSvg } from "../src/components/evaluationPanel.js";
import { fmt, fmtInterval } from "../src/format.js";
import { fixture } from "./helpers.js";

const refScenario = fixture<ScenarioDoc>("reference-scenario");
const refReport = fixture<Report>("reference-report");

function occupantsPanel(): EvaluationPanel {
  const index = refScenario.evaluations.findIndex(
    (e) => e.criterion === "occupants" && e.source === "expert-a",
  );
  expect(index).toBeGreaterThanOrEqual(0);
  const evaluation = refScenario.evaluations[index]!;
  const entry = refReport.evaluations?.find(
    (e) => e.criterion === "occupants" && e.source === "expert-a",
  );
  expect(entry?.staircase).toBeDefined();
  return new EvaluationPanel({ evaluation, index, entry: entry! });
}

describe("possibility staircase", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("annotates each stated interval with the certainty the service computed", () => {
    const panel = occupantsPanel();
    document.body.append(panel.root);

    const entry = refReport.evaluations!.find(
      (e) => e.criterion === "occupants" && e.source === "expert-a",
    )!;
    const notes = Array.from(
      document.body.querySelectorAll(".necessity"),
      (n) => n.textContent,
    );
    expect(notes).toEqual(
      entry.staircase!.necessity.map(
        (n) => `N(${fmtInterval(n.lo, n.hi)}) = ${fmt(n.value)}`,
      ),
    );
    // the quoted certainty for the inner interval is three quarters
    expect(notes).toContain("N([8, 15]) = 0.75");
  });

  it("draws one box per cut, labelled with the cut's own level", () => {
    const entry = refReport.evaluations!.find(
      (e) => e.criterion === "occupants" && e.source === "expert-a",
    )!;
    const svg = staircaseSvg(entry.staircase!);
    document.body.append(svg);

    const rects = document.body.querySelectorAll("rect.cut");
    expect(rects.length).toBe(entry.staircase!.cuts.length);
    const levels = Array.from(
      document.body.querySelectorAll("text.cut-level"),
      (n) => n.textContent,
    );
    expect(levels).toEqual(entry.staircase!.cuts.map((c) => fmt(c[2])));
    expect(levels).toEqual(["1", "0.25"]);
  });

  it("labels the x axis only with the cut endpoints the service reported", () => {
    const entry = refReport.evaluations!.find(
      (e) => e.criterion === "occupants" && e.source === "expert-a",
    )!;
    const svg = staircaseSvg(entry.staircase!);
    document.body.append(svg);

    const ticks = Array.from(
      document.body.querySelectorAll("text.tick"),
      (n) => n.textContent,
    ).sort();
    const endpoints = new Set<string>();
    for (const [lo, hi] of entry.staircase!.cuts) {
      endpoints.add(fmt(lo));
      endpoints.add(fmt(hi));
    }
    expect(ticks).toEqual(Array.from(endpoints).sort());
  });

  it("omits the staircase for qualitative evaluations", () => {
    const index = refScenario.evaluations.findIndex(
      (e) => e.criterion === "infrastructure" && e.source === "expert-a",
    );
    const evaluation = refScenario.evaluations[index]!;
    const entry = refReport.evaluations?.find(
      (e) => e.criterion === "infrastructure" && e.source === "expert-a",
    )!;
    const panel = new EvaluationPanel({
      evaluation,
      index,
      entry,
      labels: ["none", "scattered", "dense", "critical"],
    });
    document.body.append(panel.root);
    expect(document.body.querySelector("svg.staircase")).toBeNull();
    expect(document.body.querySelectorAll(".necessity").length).toBe(0);
  });
});
