/** Editing one judgment cell sends exactly one what-if request and the
 * consistency badge plus the weight bars repaint from the response. */

import { beforeEach, describe, expect, it } from "vitest";
import { Client } from "../src/api.js";
import type { Report, ScenarioDoc } from "../src/types.js";
import { MatrixView, judgmentPair } from "../src/components/matrixView.js";
import { fmt } from "../src/format.js";
import { fakeFetch, fixture, flush } from "./helpers.js";

const wsScenario = fixture<ScenarioDoc>("workshop-scenario");
const wsReport = fixture<Report>("workshop-report");
const wsWhatif = fixture<Report>("workshop-whatif");

function mountView() {
  const { fetchFn, calls } = fakeFetch([{ match: "/whatif", body: wsWhatif }]);
  const view = new MatrixView({
    client: new Client({ baseUrl: "http://svc.test", fetchFn }),
    scenarioId: "ws-1",
    nodePath: "hierarchy",
    node: wsScenario.hierarchy,
    report: wsReport,
  });
  document.body.append(view.root);
  return { view, calls };
}

describe("matrix what-if round trip", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("maps judgment slots onto the upper triangle row by row", () => {
    expect(judgmentPair(3, 0)).toEqual([0, 1]);
    expect(judgmentPair(3, 1)).toEqual([0, 2]);
    expect(judgmentPair(3, 2)).toEqual([1, 2]);
    expect(() => judgmentPair(3, 3)).toThrow("out of range");
  });

  it("renders one input per judgment, none for the mirrored cells", () => {
    mountView();
    const inputs = document.body.querySelectorAll("input.judgment");
    expect(inputs.length).toBe(wsScenario.hierarchy.judgments?.length);
    expect(document.body.querySelectorAll("td.reciprocal").length).toBe(inputs.length);
  });

  it("sends exactly one request per committed cell edit", async () => {
    const { calls } = mountView();
    const input = document.body.querySelector<HTMLInputElement>(
      'input[data-judgment="1"]',
    );
    expect(input).not.toBeNull();
    input!.value = "2";
    input!.dispatchEvent(new Event("change"));
    await flush();

    expect(calls.length).toBe(1);
    const call = calls[0]!;
    expect(call.method).toBe("POST");
    expect(call.url).toBe("http://svc.test/api/scenarios/ws-1/whatif");
    expect(call.body).toEqual({ set: { "hierarchy.judgments.1": 2 } });
  });

  it("updates the consistency badge from the what-if response", async () => {
    mountView();
    const badge = () => document.body.querySelector(".cr-badge")?.textContent;
    const before = badge();
    expect(before).toBe(`CR ${fmt(wsReport.weights.consistency["workshop"]!.cr)}`);

    const input = document.body.querySelector<HTMLInputElement>(
      'input[data-judgment="1"]',
    );
    input!.value = "2";
    input!.dispatchEvent(new Event("change"));
    await flush();

    const after = badge();
    expect(after).toBe(`CR ${fmt(wsWhatif.weights.consistency["workshop"]!.cr)}`);
    expect(after).not.toBe(before);
  });

  it("repaints the weight bars with the responded local weights", async () => {
    mountView();
    const input = document.body.querySelector<HTMLInputElement>(
      'input[data-judgment="1"]',
    );
    input!.value = "2";
    input!.dispatchEvent(new Event("change"));
    await flush();

    const values = Array.from(
      document.body.querySelectorAll(".weight-value"),
      (n) => n.textContent,
    );
    const children = wsScenario.hierarchy.children ?? [];
    expect(values).toEqual(
      children.map((c) => fmt(wsWhatif.weights.nodes[c.id]!.local)),
    );
  });

  it("rejects non-positive judgments locally without calling the service", async () => {
    const { calls } = mountView();
    const input = document.body.querySelector<HTMLInputElement>(
      'input[data-judgment="0"]',
    );
    input!.value = "-3";
    input!.dispatchEvent(new Event("change"));
    await flush();

    expect(calls.length).toBe(0);
    expect(document.body.querySelector(".matrix-errors .error")?.textContent).toContain(
      "positive",
    );
  });
});
