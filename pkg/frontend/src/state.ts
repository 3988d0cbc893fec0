import type { Report } from "./types.js";

/** Pipeline stages in execution order, mirroring the service. */
export const STAGES = ["weights", "mapping", "step1", "step2", "decision"] as const;
export type Stage = (typeof STAGES)[number];

const DOWNSTREAM: Record<Stage, Stage[]> = {
  weights: ["weights", "step2", "decision"],
  mapping: ["mapping", "step1", "step2", "decision"],
  step1: ["step1", "step2", "decision"],
  step2: ["step2", "decision"],
  decision: ["decision"],
};

/** Which stage a document path feeds, by its head segment. */
export function stageForPath(path: string): Stage[] {
  const head = path.split(".", 1)[0];
  if (head === "hierarchy") return ["weights"];
  if (head === "mappings" || head === "evaluations" || head === "options") {
    return ["mapping"];
  }
  if (head === "sources") {
    return path.endsWith(".reliability") ? ["step1"] : [...STAGES];
  }
  if (head === "fusion") return ["step1"];
  if (head === "decision") return ["decision"];
  return [...STAGES];
}

export interface ComparisonSlot {
  label: string;
  scenarioId: string;
  report: Report;
}

export interface ViewState {
  scenarioId: string | null;
  dirty: Record<Stage, boolean>;
  rule: string;
  strategy: string;
  comparisons: ComparisonSlot[];
}

export type Action =
  | { type: "loaded"; id: string; rule: string; strategy: string }
  | { type: "edited"; path: string }
  | { type: "ran" }
  | { type: "rule-selected"; rule: string }
  | { type: "strategy-selected"; strategy: string }
  | { type: "comparison-added"; slot: ComparisonSlot }
  | { type: "comparisons-cleared" };

const CLEAN: Record<Stage, boolean> = {
  weights: false,
  mapping: false,
  step1: false,
  step2: false,
  decision: false,
};

export function initialState(): ViewState {
  return {
    scenarioId: null,
    dirty: { ...CLEAN },
    rule: "pcr6",
    strategy: "max-betp",
    comparisons: [],
  };
}

export function isDirty(state: ViewState): boolean {
  return STAGES.some((s) => state.dirty[s]);
}

/** Pure state transition; throws only on lineage violations. */
export function reduce(state: ViewState, action: Action): ViewState {
  switch (action.type) {
    case "loaded":
      return {
        scenarioId: action.id,
        dirty: { ...CLEAN },
        rule: action.rule,
        strategy: action.strategy,
        comparisons: [],
      };
    case "edited": {
      const dirty = { ...state.dirty };
      for (const root of stageForPath(action.path)) {
        for (const stage of DOWNSTREAM[root]) dirty[stage] = true;
      }
      return { ...state, dirty };
    }
    case "ran":
      return { ...state, dirty: { ...CLEAN } };
    case "rule-selected":
      return { ...state, rule: action.rule };
    case "strategy-selected":
      return { ...state, strategy: action.strategy };
    case "comparison-added": {
      if (action.slot.scenarioId !== state.scenarioId) {
        throw new Error(
          `comparison slot belongs to scenario ${action.slot.scenarioId}, ` +
            `not the active ${state.scenarioId}`,
        );
      }
      // three slots; the oldest falls off
      const comparisons = [...state.comparisons, action.slot].slice(-3);
      return { ...state, comparisons };
    }
    case "comparisons-cleared":
      return { ...state, comparisons: [] };
  }
}
