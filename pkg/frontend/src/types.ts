/** Structural types for the service payloads, limited to the fields the UI reads. */

export interface ApiErrorItem {
  path: string;
  message: string;
}

export interface NodeDoc {
  id: string;
  label: string;
  kind?: "quantitative" | "qualitative";
  children?: NodeDoc[];
  judgments?: number[];
}

export interface IntervalDoc {
  lo: number;
  hi: number;
  confidence: number;
}

export interface EvaluationDoc {
  source: string;
  criterion: string;
  intervals?: IntervalDoc[];
  label?: string;
  confidence?: number;
}

export interface SourceDoc {
  id: string;
  reliability: number;
}

export interface ScenarioDoc {
  schema: string;
  frame: { mode: "DST" | "DSmT"; atoms: string[] };
  hierarchy: NodeDoc;
  mappings: Record<string, unknown>;
  sources: SourceDoc[];
  evaluations: EvaluationDoc[];
  fusion: { rule: string; importance: string };
  decision: { strategy: string; tie_break: string };
  options: Record<string, unknown>;
}

export interface Consistency {
  lambda_max: number;
  ci: number;
  cr: number;
}

export interface WeightsDoc {
  leaves: Record<string, number>;
  nodes: Record<string, { local: number; global: number }>;
  consistency: Record<string, Consistency>;
  warnings: string[];
}

export interface ProfileRow {
  element: string;
  mass: number;
  bel: number;
  pl: number;
}

export interface DecisionEntry {
  choice: string;
  scores: Record<string, number>;
  tie_break: string;
  warnings: string[];
}

export interface ProfileDoc {
  elements: ProfileRow[];
  betp: Record<string, number>;
  decisions: Record<string, DecisionEntry>;
  warnings: string[];
  conflict?: number;
  vacuous?: boolean;
}

export interface Staircase {
  cuts: [number, number, number][];
  necessity: { lo: number; hi: number; value: number }[];
}

export interface EvaluationEntry {
  source: string;
  criterion: string;
  bba: Record<string, number>;
  staircase?: Staircase;
}

export interface Report {
  schema: string;
  scenario: ScenarioDoc;
  rule: string;
  weights: WeightsDoc;
  importance: Record<string, number>;
  final: { bba: Record<string, number> };
  profile: ProfileDoc;
  decision: {
    strategy: string;
    tie_break: string;
    choice: string;
    warnings: string[];
  };
  evaluations?: EvaluationEntry[];
  step1?: Record<string, { sources: string[]; bba: Record<string, number> }>;
  audit?: unknown[];
}

export interface WhatifRequest {
  set?: Record<string, unknown>;
  rule?: string;
  strategy?: string;
}
