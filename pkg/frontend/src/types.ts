// Wire types mirroring the service payloads. The UI never computes
// inference itself; everything numeric on screen came from one of these.

export interface ScaleDoc {
  grades: string[];
  anchors: number[];
  utilities: number[];
}

export interface LeafTopo {
  name: string;
  scale: string;
  leaf: true;
}

export interface InternalTopo {
  name: string;
  scale: string;
  leaf: false;
  weights: number[];
  rule_count: number;
  children: TopoNode[];
}

export type TopoNode = LeafTopo | InternalTopo;

export interface Topology {
  name: string;
  version: number;
  scales: Record<string, ScaleDoc>;
  leaves: string[];
  nodes: TopoNode;
}

/** A leaf reading as the service accepts it: crisp, belief map, or no answer. */
export type InputValue = number | null | Record<string, number>;

export interface NodeResultDoc {
  name: string;
  crisp: number;
  percent: number;
  unassigned: number;
  distribution: Record<string, number>;
  children?: NodeResultDoc[];
}

export interface EvaluateResponse {
  framework_version: number;
  result: NodeResultDoc;
}

export interface ScenarioPayload {
  name: string;
  overrides: Record<string, InputValue>;
}

export interface ScenarioOutcomeDoc {
  scenario: string;
  error?: string;
  root_delta?: number;
  deltas?: Record<string, number>;
  result?: NodeResultDoc;
}

export interface WhatIfResponse {
  baseline: NodeResultDoc;
  scenarios: ScenarioOutcomeDoc[];
  framework_version: number;
}

export interface ErrorBody {
  detail: string;
  node?: string;
}
