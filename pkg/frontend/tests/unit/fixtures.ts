import type { Api } from "../../src/api.js";
import type {
  EvaluateResponse,
  InputValue,
  NodeResultDoc,
  ScenarioPayload,
  Topology,
  WhatIfResponse,
} from "../../src/types.js";

// mirrors the two-leaf diagonal framework the service tests use
export function toyTopology(version = 1): Topology {
  return {
    name: "toy",
    version,
    scales: {
      five_grade: {
        grades: ["Poor", "Satisfactory", "Good", "Very Good", "Excellent"],
        anchors: [4, 5, 6, 7, 10],
        utilities: [4, 5, 6, 7, 10],
      },
    },
    leaves: ["quality", "adoption"],
    nodes: {
      name: "overall",
      scale: "five_grade",
      leaf: false,
      weights: [1, 1],
      rule_count: 25,
      children: [
        { name: "quality", scale: "five_grade", leaf: true },
        { name: "adoption", scale: "five_grade", leaf: true },
      ],
    },
  };
}

export function nodeResult(
  name: string,
  crisp: number,
  distribution: Record<string, number>,
  unassigned = 0,
  children?: NodeResultDoc[],
): NodeResultDoc {
  const doc: NodeResultDoc = {
    name,
    crisp,
    percent: crisp * 10,
    unassigned,
    distribution: {
      Poor: 0,
      Satisfactory: 0,
      Good: 0,
      "Very Good": 0,
      Excellent: 0,
      ...distribution,
    },
  };
  if (children) doc.children = children;
  return doc;
}

export function toyResult(): NodeResultDoc {
  return nodeResult("overall", 6.5, { Good: 0.5, "Very Good": 0.5 }, 0, [
    nodeResult("quality", 6.5, { Good: 0.5, "Very Good": 0.5 }),
    nodeResult("adoption", 6.0, { Good: 1.0 }),
  ]);
}

export interface Call {
  method: string;
  args: unknown[];
}

/** Canned service; records calls and serves queued or default responses. */
export class FakeApi implements Api {
  calls: Call[] = [];
  topology: Topology = toyTopology();
  evaluateResponses: Array<EvaluateResponse | Error> = [];
  whatIfResponse: WhatIfResponse | Error | null = null;
  putWeightsResponse: Topology | Error | null = null;

  callsTo(method: string): Call[] {
    return this.calls.filter((c) => c.method === method);
  }

  async getFramework(): Promise<Topology> {
    this.calls.push({ method: "getFramework", args: [] });
    return this.topology;
  }

  async evaluate(inputs: Record<string, InputValue>): Promise<EvaluateResponse> {
    this.calls.push({ method: "evaluate", args: [inputs] });
    const next = this.evaluateResponses.shift();
    if (next instanceof Error) throw next;
    if (next) return next;
    return { framework_version: this.topology.version, result: toyResult() };
  }

  async whatIf(
    baseline: Record<string, InputValue>,
    scenarios: ScenarioPayload[],
  ): Promise<WhatIfResponse> {
    this.calls.push({ method: "whatIf", args: [baseline, scenarios] });
    if (this.whatIfResponse instanceof Error) throw this.whatIfResponse;
    if (this.whatIfResponse) return this.whatIfResponse;
    return { baseline: toyResult(), scenarios: [], framework_version: this.topology.version };
  }

  async putWeights(node: string, weights: number[]): Promise<Topology> {
    this.calls.push({ method: "putWeights", args: [node, weights] });
    if (this.putWeightsResponse instanceof Error) throw this.putWeightsResponse;
    if (this.putWeightsResponse) return this.putWeightsResponse;
    const topo = toyTopology(this.topology.version + 1);
    this.topology = topo;
    return topo;
  }
}
