import { ApiError, ServiceUnreachable } from "./api.js";
import type { Api } from "./api.js";
import type {
  EvaluateResponse,
  InputValue,
  InternalTopo,
  NodeResultDoc,
  TopoNode,
  Topology,
  WhatIfResponse,
} from "./types.js";

export interface LeafInput {
  value: number;
  noAnswer: boolean;
}

/** A named set of leaf overrides, kept client-side until sent to /whatif. */
export interface ScenarioDraft {
  name: string;
  overrides: Record<string, number | null>;
}

export type Listener = () => void;

const DEFAULT_DEBOUNCE_MS = 250;

/**
 * Client session state: current leaf inputs, the latest service results,
 * and scenario drafts. All evaluation happens on the service; this class
 * only decides when to call it and what to remember.
 */
export class Session {
  readonly api: Api;
  topology: Topology | null = null;
  inputs: Map<string, LeafInput> = new Map();
  /** Last successful evaluation, retained across outages. */
  lastResult: NodeResultDoc | null = null;
  lastResultVersion: number | null = null;
  serviceDown = false;
  /** Nodes the service reported as unable to activate any rule. */
  uncoveredNodes: Set<string> = new Set();
  drafts: ScenarioDraft[] = [];
  lastWhatIf: WhatIfResponse | null = null;
  weightError: string | null = null;

  private debounceMs: number;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private listeners: Listener[] = [];
  private pending: Promise<void> | null = null;

  constructor(api: Api, debounceMs: number = DEFAULT_DEBOUNCE_MS) {
    this.api = api;
    this.debounceMs = debounceMs;
  }

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  /** Fetch topology and seed every leaf slider at its scale's middle anchor. */
  async start(): Promise<void> {
    this.topology = await this.api.getFramework();
    for (const leaf of this.topology.leaves) {
      if (!this.inputs.has(leaf)) {
        this.inputs.set(leaf, { value: this.defaultValue(leaf), noAnswer: false });
      }
    }
    this.notify();
    await this.evaluateNow();
  }

  defaultValue(leaf: string): number {
    const topo = this.topology;
    if (!topo) return 5;
    const scaleName = findNode(topo.nodes, leaf)?.scale;
    const scale = scaleName ? topo.scales[scaleName] : undefined;
    if (!scale || scale.anchors.length === 0) return 5;
    return scale.anchors[Math.floor((scale.anchors.length - 1) / 2)];
  }

  setInput(leaf: string, value: number): void {
    const entry = this.inputs.get(leaf) ?? { value, noAnswer: false };
    entry.value = value;
    entry.noAnswer = false;
    this.inputs.set(leaf, entry);
    this.notify();
    this.scheduleEvaluate();
  }

  setNoAnswer(leaf: string, on: boolean): void {
    const entry = this.inputs.get(leaf) ?? { value: this.defaultValue(leaf), noAnswer: on };
    entry.noAnswer = on;
    this.inputs.set(leaf, entry);
    this.notify();
    this.scheduleEvaluate();
  }

  inputPayload(): Record<string, InputValue> {
    const payload: Record<string, InputValue> = {};
    for (const [leaf, entry] of this.inputs) {
      payload[leaf] = entry.noAnswer ? null : entry.value;
    }
    return payload;
  }

  scheduleEvaluate(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.evaluateNow();
    }, this.debounceMs);
  }

  /** Run or join the in-flight evaluation; resolves when state is updated. */
  evaluateNow(): Promise<void> {
    if (this.pending) return this.pending;
    this.pending = this.doEvaluate().finally(() => {
      this.pending = null;
    });
    return this.pending;
  }

  /** Wait out any debounce timer and in-flight call; used by tests. */
  async settle(): Promise<void> {
    while (this.timer !== null || this.pending !== null) {
      if (this.timer !== null) {
        clearTimeout(this.timer);
        this.timer = null;
        await this.evaluateNow();
      } else if (this.pending !== null) {
        await this.pending;
      }
    }
  }

  private async doEvaluate(): Promise<void> {
    let response: EvaluateResponse;
    try {
      response = await this.api.evaluate(this.inputPayload());
    } catch (err) {
      if (err instanceof ServiceUnreachable) {
        this.serviceDown = true;
        this.notify();
        return;
      }
      if (err instanceof ApiError && err.status === 422) {
        this.serviceDown = false;
        this.uncoveredNodes = new Set(err.node ? [err.node] : []);
        this.notify();
        return;
      }
      throw err;
    }
    this.serviceDown = false;
    this.uncoveredNodes.clear();
    this.lastResult = response.result;
    this.lastResultVersion = response.framework_version;
    if (this.topology && response.framework_version > this.topology.version) {
      // another session changed weights; refresh topology to match
      this.topology = await this.api.getFramework();
    }
    this.notify();
  }

  /**
   * Internal nodes whose whole leaf subtree is toggled "no answer". No rule
   * can fire there, so the tree view badges them without asking the service.
   */
  blankSubtrees(): Set<string> {
    const blank = new Set<string>();
    const topo = this.topology;
    if (!topo) return blank;
    const visit = (node: TopoNode): boolean => {
      if (node.leaf) return this.inputs.get(node.name)?.noAnswer ?? false;
      const allBlank = node.children.map(visit).every(Boolean);
      if (allBlank) blank.add(node.name);
      return allBlank;
    };
    visit(topo.nodes);
    return blank;
  }

  addDraft(name: string): ScenarioDraft {
    const draft: ScenarioDraft = { name, overrides: {} };
    this.drafts.push(draft);
    this.notify();
    return draft;
  }

  removeDraft(name: string): void {
    this.drafts = this.drafts.filter((d) => d.name !== name);
    this.notify();
  }

  async runWhatIf(): Promise<WhatIfResponse> {
    const scenarios = this.drafts.map((d) => ({ name: d.name, overrides: d.overrides }));
    const report = await this.api.whatIf(this.inputPayload(), scenarios);
    this.lastWhatIf = report;
    this.notify();
    return report;
  }

  /**
   * Validate and apply one node's child weights. Zero or negative weights
   * never reach the service; the error is kept for inline display.
   */
  async applyWeights(node: string, weights: number[]): Promise<boolean> {
    for (const w of weights) {
      if (!Number.isFinite(w) || w <= 0) {
        this.weightError = `weights must be positive numbers, got ${w}`;
        this.notify();
        return false;
      }
    }
    this.weightError = null;
    try {
      this.topology = await this.api.putWeights(node, weights);
    } catch (err) {
      if (err instanceof ServiceUnreachable) {
        this.serviceDown = true;
        this.notify();
        return false;
      }
      if (err instanceof ApiError) {
        this.weightError = err.message;
        this.notify();
        return false;
      }
      throw err;
    }
    this.notify();
    await this.evaluateNow();
    return true;
  }
}

export function findNode(root: TopoNode, name: string): TopoNode | null {
  if (root.name === name) return root;
  if (!root.leaf) {
    for (const child of (root as InternalTopo).children) {
      const hit = findNode(child, name);
      if (hit) return hit;
    }
  }
  return null;
}

export function findResult(root: NodeResultDoc, name: string): NodeResultDoc | null {
  if (root.name === name) return root;
  for (const child of root.children ?? []) {
    const hit = findResult(child, name);
    if (hit) return hit;
  }
  return null;
}
