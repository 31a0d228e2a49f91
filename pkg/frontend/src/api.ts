import type {
  EvaluateResponse,
  ErrorBody,
  InputValue,
  ScenarioPayload,
  Topology,
  WhatIfResponse,
} from "./types.js";

/** Service rejected the request; carries the HTTP status and the detail text. */
export class ApiError extends Error {
  status: number;
  node?: string;

  constructor(status: number, body: ErrorBody) {
    super(body.detail ?? `HTTP ${status}`);
    this.status = status;
    this.node = body.node;
  }
}

/** Could not reach the service at all (down, refused, network). */
export class ServiceUnreachable extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${cause instanceof Error ? cause.message : String(cause)}`);
  }
}

/** What the session needs from the service; tests substitute fakes. */
export interface Api {
  getFramework(): Promise<Topology>;
  evaluate(inputs: Record<string, InputValue>): Promise<EvaluateResponse>;
  whatIf(
    baseline: Record<string, InputValue>,
    scenarios: ScenarioPayload[],
  ): Promise<WhatIfResponse>;
  putWeights(node: string, weights: number[]): Promise<Topology>;
}

export class ApiClient implements Api {
  baseUrl: string;

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  async getFramework(): Promise<Topology> {
    return this.request<Topology>("GET", "/framework");
  }

  async evaluate(inputs: Record<string, InputValue>): Promise<EvaluateResponse> {
    return this.request<EvaluateResponse>("POST", "/evaluate", { inputs });
  }

  async whatIf(
    baseline: Record<string, InputValue>,
    scenarios: ScenarioPayload[],
  ): Promise<WhatIfResponse> {
    return this.request<WhatIfResponse>("POST", "/whatif", { baseline, scenarios });
  }

  async putWeights(node: string, weights: number[]): Promise<Topology> {
    return this.request<Topology>("PUT", "/weights", { node, weights });
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ServiceUnreachable(err);
    }
    if (!response.ok) {
      let parsed: ErrorBody = { detail: `HTTP ${response.status}` };
      try {
        parsed = (await response.json()) as ErrorBody;
      } catch {
        // non-JSON error body; keep the status-only detail
      }
      throw new ApiError(response.status, parsed);
    }
    return (await response.json()) as T;
  }
}
