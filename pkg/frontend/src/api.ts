import type { ApiErrorItem, Report, ScenarioDoc, WhatifRequest } from "./types.js";

/** Service error with the path-anchored messages from the response body. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errors: ApiErrorItem[],
  ) {
    super(
      errors.length
        ? errors.map((e) => `${e.path}: ${e.message}`).join("; ")
        : `service returned ${status}`,
    );
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface ClientOptions {
  baseUrl?: string;
  fetchFn?: FetchLike;
}

/** Thin typed wrapper over the scenario service HTTP API. */
export class Client {
  readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(options: ClientOptions = {}) {
    this.baseUrl = (options.baseUrl ?? "http://127.0.0.1:8080").replace(/\/$/, "");
    this.fetchFn = options.fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const payload = await resp.json();
    if (!resp.ok) {
      const errors = (payload as { errors?: ApiErrorItem[] }).errors ?? [];
      throw new ApiError(resp.status, errors);
    }
    return payload as T;
  }

  createScenario(doc: ScenarioDoc): Promise<{ id: string }> {
    return this.request("POST", "/api/scenarios", doc);
  }

  getScenario(id: string): Promise<ScenarioDoc> {
    return this.request("GET", `/api/scenarios/${id}`);
  }

  putScenario(id: string, doc: ScenarioDoc): Promise<{ id: string; valid: boolean }> {
    return this.request("PUT", `/api/scenarios/${id}`, doc);
  }

  run(id: string, overrides?: { rule?: string; strategy?: string }): Promise<Report> {
    return this.request("POST", `/api/scenarios/${id}/run`, overrides ?? {});
  }

  whatif(id: string, req: WhatifRequest): Promise<Report> {
    return this.request("POST", `/api/scenarios/${id}/whatif`, req);
  }

  getReport(id: string): Promise<Report> {
    return this.request("GET", `/api/scenarios/${id}/report`);
  }

  save(id: string): Promise<{ id: string; path: string }> {
    return this.request("POST", `/api/scenarios/${id}/save`);
  }

  getSchema(): Promise<Record<string, unknown>> {
    return this.request("GET", "/api/schema");
  }
}
