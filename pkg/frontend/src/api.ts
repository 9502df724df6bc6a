import {
  AutoResponse,
  EnabledResponse,
  StateResponse,
  StepResponse,
  TraceResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

export class StaleStateError extends ApiError {}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    if (response.status === 409) throw new StaleStateError(409, detail);
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class SessionApi {
  constructor(private base: string = "") {}

  createSession(config: unknown): Promise<StateResponse> {
    return request(`${this.base}/sessions`, {
      method: "POST",
      body: JSON.stringify(config),
    });
  }

  state(id: string): Promise<StateResponse> {
    return request(`${this.base}/sessions/${id}/state`);
  }

  enabled(id: string): Promise<EnabledResponse> {
    return request(`${this.base}/sessions/${id}/enabled`);
  }

  step(id: string, index: number, revision: number): Promise<StepResponse> {
    return request(`${this.base}/sessions/${id}/step`, {
      method: "POST",
      body: JSON.stringify({ index, revision }),
    });
  }

  undo(id: string): Promise<StateResponse> {
    return request(`${this.base}/sessions/${id}/undo`, { method: "POST" });
  }

  trace(id: string): Promise<TraceResponse> {
    return request(`${this.base}/sessions/${id}/trace`);
  }

  auto(
    id: string,
    policy: "random" | "tau-only",
    steps: number,
    seed?: number,
  ): Promise<AutoResponse> {
    return request(`${this.base}/sessions/${id}/auto`, {
      method: "POST",
      body: JSON.stringify({ policy, steps, seed }),
    });
  }
}
