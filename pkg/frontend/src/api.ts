/**
 * Thin typed client for the scheduling server's JSON endpoints.
 *
 * Methods resolve with {status, body} for any HTTP answer, including 4xx/5xx,
 * so callers can branch on the documented status codes. Only transport
 * failures reject; the UI turns those into the "server unreachable" banner.
 * fetch is injectable for tests.
 */

export interface ApiError {
  code: string;
  ids?: number[];
  message?: string;
}

export interface ValidateResponse {
  ok: boolean;
  errors: ApiError[];
}

export interface PlanAssignment {
  task: number;
  resource: number;
  machine: number;
  pe: number;
  start: number;
  finish: number;
  cost: number;
}

export interface PlanDoc {
  assignments: PlanAssignment[];
  makespan: number;
  total_cost: number;
  resource_order_used: number[];
}

export interface ScheduleResponse {
  ok: boolean;
  plan?: PlanDoc;
  errors?: ApiError[];
}

export interface GanttBarDoc {
  task: number;
  name: string;
  start: number;
  finish: number;
  cost: number;
}

export interface GanttRowDoc {
  label: string;
  resource: string;
  machine: number;
  pe: number;
  bars: GanttBarDoc[];
}

export interface GanttDoc {
  rows: GanttRowDoc[];
  time_axis: number[];
  makespan: number;
}

export interface ResultBody {
  plan: PlanDoc;
  simulated: PlanAssignment[];
  makespan: number;
  total_cost: number;
  per_resource_utilization: Record<string, number>;
  events_processed: number;
}

export interface SimulateResponse {
  ok: boolean;
  result?: ResultBody;
  gantt?: GanttDoc;
  errors?: ApiError[];
}

export interface AlgorithmsResponse {
  algorithms: string[];
  orders: string[];
}

export interface RunOptions {
  algorithm?: string;
  resource_order?: string;
}

export interface ApiReply<T> {
  status: number;
  body: T;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = fetch,
  ) {}

  private async post<T>(path: string, payload: unknown): Promise<ApiReply<T>> {
    const response = await this.fetchFn(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    return { status: response.status, body: (await response.json()) as T };
  }

  validate(dagDoc: unknown): Promise<ApiReply<ValidateResponse>> {
    return this.post("/api/validate", dagDoc);
  }

  schedule(
    dagDoc: unknown,
    resourcesDoc: unknown,
    options?: RunOptions,
  ): Promise<ApiReply<ScheduleResponse>> {
    return this.post("/api/schedule", {
      dag: dagDoc,
      resources: resourcesDoc,
      ...(options ? { options } : {}),
    });
  }

  simulate(
    dagDoc: unknown,
    resourcesDoc: unknown,
    options?: RunOptions,
  ): Promise<ApiReply<SimulateResponse>> {
    return this.post("/api/simulate", {
      dag: dagDoc,
      resources: resourcesDoc,
      ...(options ? { options } : {}),
    });
  }

  async algorithms(): Promise<ApiReply<AlgorithmsResponse>> {
    const response = await this.fetchFn(this.base + "/api/algorithms");
    return {
      status: response.status,
      body: (await response.json()) as AlgorithmsResponse,
    };
  }
}

/**
 * Serializes simulate calls: at most one request is in flight, and while one
 * is pending further starts are refused. Drives the Run button's disabled
 * state.
 */
export class RunGate {
  private inFlight = false;

  get pending(): boolean {
    return this.inFlight;
  }

  async run<T>(action: () => Promise<T>): Promise<T> {
    if (this.inFlight) {
      throw new Error("a run is already in progress");
    }
    this.inFlight = true;
    try {
      return await action();
    } finally {
      this.inFlight = false;
    }
  }
}
