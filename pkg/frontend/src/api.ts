/**
 * Typed client for the lab service. Every UI value comes from one of
 * these calls; the client never computes routing state itself.
 */

export interface SessionInfo {
  id: string;
  scenario: string;
  created_at: string;
}

export interface ExecResult {
  output: string;
  events_appended: number;
}

export type TaskStatus = "pass" | "fail" | "not_applicable";

export interface TaskEntry {
  id: number;
  status: TaskStatus;
  evidence: string;
}

export interface TaskReport {
  group: number;
  tasks: TaskEntry[];
}

export type StateView = "route" | "bgp" | "ospf" | "run";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  private fetchFn: FetchLike;

  constructor(readonly baseUrl: string, fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return response;
  }

  async createSession(
    scenario: string,
    groups?: number,
    mode: "unconfigured" | "solved" = "unconfigured",
  ): Promise<string> {
    const params = groups === undefined ? {} : { groups };
    const response = await this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ scenario, params, mode }),
    });
    return (await response.json()).id;
  }

  async listSessions(): Promise<SessionInfo[]> {
    const response = await this.request("/sessions");
    return response.json();
  }

  async topology(sessionId: string): Promise<string> {
    const response = await this.request(`/sessions/${sessionId}/topology`);
    return response.text();
  }

  async exec(sessionId: string, device: string, command: string): Promise<ExecResult> {
    const response = await this.request(
      `/sessions/${sessionId}/devices/${encodeURIComponent(device)}/exec`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ command }),
      },
    );
    return response.json();
  }

  async stateView(sessionId: string, device: string, view: StateView): Promise<string> {
    const response = await this.request(
      `/sessions/${sessionId}/devices/${encodeURIComponent(device)}/state?view=${view}`,
    );
    return response.text();
  }

  async report(sessionId: string, group: number): Promise<TaskReport> {
    const response = await this.request(`/sessions/${sessionId}/report?group=${group}`);
    return response.json();
  }

  async saveProject(sessionId: string): Promise<ArrayBuffer> {
    const response = await this.request(`/sessions/${sessionId}/save`, { method: "POST" });
    return response.arrayBuffer();
  }

  async restoreProject(archive: ArrayBuffer): Promise<string> {
    const response = await this.request("/sessions/restore", {
      method: "POST",
      headers: { "content-type": "application/zip" },
      body: archive,
    });
    return (await response.json()).id;
  }

  eventsUrl(sessionId: string, fromSeq: number): string {
    return `${this.baseUrl}/sessions/${sessionId}/events?from=${fromSeq}`;
  }
}
