/**
 * Task report panel: pass/fail badges straight from the report
 * endpoint, re-fetched whenever a console command appended events
 * (i.e. changed the session).
 */

import { ApiClient, TaskEntry, TaskReport } from "./api.js";
import { ConsolePane } from "./console.js";
import { EventStream } from "./events.js";

export type Badge = "green" | "red" | "grey";

export interface TaskBadge {
  id: number;
  badge: Badge;
  status: string;
  evidence: string;
}

export function badgeFor(status: TaskEntry["status"]): Badge {
  if (status === "pass") return "green";
  if (status === "fail") return "red";
  return "grey";
}

export type PanelListener = (badges: TaskBadge[]) => void;

export class TaskPanel {
  private badges_: TaskBadge[] = [];
  private listeners: PanelListener[] = [];
  lastReport: TaskReport | null = null;

  constructor(
    private api: ApiClient,
    readonly sessionId: string,
    public group: number,
  ) {}

  get badges(): readonly TaskBadge[] {
    return this.badges_;
  }

  onChange(listener: PanelListener): void {
    this.listeners.push(listener);
  }

  /** Re-fetch after any exec that changed the session. */
  follow(pane: ConsolePane): void {
    pane.onExec((_entry, result) => {
      if (result.events_appended > 0) void this.refresh();
    });
  }

  /** Polling-free variant: refresh whenever the session reconverges. */
  followStream(stream: EventStream): void {
    stream.onEvent((event) => {
      if (event.kind === "converged") void this.refresh();
    });
  }

  async refresh(): Promise<TaskBadge[]> {
    const report = await this.api.report(this.sessionId, this.group);
    this.lastReport = report;
    this.badges_ = report.tasks.map((task) => ({
      id: task.id,
      badge: badgeFor(task.status),
      status: task.status,
      evidence: task.evidence,
    }));
    for (const listener of this.listeners) listener(this.badges_);
    return this.badges_;
  }
}
