/**
 * Live capture viewer: the session event stream filtered down to the
 * capture records of one segment, kept strictly in sequence order.
 */

import { LabEvent } from "./events.js";

export interface CaptureRow {
  seq: number;
  kind: string;
  src: string;
  dst: string;
  ttl: number;
}

export type RowListener = (row: CaptureRow) => void;

export class CaptureViewer {
  private rows_: CaptureRow[] = [];
  private listeners: RowListener[] = [];

  constructor(public segment: string | null = null) {}

  get rows(): readonly CaptureRow[] {
    return this.rows_;
  }

  onRow(listener: RowListener): void {
    this.listeners.push(listener);
  }

  /** Switch the viewed segment; the list restarts empty. */
  selectSegment(segment: string | null): void {
    this.segment = segment;
    this.rows_ = [];
  }

  /** Feed every session event through here; non-captures are ignored. */
  offer(event: LabEvent): void {
    if (event.kind !== "capture" || this.segment === null) return;
    if (event.segment !== this.segment) return;
    const last = this.rows_[this.rows_.length - 1];
    if (last !== undefined && event.seq <= last.seq) return; // out-of-order replay
    const payload = event.payload as {
      kind: string;
      src: string;
      dst: string;
      ttl: number;
    };
    const row: CaptureRow = {
      seq: event.seq,
      kind: payload.kind,
      src: payload.src,
      dst: payload.dst,
      ttl: payload.ttl,
    };
    this.rows_.push(row);
    for (const listener of this.listeners) listener(row);
  }
}
