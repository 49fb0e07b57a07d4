/**
 * Resumable client for the session event stream.
 *
 * The service replays events from any sequence number, so the client
 * tracks the next sequence it needs and reconnects from there after a
 * drop: no gaps, no duplicates, in order. Implemented over fetch so the
 * same code runs in the browser and under node tests.
 */

export interface LabEvent {
  seq: number;
  kind: string;
  device?: string;
  segment?: string;
  payload: Record<string, unknown>;
}

export type EventHandler = (event: LabEvent) => void;
export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class EventStream {
  private nextSeq: number;
  private handlers: EventHandler[] = [];
  private stopped = false;
  private backoffMs = 500;
  private abort: AbortController | null = null;
  private fetchFn: FetchLike;

  constructor(
    private urlFor: (fromSeq: number) => string,
    fromSeq = 1,
    fetchFn?: FetchLike,
  ) {
    this.nextSeq = fromSeq;
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  onEvent(handler: EventHandler): void {
    this.handlers.push(handler);
  }

  /** Last delivered sequence number plus one. */
  get resumePoint(): number {
    return this.nextSeq;
  }

  stop(): void {
    this.stopped = true;
    this.abort?.abort();
  }

  /** Runs until stop(); resolves once stopped. */
  async run(): Promise<void> {
    while (!this.stopped) {
      try {
        await this.consumeOnce();
        this.backoffMs = 500;
      } catch {
        if (this.stopped) break;
        await sleep(this.backoffMs);
        this.backoffMs = Math.min(this.backoffMs * 2, 10000);
      }
    }
  }

  private async consumeOnce(): Promise<void> {
    this.abort = new AbortController();
    const response = await this.fetchFn(this.urlFor(this.nextSeq), {
      signal: this.abort.signal,
      headers: { accept: "text/event-stream" },
    });
    if (!response.ok || response.body === null) {
      throw new Error(`event stream failed: ${response.status}`);
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let newline: number;
      while ((newline = buffer.indexOf("\n")) >= 0) {
        const line = buffer.slice(0, newline).trimEnd();
        buffer = buffer.slice(newline + 1);
        this.handleLine(line);
      }
    }
  }

  private handleLine(line: string): void {
    if (!line.startsWith("data: ")) return; // keepalive comments etc.
    const event = JSON.parse(line.slice("data: ".length)) as LabEvent;
    if (event.seq < this.nextSeq) return; // replayed duplicate after resume
    this.nextSeq = event.seq + 1;
    for (const handler of this.handlers) handler(event);
  }
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
