/**
 * One device console: an append-only scrollback of (command, response)
 * pairs. Commands go verbatim to the exec endpoint and responses come
 * back verbatim — parse errors included, rendered inline like any
 * other output.
 */

import { ApiClient, ExecResult } from "./api.js";

export interface ConsoleEntry {
  command: string;
  response: string;
}

export type ExecListener = (entry: ConsoleEntry, result: ExecResult) => void;

export class ConsolePane {
  private entries: ConsoleEntry[] = [];
  private listeners: ExecListener[] = [];
  readonly history: string[] = [];

  constructor(
    private api: ApiClient,
    readonly sessionId: string,
    readonly device: string,
  ) {}

  get scrollback(): readonly ConsoleEntry[] {
    return this.entries;
  }

  onExec(listener: ExecListener): void {
    this.listeners.push(listener);
  }

  async run(command: string): Promise<string> {
    const result = await this.api.exec(this.sessionId, this.device, command);
    const entry: ConsoleEntry = { command, response: result.output };
    this.entries.push(entry);
    this.history.push(command);
    for (const listener of this.listeners) listener(entry, result);
    return result.output;
  }
}
