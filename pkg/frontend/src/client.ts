// Command pipeline over any line transport. The backend answers every
// command with exactly one event, so the client keeps at most one
// command on the wire and queues the rest, pairing each reply with the
// command that provoked it.

import type { Command, DebugEvent } from './protocol.js';
import { decodeEvent, encodeCommand } from './protocol.js';

export interface LineTransport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export interface Reply {
  command: Command;
  event: DebugEvent;
}

interface Pending {
  command: Command;
  resolve: (reply: Reply) => void;
  reject: (error: Error) => void;
}

export class ConnectionClosed extends Error {
  constructor() {
    super('connection closed');
  }
}

export class CommandClient {
  private readonly queue: Pending[] = [];
  private inflight: Pending | null = null;
  private closed = false;
  private closedHandler: () => void = () => {};

  constructor(private readonly transport: LineTransport) {
    transport.onLine((line) => this.receive(line));
    transport.onClose(() => {
      this.abort();
      this.closedHandler();
    });
  }

  /** Runs after the transport closes and all waiters are rejected. */
  onClosed(handler: () => void): void {
    this.closedHandler = handler;
  }

  send(command: Command): Promise<Reply> {
    return new Promise<Reply>((resolve, reject) => {
      if (this.closed) {
        reject(new ConnectionClosed());
        return;
      }
      this.queue.push({ command, resolve, reject });
      this.pump();
    });
  }

  close(): void {
    this.transport.close();
  }

  private pump(): void {
    if (this.inflight !== null || this.queue.length === 0) {
      return;
    }
    this.inflight = this.queue.shift()!;
    this.transport.send(encodeCommand(this.inflight.command));
  }

  private receive(line: string): void {
    const pending = this.inflight;
    if (pending === null) {
      // Replies only follow commands; anything else is noise we survive.
      return;
    }
    this.inflight = null;
    let event: DebugEvent;
    try {
      event = decodeEvent(line);
    } catch (error) {
      pending.reject(error instanceof Error ? error : new Error(String(error)));
      this.pump();
      return;
    }
    pending.resolve({ command: pending.command, event });
    this.pump();
  }

  private abort(): void {
    this.closed = true;
    const waiting = this.inflight ? [this.inflight, ...this.queue] : [...this.queue];
    this.inflight = null;
    this.queue.length = 0;
    for (const pending of waiting) {
      pending.reject(new ConnectionClosed());
    }
  }
}
