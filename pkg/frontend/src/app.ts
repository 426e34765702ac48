// Session wiring: connect, issue the opening nextStage, turn UI
// actions into commands (one at a time, in order), fold every reply
// back into the view. The transport is injected so the same app runs
// against a browser WebSocket or a test socket.

import { CommandClient, ConnectionClosed, type LineTransport } from './client.js';
import type { Command } from './protocol.js';
import { mountUi, type Ui, type UiAction } from './render.js';
import {
  canContinue,
  canInspect,
  canNextStage,
  canStep,
  canToggleBreakpoint,
  initialView,
  update,
  type SessionAction,
  type SessionView,
} from './session.js';

export interface AppOptions {
  root: HTMLElement;
  connect: () => Promise<LineTransport>;
}

export interface App {
  ui: Ui;
  start(): Promise<void>;
  dispatch(action: UiAction): Promise<void>;
  /** Resolves once every dispatched action has its reply folded in. */
  settled(): Promise<void>;
  view(): SessionView;
}

export function createApp(options: AppOptions): App {
  const ui = mountUi(options.root);
  let view = initialView();
  let client: CommandClient | null = null;
  let tail: Promise<void> = Promise.resolve();

  const apply = (action: SessionAction): void => {
    view = update(view, action);
    ui.update(view);
  };

  // Actions queue behind one promise chain, so commands reach the wire
  // in click order even though each awaits its reply.
  function enqueue(work: () => Promise<void>): Promise<void> {
    tail = tail.then(work);
    return tail;
  }

  async function sendCommand(command: Command): Promise<void> {
    if (client === null) {
      return;
    }
    const active = client;
    try {
      const reply = await active.send(command);
      apply({ kind: 'reply', command, event: reply.event });
      if (reply.event.event === 'stage' && reply.event.stage === 0) {
        // Staging is complete; release the backend so it can exit.
        const bye = await active.send({ cmd: 'quit' });
        apply({ kind: 'reply', command: { cmd: 'quit' }, event: bye.event });
        active.close();
      }
    } catch (error) {
      if (error instanceof ConnectionClosed) {
        apply({ kind: 'connectionLost' });
      } else {
        apply({
          kind: 'clientFault',
          message: error instanceof Error ? error.message : String(error),
        });
      }
    }
  }

  async function start(): Promise<void> {
    apply({ kind: 'connecting' });
    let transport: LineTransport;
    try {
      transport = await options.connect();
    } catch {
      apply({ kind: 'connectionLost' });
      return;
    }
    client = new CommandClient(transport);
    client.onClosed(() => apply({ kind: 'connectionLost' }));
    apply({ kind: 'connected' });
    await enqueue(() => sendCommand({ cmd: 'nextStage' }));
  }

  function dispatch(action: UiAction): Promise<void> {
    switch (action.kind) {
      case 'reconnect':
        if (view.connection === 'lost' || view.connection === 'ended') {
          return start();
        }
        return Promise.resolve();
      case 'nextStage':
        if (!canNextStage(view)) {
          return Promise.resolve();
        }
        return enqueue(() => sendCommand({ cmd: 'nextStage' }));
      case 'step':
        if (!canStep(view)) {
          return Promise.resolve();
        }
        return enqueue(() => sendCommand({ cmd: 'step' }));
      case 'continue':
        if (!canContinue(view)) {
          return Promise.resolve();
        }
        return enqueue(() => sendCommand({ cmd: 'continue' }));
      case 'toggleBreakpoint': {
        if (!canToggleBreakpoint(view)) {
          return Promise.resolve();
        }
        const command: Command = view.breakpoints.has(action.line)
          ? { cmd: 'clearBreakpoint', line: action.line }
          : { cmd: 'setBreakpoint', line: action.line };
        return enqueue(() => sendCommand(command));
      }
      case 'inspect':
        if (!canInspect(view)) {
          return Promise.resolve();
        }
        return enqueue(() => sendCommand({ cmd: 'inspect', name: action.name }));
    }
  }

  ui.onAction((action) => {
    void dispatch(action);
  });
  ui.update(view);

  return {
    ui,
    start,
    dispatch,
    settled: () => tail,
    view: () => view,
  };
}
