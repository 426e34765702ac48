// Pure session state, driven entirely by (command, reply-event) pairs
// plus connection lifecycle. Rendering derives from this alone, so the
// invariants live here: the highlighted line is always the line of the
// last `paused` event, and stage 0 is a terminal "staging complete"
// state with every control disabled.

import type { Command, DebugEvent, ValueEvent } from './protocol.js';

export type ConnectionState = 'connecting' | 'open' | 'ended' | 'lost';
export type RunState = 'idle' | 'paused' | 'finished' | 'failed';

export interface InspectedValue {
  name: string;
  kind: string;
  repr: unknown;
}

export interface SessionView {
  connection: ConnectionState;
  run: RunState;
  /** Stage now on screen; null before the first delivery, 0 at the end. */
  stage: number | null;
  /** Source lines of the current stage (1-based addressing via index+1). */
  sourceLines: string[];
  /** Line of the last paused event; null while idle/finished. */
  pausedLine: number | null;
  breakpoints: ReadonlySet<number>;
  /** Inspected values for the current pause, newest name last. */
  inspected: ReadonlyMap<string, InspectedValue>;
  /** Stages that have fully run, in order. */
  completedStages: number[];
  notice: string | null;
}

export type SessionAction =
  | { kind: 'connecting' }
  | { kind: 'connected' }
  | { kind: 'connectionLost' }
  | { kind: 'clientFault'; message: string }
  | { kind: 'reply'; command: Command; event: DebugEvent };

export function initialView(): SessionView {
  return {
    connection: 'connecting',
    run: 'idle',
    stage: null,
    sourceLines: [],
    pausedLine: null,
    breakpoints: new Set(),
    inspected: new Map(),
    completedStages: [],
    notice: null,
  };
}

/** Errors that report client mistakes rather than a dead stage. */
function isSessionKeepingError(message: string): boolean {
  return message.startsWith('illegal in state') || message.startsWith('malformed command');
}

export function update(view: SessionView, action: SessionAction): SessionView {
  switch (action.kind) {
    case 'connecting':
      return { ...initialView(), connection: 'connecting' };
    case 'connected':
      return { ...view, connection: 'open', notice: null };
    case 'connectionLost':
      // A loss after the session ended cleanly is just the server going away.
      return view.connection === 'ended' ? view : { ...view, connection: 'lost' };
    case 'clientFault':
      return { ...view, notice: action.message };
    case 'reply':
      return applyReply(view, action.command, action.event);
  }
}

function applyReply(view: SessionView, command: Command, event: DebugEvent): SessionView {
  switch (event.event) {
    case 'stage':
      if (event.stage === 0) {
        return {
          ...view,
          run: 'finished',
          stage: 0,
          pausedLine: null,
          notice: null,
        };
      }
      // A fresh stage arrives already paused at its injected first line.
      return {
        ...view,
        run: 'paused',
        stage: event.stage,
        sourceLines: (event.source ?? '').split('\n'),
        pausedLine: 1,
        breakpoints: new Set(),
        inspected: new Map(),
        notice: null,
      };
    case 'paused': {
      const breakpoints = new Set(view.breakpoints);
      if (command.cmd === 'setBreakpoint') {
        breakpoints.add(command.line);
      } else if (command.cmd === 'clearBreakpoint') {
        breakpoints.delete(command.line);
      }
      return {
        ...view,
        run: 'paused',
        pausedLine: event.line,
        breakpoints,
        notice: null,
      };
    }
    case 'stageEnd':
      return {
        ...view,
        run: 'idle',
        pausedLine: null,
        inspected: new Map(),
        completedStages: [...view.completedStages, event.stage],
        notice: null,
      };
    case 'value': {
      const inspected = new Map(view.inspected);
      inspected.delete(event.name);
      inspected.set(event.name, toInspected(event));
      return { ...view, inspected, notice: null };
    }
    case 'error':
      if (isSessionKeepingError(event.message)) {
        return { ...view, notice: event.message };
      }
      return { ...view, run: 'failed', pausedLine: null, notice: event.message };
    case 'bye':
      return { ...view, connection: 'ended' };
    case 'unknown':
      return view;
  }
}

function toInspected(event: ValueEvent): InspectedValue {
  return { name: event.name, kind: event.kind, repr: event.repr };
}

// ---------------------------------------------------------------------------
// Control enablement, derived in one place so buttons and key bindings agree.

export function canStep(view: SessionView): boolean {
  return view.connection === 'open' && view.run === 'paused';
}

export const canContinue = canStep;
export const canInspect = canStep;
export const canToggleBreakpoint = canStep;

export function canNextStage(view: SessionView): boolean {
  return view.connection === 'open' && view.run === 'idle';
}

export function sessionOver(view: SessionView): boolean {
  return view.run === 'finished' || view.run === 'failed';
}
