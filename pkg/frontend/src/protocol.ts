// Wire types for the stagedc debug session: newline-delimited JSON,
// one reply event per command. Decoding is forward-compatible — events
// keep only the fields this client understands and unknown extras are
// dropped rather than rejected.

export type Command =
  | { cmd: 'nextStage' }
  | { cmd: 'step' }
  | { cmd: 'continue' }
  | { cmd: 'setBreakpoint'; line: number }
  | { cmd: 'clearBreakpoint'; line: number }
  | { cmd: 'inspect'; name: string }
  | { cmd: 'quit' };

export interface StageEvent {
  event: 'stage';
  stage: number;
  source?: string;
}

export interface PausedEvent {
  event: 'paused';
  line: number;
}

export interface StageEndEvent {
  event: 'stageEnd';
  stage: number;
}

export interface ValueEvent {
  event: 'value';
  name: string;
  kind: string;
  repr: unknown;
}

export interface ErrorEvent {
  event: 'error';
  message: string;
}

export interface ByeEvent {
  event: 'bye';
}

/** An event whose name this client does not know; kept opaque. */
export interface UnknownEvent {
  event: 'unknown';
  raw: Record<string, unknown>;
}

export type DebugEvent =
  | StageEvent
  | PausedEvent
  | StageEndEvent
  | ValueEvent
  | ErrorEvent
  | ByeEvent
  | UnknownEvent;

export function encodeCommand(command: Command): string {
  return JSON.stringify(command);
}

export class ProtocolError extends Error {}

function need<T>(value: unknown, check: (v: unknown) => v is T, what: string): T {
  if (!check(value)) {
    throw new ProtocolError(`event is missing a valid ${what}`);
  }
  return value;
}

const isNumber = (v: unknown): v is number => typeof v === 'number' && Number.isFinite(v);
const isString = (v: unknown): v is string => typeof v === 'string';

/**
 * Decode one received line. Throws ProtocolError for lines that are not
 * JSON objects or that lack the fields their event name requires; an
 * unrecognized event name is not an error.
 */
export function decodeEvent(line: string): DebugEvent {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch {
    throw new ProtocolError(`reply is not JSON: ${line.slice(0, 80)}`);
  }
  if (typeof raw !== 'object' || raw === null || Array.isArray(raw)) {
    throw new ProtocolError('reply is not a JSON object');
  }
  const msg = raw as Record<string, unknown>;
  switch (msg.event) {
    case 'stage': {
      const stage = need(msg.stage, isNumber, 'stage number');
      return typeof msg.source === 'string'
        ? { event: 'stage', stage, source: msg.source }
        : { event: 'stage', stage };
    }
    case 'paused':
      return { event: 'paused', line: need(msg.line, isNumber, 'line number') };
    case 'stageEnd':
      return { event: 'stageEnd', stage: need(msg.stage, isNumber, 'stage number') };
    case 'value':
      return {
        event: 'value',
        name: need(msg.name, isString, 'name'),
        kind: need(msg.kind, isString, 'kind'),
        repr: msg.repr,
      };
    case 'error':
      return { event: 'error', message: need(msg.message, isString, 'message') };
    case 'bye':
      return { event: 'bye' };
    default:
      return { event: 'unknown', raw: msg };
  }
}
