import { describe, expect, it } from 'vitest';

import type { Command, DebugEvent } from '../src/protocol.js';
import {
  canContinue,
  canInspect,
  canNextStage,
  canStep,
  initialView,
  sessionOver,
  update,
  type SessionView,
} from '../src/session.js';

function reply(view: SessionView, command: Command, event: DebugEvent): SessionView {
  return update(view, { kind: 'reply', command, event });
}

function openView(): SessionView {
  return update(initialView(), { kind: 'connected' });
}

const STAGE_SOURCE = 'debugger;\n{\n  var x = 1;\n}\n';

function pausedInStageOne(): SessionView {
  return reply(openView(), { cmd: 'nextStage' }, { event: 'stage', stage: 1, source: STAGE_SOURCE });
}

describe('stage delivery', () => {
  it('arrives paused at the injected first line', () => {
    const view = pausedInStageOne();
    expect(view.run).toBe('paused');
    expect(view.stage).toBe(1);
    expect(view.pausedLine).toBe(1);
    expect(view.sourceLines[0]).toBe('debugger;');
  });

  it('resets breakpoints and inspected values from the previous stage', () => {
    let view = pausedInStageOne();
    view = reply(view, { cmd: 'setBreakpoint', line: 3 }, { event: 'paused', line: 1 });
    view = reply(
      view,
      { cmd: 'inspect', name: 'x' },
      { event: 'value', name: 'x', kind: 'number', repr: '1' },
    );
    view = reply(view, { cmd: 'continue' }, { event: 'stageEnd', stage: 1 });
    view = reply(view, { cmd: 'nextStage' }, { event: 'stage', stage: 2, source: 'debugger;\n' });
    expect(view.breakpoints.size).toBe(0);
    expect(view.inspected.size).toBe(0);
    expect(view.stage).toBe(2);
  });

  it('treats stage 0 as the terminal staging-complete state', () => {
    let view = pausedInStageOne();
    view = reply(view, { cmd: 'continue' }, { event: 'stageEnd', stage: 1 });
    view = reply(view, { cmd: 'nextStage' }, { event: 'stage', stage: 0 });
    expect(view.run).toBe('finished');
    expect(view.stage).toBe(0);
    expect(sessionOver(view)).toBe(true);
    expect(view.completedStages).toEqual([1]);
  });
});

describe('pausing and breakpoints', () => {
  it('moves the highlight line on every paused event', () => {
    let view = pausedInStageOne();
    view = reply(view, { cmd: 'step' }, { event: 'paused', line: 2 });
    expect(view.pausedLine).toBe(2);
    view = reply(view, { cmd: 'continue' }, { event: 'paused', line: 3 });
    expect(view.pausedLine).toBe(3);
  });

  it('records breakpoints from the echo replies', () => {
    let view = pausedInStageOne();
    view = reply(view, { cmd: 'setBreakpoint', line: 3 }, { event: 'paused', line: 1 });
    expect([...view.breakpoints]).toEqual([3]);
    expect(view.pausedLine).toBe(1);
    view = reply(view, { cmd: 'clearBreakpoint', line: 3 }, { event: 'paused', line: 1 });
    expect(view.breakpoints.size).toBe(0);
  });

  it('does not record a breakpoint when the reply is an error', () => {
    let view = pausedInStageOne();
    view = reply(
      view,
      { cmd: 'setBreakpoint', line: 0 },
      { event: 'error', message: 'malformed command: line must be a positive integer' },
    );
    expect(view.breakpoints.size).toBe(0);
    expect(view.run).toBe('paused');
    expect(view.notice).toContain('malformed command');
  });
});

describe('control enablement', () => {
  it('enables step exactly while paused', () => {
    const idle = openView();
    expect(canStep(idle)).toBe(false);
    expect(canNextStage(idle)).toBe(true);

    const paused = pausedInStageOne();
    expect(canStep(paused)).toBe(true);
    expect(canContinue(paused)).toBe(true);
    expect(canInspect(paused)).toBe(true);
    expect(canNextStage(paused)).toBe(false);

    const ended = reply(paused, { cmd: 'continue' }, { event: 'stageEnd', stage: 1 });
    expect(canStep(ended)).toBe(false);
    expect(canNextStage(ended)).toBe(true);
  });

  it('disables everything once staging completes', () => {
    let view = pausedInStageOne();
    view = reply(view, { cmd: 'continue' }, { event: 'stageEnd', stage: 1 });
    view = reply(view, { cmd: 'nextStage' }, { event: 'stage', stage: 0 });
    expect(canStep(view)).toBe(false);
    expect(canContinue(view)).toBe(false);
    expect(canInspect(view)).toBe(false);
    expect(canNextStage(view)).toBe(false);
  });

  it('disables everything when the connection drops', () => {
    const view = update(pausedInStageOne(), { kind: 'connectionLost' });
    expect(canStep(view)).toBe(false);
    expect(canNextStage(view)).toBe(false);
    expect(view.connection).toBe('lost');
  });
});

describe('errors', () => {
  it('keeps the session on client-mistake errors', () => {
    let view = pausedInStageOne();
    view = reply(view, { cmd: 'step' }, { event: 'error', message: 'illegal in state Idle' });
    expect(view.run).toBe('paused');
    expect(view.notice).toBe('illegal in state Idle');
  });

  it('fails the session on stage runtime errors', () => {
    let view = pausedInStageOne();
    view = reply(
      view,
      { cmd: 'continue' },
      { event: 'error', message: 'line 4: cannot call a number value' },
    );
    expect(view.run).toBe('failed');
    expect(sessionOver(view)).toBe(true);
    expect(canStep(view)).toBe(false);
  });
});

describe('values and shutdown', () => {
  it('caches inspected values newest-last', () => {
    let view = pausedInStageOne();
    view = reply(
      view,
      { cmd: 'inspect', name: 'a' },
      { event: 'value', name: 'a', kind: 'number', repr: '1' },
    );
    view = reply(
      view,
      { cmd: 'inspect', name: 'b' },
      { event: 'value', name: 'b', kind: 'string', repr: 'hi' },
    );
    view = reply(
      view,
      { cmd: 'inspect', name: 'a' },
      { event: 'value', name: 'a', kind: 'number', repr: '2' },
    );
    const names = [...view.inspected.keys()];
    expect(names).toEqual(['b', 'a']);
    expect(view.inspected.get('a')?.repr).toBe('2');
  });

  it('marks a clean ending distinct from a lost connection', () => {
    let view = pausedInStageOne();
    view = reply(view, { cmd: 'quit' }, { event: 'bye' });
    expect(view.connection).toBe('ended');
    view = update(view, { kind: 'connectionLost' });
    expect(view.connection).toBe('ended');
  });

  it('ignores events with unknown names', () => {
    const view = pausedInStageOne();
    const after = reply(view, { cmd: 'step' }, { event: 'unknown', raw: { event: 'profile' } });
    expect(after).toEqual(view);
  });
});
