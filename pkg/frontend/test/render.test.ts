// @vitest-environment happy-dom
import { afterEach, beforeEach, describe, expect, it } from 'vitest';

import { mountUi, type Ui, type UiAction } from '../src/render.js';
import { initialView, type SessionView } from '../src/session.js';

const STAGE_LINES = ['debugger;', '{', '  var x = 1;', '}'];

function makeView(overrides: Partial<SessionView> = {}): SessionView {
  return {
    ...initialView(),
    connection: 'open',
    run: 'paused',
    stage: 1,
    sourceLines: STAGE_LINES,
    pausedLine: 1,
    ...overrides,
  };
}

let root: HTMLElement;
let ui: Ui;
let actions: UiAction[];

beforeEach(() => {
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById('app') as HTMLElement;
  ui = mountUi(root);
  actions = [];
  ui.onAction((action) => actions.push(action));
});

afterEach(() => {
  ui.dispose();
});

function query<T extends HTMLElement>(selector: string): T {
  const el = root.querySelector<T>(selector);
  if (el === null) {
    throw new Error(`missing ${selector}`);
  }
  return el;
}

describe('source pane', () => {
  it('renders every line with its number and highlights the paused line', () => {
    ui.update(makeView());
    const lines = root.querySelectorAll('#source .line');
    expect(lines).toHaveLength(4);
    expect(lines[0].querySelector('code')?.textContent).toBe('debugger;');
    expect(lines[0].classList.contains('current')).toBe(true);
    expect(lines[1].classList.contains('current')).toBe(false);
  });

  it('moves the highlight with the paused line', () => {
    ui.update(makeView());
    ui.update(makeView({ pausedLine: 2 }));
    const lines = root.querySelectorAll('#source .line');
    expect(lines[0].classList.contains('current')).toBe(false);
    expect(lines[1].classList.contains('current')).toBe(true);
  });

  it('marks breakpoint lines and emits toggle actions from gutter clicks', () => {
    ui.update(makeView({ breakpoints: new Set([3]) }));
    const rows = root.querySelectorAll('#source .line');
    expect(rows[2].classList.contains('breakpoint')).toBe(true);
    expect(rows[2].querySelector('.gutter')?.textContent).toBe('●');

    (rows[3].querySelector('.gutter') as HTMLElement).click();
    expect(actions).toEqual([{ kind: 'toggleBreakpoint', line: 4 }]);
  });

  it('ignores gutter clicks while not paused', () => {
    ui.update(makeView({ run: 'idle', pausedLine: null }));
    (root.querySelector('#source .gutter') as HTMLElement).click();
    expect(actions).toEqual([]);
  });
});

describe('toolbar', () => {
  it('labels the stage and enables stepping only while paused', () => {
    ui.update(makeView());
    expect(query('#stage-label').textContent).toBe('stage 1');
    expect(query<HTMLButtonElement>('#btn-step').disabled).toBe(false);
    expect(query<HTMLButtonElement>('#btn-continue').disabled).toBe(false);
    expect(query<HTMLButtonElement>('#btn-next-stage').disabled).toBe(true);
  });

  it('offers next stage while idle between stages', () => {
    ui.update(makeView({ run: 'idle', pausedLine: null }));
    expect(query<HTMLButtonElement>('#btn-step').disabled).toBe(true);
    expect(query<HTMLButtonElement>('#btn-next-stage').disabled).toBe(false);
    query<HTMLButtonElement>('#btn-next-stage').click();
    expect(actions).toEqual([{ kind: 'nextStage' }]);
  });

  it('disables all controls and shows the summary at stage 0', () => {
    ui.update(
      makeView({ run: 'finished', stage: 0, pausedLine: null, completedStages: [1, 2] }),
    );
    expect(query('#stage-label').textContent).toBe('staging complete');
    for (const id of ['#btn-next-stage', '#btn-step', '#btn-continue', '#btn-inspect']) {
      expect(query<HTMLButtonElement>(id).disabled).toBe(true);
    }
    const summary = query('#summary');
    expect(summary.hidden).toBe(false);
    expect(summary.textContent).toBe('staging complete — stages run: 1, 2');
  });

  it('steps on F10 and continues on F8 while paused', () => {
    ui.update(makeView());
    document.dispatchEvent(new KeyboardEvent('keydown', { key: 'F10' }));
    document.dispatchEvent(new KeyboardEvent('keydown', { key: 'F8' }));
    expect(actions).toEqual([{ kind: 'step' }, { kind: 'continue' }]);
  });

  it('ignores the debug keys when nothing is paused', () => {
    ui.update(makeView({ run: 'idle', pausedLine: null }));
    document.dispatchEvent(new KeyboardEvent('keydown', { key: 'F10' }));
    expect(actions).toEqual([]);
  });
});

describe('inspector', () => {
  it('emits an inspect action for the typed name', () => {
    ui.update(makeView());
    query<HTMLInputElement>('#inspect-name').value = '  res ';
    query<HTMLButtonElement>('#btn-inspect').click();
    expect(actions).toEqual([{ kind: 'inspect', name: 'res' }]);
  });

  it('renders a scalar value as a plain row without tabs', () => {
    ui.update(
      makeView({
        inspected: new Map([['exp', { name: 'exp', kind: 'number', repr: '2' }]]),
      }),
    );
    expect(query('.value-title').textContent).toBe('exp: number');
    expect(query('.value-plain').textContent).toBe('2');
    expect(root.querySelector('.tabs')).toBeNull();
  });

  it('renders an ast value as synchronized tree and source tabs', () => {
    ui.update(
      makeView({
        inspected: new Map([
          [
            'res',
            {
              name: 'res',
              kind: 'ast',
              repr: {
                reflection: {
                  type: 'BinaryExpression',
                  operator: '*',
                  left: { type: 'Identifier', name: 'y' },
                  right: { type: 'Identifier', name: 'y' },
                },
                source: '(y * y)',
              },
            },
          ],
        ]),
      }),
    );
    const treePane = query('.tree-pane');
    expect(treePane.hidden).toBe(false);
    expect(treePane.textContent).toContain('BinaryExpression: operator=*');
    expect(treePane.textContent).toContain('left: Identifier: name=y');
    const sourcePane = query('.source-pane');
    expect(sourcePane.textContent).toBe('(y * y)');
    expect(sourcePane.hidden).toBe(true);

    query<HTMLButtonElement>('.tab[data-tab="source"]').click();
    expect(query('.source-pane').hidden).toBe(false);
    expect(query('.tree-pane').hidden).toBe(true);
  });

  it('falls back to raw JSON for a malformed ast repr', () => {
    ui.update(
      makeView({
        inspected: new Map([
          ['odd', { name: 'odd', kind: 'ast', repr: { mystery: true } }],
        ]),
      }),
    );
    expect(root.querySelector('.tabs')).toBeNull();
    expect(query('.value-raw').textContent).toContain('"mystery": true');
  });

  it('shows the newest inspected value', () => {
    const inspected = new Map([
      ['a', { name: 'a', kind: 'number', repr: '1' }],
      ['b', { name: 'b', kind: 'number', repr: '2' }],
    ]);
    ui.update(makeView({ inspected }));
    expect(query('.value-title').textContent).toBe('b: number');
  });
});

describe('connection banner', () => {
  it('announces a lost connection and emits reconnect', () => {
    ui.update(makeView({ connection: 'lost' }));
    const banner = query('#banner');
    expect(banner.hidden).toBe(false);
    expect(query('#banner-text').textContent).toBe('connection lost');
    query<HTMLButtonElement>('#btn-reconnect').click();
    expect(actions).toEqual([{ kind: 'reconnect' }]);
  });

  it('shows session end distinctly and surfaces notices', () => {
    ui.update(makeView({ connection: 'ended', notice: 'illegal in state Idle' }));
    expect(query('#banner-text').textContent).toBe('session ended');
    const notice = query('#notice');
    expect(notice.hidden).toBe(false);
    expect(notice.textContent).toBe('illegal in state Idle');
  });
});
