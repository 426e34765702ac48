// Framework-free DOM view. mountUi builds the skeleton once; update()
// redraws it from a SessionView, so the screen is always a pure
// function of the session state plus one local bit (which inspector
// tab is selected). User intent leaves through a single action
// callback; no DOM handler talks to the network directly.

import { reflectionTree, type TreeRow } from './astTree.js';
import {
  canContinue,
  canInspect,
  canNextStage,
  canStep,
  canToggleBreakpoint,
  type InspectedValue,
  type SessionView,
} from './session.js';

export type UiAction =
  | { kind: 'nextStage' }
  | { kind: 'step' }
  | { kind: 'continue' }
  | { kind: 'toggleBreakpoint'; line: number }
  | { kind: 'inspect'; name: string }
  | { kind: 'reconnect' };

export interface Ui {
  update(view: SessionView): void;
  onAction(handler: (action: UiAction) => void): void;
  /** Detaches the document-level key bindings. */
  dispose(): void;
}

const SKELETON = `
  <div class="banner" id="banner" hidden>
    <span id="banner-text"></span>
    <button id="btn-reconnect">Reconnect</button>
  </div>
  <div class="toolbar">
    <span class="stage-label" id="stage-label">connecting…</span>
    <button id="btn-next-stage" disabled>Next stage</button>
    <button id="btn-step" title="F10" disabled>Step</button>
    <button id="btn-continue" title="F8" disabled>Continue</button>
  </div>
  <div class="panes">
    <div class="source" id="source"></div>
    <div class="side">
      <h3>Inspect</h3>
      <div class="inspect-controls">
        <input id="inspect-name" placeholder="variable name" />
        <button id="btn-inspect" disabled>Inspect</button>
      </div>
      <div id="inspector"></div>
      <div class="notice" id="notice" hidden></div>
    </div>
  </div>
  <div class="summary" id="summary" hidden></div>
`;

export function mountUi(root: HTMLElement): Ui {
  root.innerHTML = SKELETON;
  const doc = root.ownerDocument;
  const byId = <T extends HTMLElement>(id: string): T => {
    const el = root.querySelector<T>(`#${id}`);
    if (el === null) {
      throw new Error(`ui skeleton lost #${id}`);
    }
    return el;
  };

  let emit: (action: UiAction) => void = () => {};
  let view: SessionView | null = null;
  let selectedTab: 'tree' | 'source' = 'tree';

  const banner = byId<HTMLElement>('banner');
  const bannerText = byId<HTMLElement>('banner-text');
  const stageLabel = byId<HTMLElement>('stage-label');
  const nextStageButton = byId<HTMLButtonElement>('btn-next-stage');
  const stepButton = byId<HTMLButtonElement>('btn-step');
  const continueButton = byId<HTMLButtonElement>('btn-continue');
  const sourcePane = byId<HTMLElement>('source');
  const inspectName = byId<HTMLInputElement>('inspect-name');
  const inspectButton = byId<HTMLButtonElement>('btn-inspect');
  const inspector = byId<HTMLElement>('inspector');
  const notice = byId<HTMLElement>('notice');
  const summary = byId<HTMLElement>('summary');

  byId<HTMLButtonElement>('btn-reconnect').addEventListener('click', () => {
    emit({ kind: 'reconnect' });
  });
  nextStageButton.addEventListener('click', () => emit({ kind: 'nextStage' }));
  stepButton.addEventListener('click', () => emit({ kind: 'step' }));
  continueButton.addEventListener('click', () => emit({ kind: 'continue' }));

  const requestInspect = () => {
    const name = inspectName.value.trim();
    if (name !== '') {
      emit({ kind: 'inspect', name });
    }
  };
  inspectButton.addEventListener('click', requestInspect);
  inspectName.addEventListener('keydown', (event) => {
    if ((event as KeyboardEvent).key === 'Enter') {
      requestInspect();
    }
  });

  // Gutter clicks arrive by delegation so redraws cannot orphan handlers.
  sourcePane.addEventListener('click', (event) => {
    const gutter = (event.target as HTMLElement).closest('.gutter');
    if (gutter !== null && view !== null && canToggleBreakpoint(view)) {
      emit({ kind: 'toggleBreakpoint', line: Number(gutter.getAttribute('data-line')) });
    }
  });

  // The usual debugger keys: F10 steps, F8 continues.
  const onKeydown = (event: Event) => {
    const key = (event as KeyboardEvent).key;
    if (key === 'F10' && view !== null && canStep(view)) {
      event.preventDefault();
      emit({ kind: 'step' });
    } else if (key === 'F8' && view !== null && canContinue(view)) {
      event.preventDefault();
      emit({ kind: 'continue' });
    }
  };
  doc.addEventListener('keydown', onKeydown);

  inspector.addEventListener('click', (event) => {
    const tab = (event.target as HTMLElement).closest('.tab');
    if (tab !== null) {
      selectedTab = tab.getAttribute('data-tab') === 'source' ? 'source' : 'tree';
      if (view !== null) {
        render(view);
      }
    }
  });

  function render(next: SessionView): void {
    view = next;
    renderBanner(next);
    renderToolbar(next);
    renderSource(next);
    renderInspector(next);
    notice.hidden = next.notice === null;
    notice.textContent = next.notice ?? '';
    renderSummary(next);
  }

  function renderBanner(v: SessionView): void {
    if (v.connection === 'lost') {
      banner.hidden = false;
      bannerText.textContent = 'connection lost';
    } else if (v.connection === 'ended') {
      banner.hidden = false;
      bannerText.textContent = 'session ended';
    } else {
      banner.hidden = true;
    }
  }

  function renderToolbar(v: SessionView): void {
    if (v.connection === 'connecting') {
      stageLabel.textContent = 'connecting…';
    } else if (v.run === 'finished') {
      stageLabel.textContent = 'staging complete';
    } else if (v.run === 'failed') {
      stageLabel.textContent = 'stage failed';
    } else if (v.stage === null) {
      stageLabel.textContent = 'ready';
    } else {
      stageLabel.textContent = `stage ${v.stage}`;
    }
    nextStageButton.disabled = !canNextStage(v);
    stepButton.disabled = !canStep(v);
    continueButton.disabled = !canContinue(v);
    inspectButton.disabled = !canInspect(v);
  }

  function renderSource(v: SessionView): void {
    sourcePane.textContent = '';
    v.sourceLines.forEach((text, index) => {
      const line = index + 1;
      const row = doc.createElement('div');
      row.className = 'line';
      if (line === v.pausedLine) {
        row.className += ' current';
      }
      if (v.breakpoints.has(line)) {
        row.className += ' breakpoint';
      }
      row.setAttribute('data-line', String(line));

      const gutter = doc.createElement('span');
      gutter.className = 'gutter';
      gutter.setAttribute('data-line', String(line));
      gutter.textContent = v.breakpoints.has(line) ? '●' : '';
      const number = doc.createElement('span');
      number.className = 'lineno';
      number.textContent = String(line);
      const code = doc.createElement('code');
      code.textContent = text;

      row.append(gutter, number, code);
      sourcePane.append(row);
    });
  }

  function renderInspector(v: SessionView): void {
    inspector.textContent = '';
    const newest = [...v.inspected.values()].pop();
    if (newest !== undefined) {
      inspector.append(valueCard(newest));
    }
  }

  function valueCard(value: InspectedValue): HTMLElement {
    const card = doc.createElement('div');
    card.className = 'value-card';
    const title = doc.createElement('div');
    title.className = 'value-title';
    title.textContent = `${value.name}: ${value.kind}`;
    card.append(title);

    if (value.kind !== 'ast') {
      const row = doc.createElement('div');
      row.className = 'value-plain';
      row.textContent = String(value.repr);
      card.append(row);
      return card;
    }

    const repr = value.repr as { reflection?: unknown; source?: unknown };
    const tree =
      typeof repr === 'object' && repr !== null ? reflectionTree(repr.reflection) : null;
    if (tree === null || typeof repr.source !== 'string') {
      const raw = doc.createElement('pre');
      raw.className = 'value-raw';
      raw.textContent = JSON.stringify(value.repr, null, 2);
      card.append(raw);
      return card;
    }

    const tabs = doc.createElement('div');
    tabs.className = 'tabs';
    for (const tab of ['tree', 'source'] as const) {
      const button = doc.createElement('button');
      button.className = selectedTab === tab ? 'tab active' : 'tab';
      button.setAttribute('data-tab', tab);
      button.textContent = tab === 'tree' ? 'Tree' : 'Source';
      tabs.append(button);
    }
    card.append(tabs);

    const treePane = doc.createElement('div');
    treePane.className = 'tab-pane tree-pane';
    treePane.hidden = selectedTab !== 'tree';
    treePane.append(treeList([tree]));
    const sourcePaneEl = doc.createElement('pre');
    sourcePaneEl.className = 'tab-pane source-pane';
    sourcePaneEl.hidden = selectedTab !== 'source';
    sourcePaneEl.textContent = repr.source;
    card.append(treePane, sourcePaneEl);
    return card;
  }

  function treeList(rows: TreeRow[]): HTMLElement {
    const list = doc.createElement('ul');
    list.className = 'ast-tree';
    for (const row of rows) {
      const item = doc.createElement('li');
      if (row.children.length === 0) {
        item.textContent = row.label;
      } else {
        const details = doc.createElement('details');
        details.open = true;
        const label = doc.createElement('summary');
        label.textContent = row.label;
        details.append(label, treeList(row.children));
        item.append(details);
      }
      list.append(item);
    }
    return list;
  }

  function renderSummary(v: SessionView): void {
    if (v.run === 'finished') {
      summary.hidden = false;
      const stages = v.completedStages.join(', ');
      summary.textContent =
        v.completedStages.length > 0
          ? `staging complete — stages run: ${stages}`
          : 'staging complete — nothing to stage';
    } else {
      summary.hidden = true;
    }
  }

  return {
    update: render,
    onAction: (handler) => {
      emit = handler;
    },
    dispose: () => doc.removeEventListener('keydown', onKeydown),
  };
}
