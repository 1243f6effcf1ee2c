/** DOM wiring for the what-if console.
 *
 * Flow: pick a model -> the schema renders one selector per variable (plus a
 * separate therapy panel for intervention-tagged variables) -> every input
 * change refreshes the posterior (stale responses discarded) -> bound
 * requests run as polled jobs with a cancel button.
 */

import { ApiClient, ApiError } from './api';
import { describeProgress, describeWitness, formatPercent, formatRaw, riskColor } from './format';
import { buildForm, selectionToValue, UNKNOWN, type FormSpec } from './form';
import { pollJobUntilDone } from './poll';
import {
  acceptContradiction,
  acceptFailure,
  acceptPosterior,
  clearBound,
  finishBound,
  initialState,
  selectModel,
  setDo,
  setEvidence,
  setTarget,
  startBound,
  type SessionState,
} from './session';
import type { ModelSchema } from './types';

const api = new ApiClient('');

let state: SessionState = initialState();
let schema: ModelSchema | null = null;
let form: FormSpec | null = null;

const el = (id: string) => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
};

function option(text: string, value = text): HTMLOptionElement {
  const node = document.createElement('option');
  node.textContent = text;
  node.value = value;
  return node;
}

// ---------------------------------------------------------------------------
// Rendering

function renderSelectors(): void {
  const evidencePanel = el('evidence-panel');
  const therapyPanel = el('therapy-panel');
  evidencePanel.textContent = '';
  therapyPanel.textContent = '';
  if (!form) return;

  if (form.empty) {
    evidencePanel.textContent = 'This model has no variables.';
    return;
  }

  const renderInto = (
    panel: HTMLElement,
    specs: FormSpec['evidence'],
    current: Record<string, string>,
    onChange: (variable: string, value: string | null) => void,
  ) => {
    for (const spec of specs) {
      const row = document.createElement('label');
      row.className = 'selector-row';
      const caption = document.createElement('span');
      caption.textContent = spec.variable;
      const select = document.createElement('select');
      for (const opt of spec.options) select.append(option(opt));
      select.value = current[spec.variable] ?? UNKNOWN;
      select.addEventListener('change', () => onChange(spec.variable, selectionToValue(select.value)));
      row.append(caption, select);
      panel.append(row);
    }
  };

  renderInto(evidencePanel, form.evidence, state.evidence, (variable, value) => {
    state = setEvidence(state, variable, value);
    void refreshPosterior();
  });
  renderInto(therapyPanel, form.therapy, state.doValues, (variable, value) => {
    state = setDo(state, variable, value);
    void refreshPosterior();
  });
  (el('therapy-section') as HTMLElement).style.display = form.therapy.length ? '' : 'none';
}

function renderTargets(): void {
  const select = el('target-select') as HTMLSelectElement;
  select.textContent = '';
  if (!form) return;
  for (const variable of form.targets) {
    for (const s of variable.states) {
      select.append(option(`${variable.name} = ${s}`, JSON.stringify([variable.name, s])));
    }
  }
  if (select.options.length) {
    const first = select.options[0]!.value;
    select.value = first;
    applyTargetSelection(first);
  }
}

function applyTargetSelection(encoded: string): void {
  let pair: [string, string];
  try {
    pair = JSON.parse(encoded) as [string, string];
  } catch {
    return;
  }
  const [variable, targetState] = pair;
  if (variable && targetState) {
    state = setTarget(state, variable, targetState);
  }
}

function renderPosterior(): void {
  const badge = el('risk-badge');
  const value = el('posterior-value');
  const warning = el('contradiction-warning');
  warning.style.display = state.contradiction ? '' : 'none';
  el('error-banner').style.display = state.error ? '' : 'none';
  if (state.error) el('error-banner').textContent = state.error;

  if (state.pending) {
    value.textContent = '…';
    value.removeAttribute('title');
    badge.textContent = 'pending';
    badge.setAttribute('style', 'background:#90a4ae');
    return;
  }
  if (!state.posterior) {
    value.textContent = '—';
    value.removeAttribute('title');
    badge.textContent = state.contradiction ? 'contradiction' : 'no result';
    badge.setAttribute('style', 'background:#90a4ae');
    return;
  }
  value.textContent = formatPercent(state.posterior.probability);
  value.setAttribute('title', formatRaw(state.posterior.probability)); // raw value on demand
  badge.textContent = state.posterior.group;
  badge.setAttribute('style', `background:${riskColor(state.posterior.group)}`);
}

function renderBound(): void {
  const panel = el('bound-result');
  if (!state.bound) {
    panel.textContent = state.boundJob ? 'searching…' : '';
    return;
  }
  const b = state.bound;
  panel.textContent =
    `${b.direction === 'max' ? 'Worst case' : 'Best case'}: ${formatPercent(b.value)} ` +
    `(${describeWitness(b.witness)}; ${b.explored} policies explored)`;
  panel.setAttribute('title', formatRaw(b.value));
}

// ---------------------------------------------------------------------------
// Data flow

async function refreshPosterior(): Promise<void> {
  renderPosterior();
  if (!state.modelId || !state.targetVariable || !state.targetState) return;
  const seq = state.seq;
  try {
    const response = await api.query(state.modelId, {
      target: { variable: state.targetVariable, state: state.targetState },
      evidence: state.evidence,
      do: state.doValues,
    });
    state = acceptPosterior(state, seq, {
      probability: response.probability,
      group: response.risk_group,
    });
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      state = acceptContradiction(state, seq);
    } else {
      state = acceptFailure(state, seq, err instanceof Error ? err.message : String(err));
    }
  }
  renderPosterior();
}

async function requestBounds(direction: 'max' | 'min'): Promise<void> {
  if (!state.modelId || !state.targetVariable || !state.targetState) return;
  const advisory = el('bound-advisory');
  advisory.textContent = '';
  try {
    const { job } = await api.startBounds(state.modelId, {
      target: { variable: state.targetVariable, state: state.targetState },
      evidence: state.evidence,
      direction,
    });
    state = startBound(state, job);
    renderBound();
    const status = await pollJobUntilDone(api, job, {
      onProgress: (s) => {
        el('bound-result').textContent = `searching… ${describeProgress(s.explored, s.total)}`;
      },
    });
    if (status.status === 'done' && status.result) {
      state = finishBound(state, job, status.result);
    } else {
      state = clearBound(state); // cancelled or failed searches clear the panel
      if (status.status === 'error' && status.error) {
        advisory.textContent = status.error;
      }
    }
  } catch (err) {
    state = clearBound(state);
    if (err instanceof ApiError && err.status === 413) {
      advisory.textContent = 'The intervention space is too large; shrink the allowed values and retry.';
    } else {
      advisory.textContent = err instanceof Error ? err.message : String(err);
    }
  }
  renderBound();
}

async function cancelBound(): Promise<void> {
  if (state.boundJob) {
    await api.cancelJob(state.boundJob).catch(() => undefined);
  }
}

async function loadModel(modelId: string): Promise<void> {
  state = selectModel(state, modelId);
  const banner = el('schema-banner');
  banner.style.display = 'none';
  try {
    schema = await api.schema(modelId);
  } catch (err) {
    schema = null;
    banner.style.display = '';
    banner.textContent = `Could not load the model schema (${err instanceof Error ? err.message : err}).`;
    return;
  }
  form = buildForm(schema);
  renderSelectors();
  renderTargets();
  void refreshPosterior();
}

async function boot(): Promise<void> {
  const select = el('model-select') as HTMLSelectElement;
  const models = await api.listModels().catch(() => []);
  select.textContent = '';
  for (const model of models) select.append(option(`${model.name} (${model.id})`, model.id));
  select.addEventListener('change', () => void loadModel(select.value));
  el('target-select').addEventListener('change', (event) => {
    applyTargetSelection((event.target as HTMLSelectElement).value);
    void refreshPosterior();
  });
  el('bound-max').addEventListener('click', () => void requestBounds('max'));
  el('bound-min').addEventListener('click', () => void requestBounds('min'));
  el('bound-cancel').addEventListener('click', () => void cancelBound());
  el('schema-retry').addEventListener('click', () => {
    if (state.modelId) void loadModel(state.modelId);
  });
  if (models.length) {
    select.value = models[0]!.id;
    await loadModel(models[0]!.id);
  } else {
    el('evidence-panel').textContent = 'No models available.';
  }
}

document.addEventListener('DOMContentLoaded', () => void boot());
