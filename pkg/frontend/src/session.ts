/** Session state and its pure transitions.
 *
 * Invariants enforced here: evidence and do-toggles never overlap, and a
 * response is only accepted if it answers the newest request (stale
 * responses are discarded by sequence number, so the console never shows a
 * posterior that does not match the current inputs).
 */

import type { BoundResult } from './types';

export interface PosteriorView {
  probability: number;
  group: string;
}

export interface SessionState {
  modelId: string | null;
  targetVariable: string | null;
  targetState: string | null;
  evidence: Record<string, string>;
  doValues: Record<string, string>;
  seq: number;
  pending: boolean;
  posterior: PosteriorView | null;
  contradiction: boolean;
  error: string | null;
  bound: BoundResult | null;
  boundJob: string | null;
}

export function initialState(): SessionState {
  return {
    modelId: null,
    targetVariable: null,
    targetState: null,
    evidence: {},
    doValues: {},
    seq: 0,
    pending: false,
    posterior: null,
    contradiction: false,
    error: null,
    bound: null,
    boundJob: null,
  };
}

function without(map: Record<string, string>, key: string): Record<string, string> {
  const out = { ...map };
  delete out[key];
  return out;
}

/** Every input change invalidates the shown posterior until refreshed. */
function invalidated(state: SessionState): SessionState {
  return { ...state, seq: state.seq + 1, pending: true, contradiction: false, error: null };
}

export function selectModel(state: SessionState, modelId: string): SessionState {
  return {
    ...initialState(),
    modelId,
    seq: state.seq + 1,
  };
}

export function setTarget(state: SessionState, variable: string, targetState: string): SessionState {
  return invalidated({ ...state, targetVariable: variable, targetState, bound: null });
}

/** state === null means "unknown": the variable is excluded from evidence. */
export function setEvidence(state: SessionState, variable: string, value: string | null): SessionState {
  const evidence = value === null ? without(state.evidence, variable) : { ...state.evidence, [variable]: value };
  return invalidated({
    ...state,
    evidence,
    doValues: without(state.doValues, variable), // keep evidence/do disjoint
  });
}

/** Toggle a forced value; null clears the intervention. */
export function setDo(state: SessionState, variable: string, value: string | null): SessionState {
  const doValues = value === null ? without(state.doValues, variable) : { ...state.doValues, [variable]: value };
  return invalidated({
    ...state,
    doValues,
    evidence: without(state.evidence, variable),
  });
}

/** Accept a posterior only if it answers the newest request. */
export function acceptPosterior(
  state: SessionState,
  seq: number,
  posterior: PosteriorView,
): SessionState {
  if (seq !== state.seq) {
    return state; // stale response; a newer request is in flight
  }
  return { ...state, pending: false, posterior, contradiction: false, error: null };
}

/** A 409 means the entered evidence is contradictory; inputs are preserved. */
export function acceptContradiction(state: SessionState, seq: number): SessionState {
  if (seq !== state.seq) {
    return state;
  }
  return { ...state, pending: false, posterior: null, contradiction: true };
}

export function acceptFailure(state: SessionState, seq: number, message: string): SessionState {
  if (seq !== state.seq) {
    return state;
  }
  return { ...state, pending: false, error: message };
}

export function startBound(state: SessionState, job: string): SessionState {
  return { ...state, boundJob: job, bound: null };
}

export function finishBound(state: SessionState, job: string, bound: BoundResult): SessionState {
  if (job !== state.boundJob) {
    return state;
  }
  return { ...state, bound, boundJob: null };
}

/** A cancelled job clears the panel. */
export function clearBound(state: SessionState): SessionState {
  return { ...state, bound: null, boundJob: null };
}
