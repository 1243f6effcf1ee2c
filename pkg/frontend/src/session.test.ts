import { describe, expect, it } from 'vitest';

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
} from './session';

const base = () => setTarget(selectModel(initialState(), 'demo'), 'Y', 'y1');

describe('evidence and do-toggles', () => {
  it('stay disjoint no matter the entry order', () => {
    let s = setEvidence(base(), 'X', 'x0');
    s = setDo(s, 'X', 'x1');
    expect(s.evidence).toEqual({});
    expect(s.doValues).toEqual({ X: 'x1' });

    s = setEvidence(s, 'X', 'x0');
    expect(s.doValues).toEqual({});
    expect(s.evidence).toEqual({ X: 'x0' });
  });

  it('unknown clears an observation', () => {
    let s = setEvidence(base(), 'X', 'x0');
    s = setEvidence(s, 'X', null);
    expect(s.evidence).toEqual({});
  });

  it('marks the posterior pending on every change', () => {
    let s = acceptPosterior(base(), base().seq, { probability: 0.41, group: 'High' });
    expect(s.pending).toBe(false);
    s = setEvidence(s, 'X', 'x1');
    expect(s.pending).toBe(true);
  });
});

describe('response sequencing', () => {
  it('discards stale responses', () => {
    const s0 = base();
    const oldSeq = s0.seq;
    const s1 = setEvidence(s0, 'X', 'x1'); // newer request in flight
    const s2 = acceptPosterior(s1, oldSeq, { probability: 0.41, group: 'High' });
    expect(s2.posterior).toBeNull();
    expect(s2.pending).toBe(true);

    const s3 = acceptPosterior(s2, s2.seq, { probability: 0.9, group: 'High' });
    expect(s3.posterior?.probability).toBe(0.9);
    expect(s3.pending).toBe(false);
  });

  it('keeps inputs on a contradiction', () => {
    const s = setEvidence(base(), 'X', 'x0');
    const after = acceptContradiction(s, s.seq);
    expect(after.contradiction).toBe(true);
    expect(after.evidence).toEqual({ X: 'x0' }); // no input loss
    expect(after.posterior).toBeNull();
  });

  it('keeps inputs on a failed request', () => {
    const s = setEvidence(base(), 'X', 'x0');
    const after = acceptFailure(s, s.seq, 'network down');
    expect(after.error).toBe('network down');
    expect(after.evidence).toEqual({ X: 'x0' });
  });
});

describe('bound jobs', () => {
  const result = { direction: 'max', value: 0.9, witness: { X: 'x1' }, explored: 3 };

  it('accepts the result of the active job only', () => {
    let s = startBound(base(), 'job-1');
    s = finishBound(s, 'job-0', result);
    expect(s.bound).toBeNull();
    s = finishBound(s, 'job-1', result);
    expect(s.bound?.value).toBe(0.9);
    expect(s.boundJob).toBeNull();
  });

  it('clears the panel on cancellation', () => {
    let s = startBound(base(), 'job-1');
    s = clearBound(s);
    expect(s.bound).toBeNull();
    expect(s.boundJob).toBeNull();
  });
});

describe('model switching', () => {
  it('resets inputs and results', () => {
    let s = setEvidence(base(), 'X', 'x0');
    s = acceptPosterior(s, s.seq, { probability: 0.2, group: 'High-intermediate' });
    const fresh = selectModel(s, 'other');
    expect(fresh.modelId).toBe('other');
    expect(fresh.evidence).toEqual({});
    expect(fresh.posterior).toBeNull();
  });
});
