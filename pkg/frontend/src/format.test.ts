import { describe, expect, it } from 'vitest';

import { describeProgress, describeWitness, formatPercent, formatRaw, riskColor } from './format';

describe('formatPercent', () => {
  // Console parity: rendered numbers equal the service response at one
  // decimal of the percentage rendering.
  it('renders the demo posterior like the published tables', () => {
    expect(formatPercent(0.41000000000000003)).toBe('41.0%');
    expect(formatPercent(0.9)).toBe('90.0%');
    expect(formatPercent(0.086)).toBe('8.6%');
    expect(formatPercent(0.2)).toBe('20.0%');
  });

  it('keeps exactly one decimal', () => {
    expect(formatPercent(0.12345)).toBe('12.3%');
    expect(formatPercent(1)).toBe('100.0%');
    expect(formatPercent(0)).toBe('0.0%');
  });
});

describe('formatRaw', () => {
  it('exposes six decimals for the tooltip', () => {
    expect(formatRaw(0.41000000000000003)).toBe('0.410000');
    expect(formatRaw(0.9)).toBe('0.900000');
  });
});

describe('describeWitness', () => {
  it('spells the policy in words', () => {
    expect(describeWitness({ X: 'x1' })).toBe('set X = x1');
    expect(describeWitness({ AdjuvantTherapy: 'radiotherapy', X: 'x0' })).toBe(
      'set AdjuvantTherapy = radiotherapy, set X = x0',
    );
  });

  it('names the empty policy', () => {
    expect(describeWitness({})).toBe('no intervention');
  });
});

describe('riskColor', () => {
  it('distinguishes every published band', () => {
    const groups = ['Very low', 'Low', 'Intermediate', 'High-intermediate', 'High'];
    const colors = new Set(groups.map(riskColor));
    expect(colors.size).toBe(groups.length);
  });

  it('falls back for unknown groups', () => {
    expect(riskColor('Custom band')).toBeTruthy();
  });
});

describe('describeProgress', () => {
  it('shows explored over total', () => {
    expect(describeProgress(2, 3)).toBe('2 / 3 policies');
  });
});
