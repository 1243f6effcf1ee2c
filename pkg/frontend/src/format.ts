/** Rendering helpers: the one place probabilities become text. The console
 * does no probability math beyond these formattings. */

/** One-decimal percentage, the rendering used in the published tables. */
export function formatPercent(p: number): string {
  return `${(p * 100).toFixed(1)}%`;
}

/** Six-decimal raw value, shown in tooltips for precision on demand. */
export function formatRaw(p: number): string {
  return p.toFixed(6);
}

const GROUP_COLORS: Record<string, string> = {
  'Very low': '#2e7d32',
  Low: '#558b2f',
  Intermediate: '#f9a825',
  'High-intermediate': '#ef6c00',
  High: '#c62828',
};

export function riskColor(group: string): string {
  return GROUP_COLORS[group] ?? '#546e7a';
}

/** Witness policy in words: "set X = x1, set Z = z0", or a no-op note. */
export function describeWitness(witness: Record<string, string>): string {
  const parts = Object.entries(witness).map(([name, state]) => `set ${name} = ${state}`);
  return parts.length ? parts.join(', ') : 'no intervention';
}

export function describeProgress(explored: number, total: number): string {
  return total > 0 ? `${explored} / ${total} policies` : `${explored} policies`;
}
