/**
 * Order statistics for aggregating repeated runs.
 *
 * Quartiles use linear interpolation between closest ranks, so small seed
 * counts (5-10 repetitions) give stable, unsurprising bands.
 */

export function quantile(sorted: number[], q: number): number {
  const n = sorted.length;
  if (n === 0) throw new Error("quantile of empty sample");
  if (n === 1) return sorted[0];
  const pos = q * (n - 1);
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  const frac = pos - lo;
  return sorted[lo] * (1 - frac) + sorted[hi] * frac;
}

export function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  return quantile(sorted, 0.5);
}

export interface Summary {
  median: number;
  q25: number;
  q75: number;
  count: number;
}

export function summarize(values: number[]): Summary {
  const sorted = [...values].sort((a, b) => a - b);
  return {
    median: quantile(sorted, 0.5),
    q25: quantile(sorted, 0.25),
    q75: quantile(sorted, 0.75),
    count: sorted.length,
  };
}
