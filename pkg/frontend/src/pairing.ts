import type { RunSummary } from './types.js';

// The run list shows experiment pairs: the same resume + posting executed
// with retrieval off (baseline) and on (vault). Pairing key is therefore
// (jd_id, inputs_digest); within a key the newest run of each condition
// wins, and the delta is vault overall minus baseline overall — the same
// arithmetic the compare endpoint reports.

export interface PairedRow {
  jdId: string;
  inputsDigest: string;
  baseline: RunSummary | null;
  vault: RunSummary | null;
  delta: number | null;
}

export function pairRuns(runs: RunSummary[]): PairedRow[] {
  const byKey = new Map<string, PairedRow>();
  const order: string[] = [];
  for (const run of runs) {
    const key = `${run.jd_id}:${run.inputs_digest}`;
    let row = byKey.get(key);
    if (!row) {
      row = { jdId: run.jd_id, inputsDigest: run.inputs_digest, baseline: null, vault: null, delta: null };
      byKey.set(key, row);
      order.push(key);
    }
    // runs arrive newest first; keep the first seen per condition
    if (run.retrieval_enabled && !row.vault) row.vault = run;
    if (!run.retrieval_enabled && !row.baseline) row.baseline = run;
  }
  for (const row of byKey.values()) {
    if (row.baseline && row.vault) {
      row.delta = row.vault.overall - row.baseline.overall;
    }
  }
  return order.map((key) => byKey.get(key)!);
}
