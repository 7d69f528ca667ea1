// Payload shapes mirrored from the REST API. Field names match the wire
// format exactly; nothing here is derived.

export interface RunSummary {
  run_id: string;
  created_at: string;
  jd_id: string;
  inputs_digest: string;
  retrieval_enabled: boolean;
  overall: number;
  best: number;
  verdict: string;
  pass_count: number;
  approved: boolean;
  approved_at: string | null;
}

export interface DraftBullet {
  text: string;
  provenance: string;
  confidence: number | null;
  source_chunk_id: string | null;
  flags: string[];
}

export interface DraftEntry {
  employer: string;
  title: string;
  date_range: string;
  bullets: DraftBullet[];
}

export interface FallbackItem {
  element_id: string;
  category: string;
  text: string;
  tier: number;
  provenance: string;
  confidence: number | null;
  source_chunk_id: string | null;
}

export interface Draft {
  summary: string;
  entries: DraftEntry[];
  highlights: FallbackItem[];
  static_sections: { kind: string; heading: string; lines: string[] }[];
  section_order: [string, string][];
}

export interface ElementScore {
  element_id: string;
  category: string;
  confidence: number;
  best_source: string;
}

export interface AtsReport {
  coverage: Record<string, number>;
  profile_scores: Record<string, number>;
  overall: number;
  best: number;
  best_profile: string;
  verdict: string;
  element_scores: ElementScore[];
  eligible_count: number;
  jd_id: string;
}

export interface Finding {
  code: string;
  location: string;
  action: string;
  message?: string;
}

export interface RunDetail {
  run_id: string;
  created_at: string;
  config: Record<string, unknown>;
  inputs_digest: string;
  jd_id: string;
  pass_count: number;
  vault_reads: number;
  report: AtsReport | null;
  verdict: { status: string; issues: string[]; failed_open: boolean } | null;
  findings: Finding[];
  fallback_items: FallbackItem[];
  draft: Draft | null;
  trace: unknown[];
  renders: Record<string, string>;
}

export interface VaultChunk {
  chunk_id: string;
  doc_id: string;
  section_kind: string;
  level: string;
  parent_id: string | null;
  employer: string | null;
  text: string;
  metadata: Record<string, string>;
  dated: string | null;
  source_run_id: string | null;
}

export interface ApproveResponse {
  run_id: string;
  approved_at: string;
  chunks_indexed: number;
}
