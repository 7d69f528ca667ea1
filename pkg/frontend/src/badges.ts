import { el } from './format.js';

// Every bullet and highlight carries a provenance string from the API;
// the badge makes it visible at a glance. Fallback provenances share one
// CSS class so tests (and reviewers) can assert where they appear — they
// belong in the highlights panel, never inside an experience card.

interface BadgeSpec {
  label: string;
  cls: string;
}

const BADGES: Record<string, BadgeSpec> = {
  base: { label: 'base', cls: 'badge--base' },
  vault_resume_history: { label: 'vault · history', cls: 'badge--vault' },
  vault_career_records: { label: 'vault · career', cls: 'badge--vault' },
  vault_generated_content: { label: 'vault · generated', cls: 'badge--vault' },
  fallback_vault: { label: 'fallback · vault quote', cls: 'badge--fallback' },
  fallback_llm: { label: 'fallback · generated', cls: 'badge--fallback' },
  fallback_template: { label: 'fallback · template', cls: 'badge--fallback' },
};

export function provenanceBadge(provenance: string): HTMLSpanElement {
  const spec = BADGES[provenance] ?? { label: provenance, cls: 'badge--unknown' };
  const badge = el('span', `badge ${spec.cls}`, spec.label);
  badge.dataset.provenance = provenance;
  return badge;
}
