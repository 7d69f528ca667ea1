import { provenanceBadge } from '../badges.js';
import { el, formatScore, shortId, verdictClass } from '../format.js';
import type { AtsReport, Draft, Finding, RunDetail } from '../types.js';

export interface RunDetailOptions {
  approved: boolean;
  onApprove: (runId: string) => Promise<void>;
}

function metaRow(label: string, value: string, mono = false): HTMLElement {
  const row = el('div', 'meta-row');
  row.appendChild(el('span', 'meta-label', label));
  row.appendChild(el('span', mono ? 'meta-value mono' : 'meta-value', value));
  return row;
}

function reportCard(report: AtsReport): HTMLElement {
  const card = el('section', 'report-card');
  card.appendChild(el('h3', undefined, 'Screening report'));

  const headline = el('div', 'report-headline');
  const overall = el('div', 'stat');
  overall.appendChild(el('span', 'stat-value', formatScore(report.overall)));
  overall.appendChild(el('span', 'stat-label', 'overall fit'));
  headline.appendChild(overall);

  const best = el('div', 'stat');
  best.appendChild(el('span', 'stat-value', formatScore(report.best)));
  best.appendChild(el('span', 'stat-label', `best: ${report.best_profile}`));
  headline.appendChild(best);

  headline.appendChild(el('span', verdictClass(report.verdict), report.verdict));
  card.appendChild(headline);

  const table = el('table', 'profile-table');
  for (const [name, score] of Object.entries(report.profile_scores)) {
    const tr = el('tr');
    tr.appendChild(el('td', undefined, name));
    tr.appendChild(el('td', 'mono', formatScore(score)));
    table.appendChild(tr);
  }
  card.appendChild(table);
  card.appendChild(
    el('p', 'muted', `${report.eligible_count} eligible chunks scored against posting ${shortId(report.jd_id)}`),
  );
  return card;
}

function experienceSection(draft: Draft): HTMLElement {
  const section = el('section', 'experience-section');
  section.appendChild(el('h3', undefined, 'Experience'));
  for (const entry of draft.entries) {
    const card = el('article', 'experience-card');
    const header = el('header');
    header.appendChild(el('strong', undefined, entry.title));
    header.appendChild(el('span', 'muted', ` — ${entry.employer} · ${entry.date_range}`));
    card.appendChild(header);

    const list = el('ul', 'bullet-list');
    for (const bullet of entry.bullets) {
      const item = el('li');
      item.appendChild(el('span', undefined, bullet.text));
      item.appendChild(provenanceBadge(bullet.provenance));
      list.appendChild(item);
    }
    card.appendChild(list);
    section.appendChild(card);
  }
  return section;
}

function highlightsPanel(draft: Draft): HTMLElement {
  const panel = el('section', 'highlights-panel');
  panel.appendChild(el('h3', undefined, 'Talking points'));
  panel.appendChild(
    el(
      'p',
      'muted',
      'Posting requirements the resume does not cover. Kept out of the resume body; bring them up in conversation instead.',
    ),
  );
  const list = el('ul', 'highlight-list');
  for (const item of draft.highlights) {
    const li = el('li', 'highlight-item');
    li.appendChild(el('span', undefined, item.text));
    li.appendChild(provenanceBadge(item.provenance));
    li.appendChild(el('span', 'tier-label', `tier ${item.tier}`));
    li.appendChild(el('span', 'muted', item.category));
    list.appendChild(li);
  }
  panel.appendChild(list);
  return panel;
}

function findingsList(findings: Finding[]): HTMLElement {
  const section = el('section', 'findings');
  section.appendChild(el('h3', undefined, 'Findings'));
  const list = el('ul');
  for (const finding of findings) {
    const li = el('li');
    li.appendChild(el('code', undefined, finding.code));
    li.appendChild(el('span', undefined, ` at ${finding.location} — ${finding.action}`));
    list.appendChild(li);
  }
  section.appendChild(list);
  return section;
}

export function renderRunDetail(root: HTMLElement, detail: RunDetail, options: RunDetailOptions): void {
  root.textContent = '';

  const header = el('header', 'detail-header');
  header.appendChild(el('h2', undefined, `Run ${shortId(detail.run_id)}`));

  const approve = el('button', 'approve-button');
  if (options.approved) {
    approve.textContent = 'Approved ✓';
    approve.disabled = true;
  } else {
    approve.textContent = 'Approve & index';
    approve.addEventListener('click', () => {
      approve.disabled = true;
      approve.textContent = 'Approving…';
      options.onApprove(detail.run_id).then(
        () => {
          approve.textContent = 'Approved ✓';
        },
        () => {
          approve.disabled = false;
          approve.textContent = 'Approve & index';
        },
      );
    });
  }
  header.appendChild(approve);
  root.appendChild(header);

  const meta = el('div', 'meta');
  meta.appendChild(metaRow('Created', detail.created_at));
  meta.appendChild(metaRow('Posting', detail.jd_id, true));
  meta.appendChild(metaRow('Inputs', shortId(detail.inputs_digest), true));
  meta.appendChild(
    metaRow('Vault retrieval', detail.config['retrieval_enabled'] ? `on (${detail.vault_reads} reads)` : 'off'),
  );
  meta.appendChild(metaRow('Pipeline passes', String(detail.pass_count)));
  root.appendChild(meta);

  if (detail.report) {
    root.appendChild(reportCard(detail.report));
  }

  if (detail.draft) {
    const summary = el('section', 'summary-section');
    summary.appendChild(el('h3', undefined, 'Summary'));
    summary.appendChild(el('p', undefined, detail.draft.summary));
    root.appendChild(summary);

    root.appendChild(experienceSection(detail.draft));
    if (detail.draft.highlights.length > 0) {
      root.appendChild(highlightsPanel(detail.draft));
    }
  }

  if (detail.findings.length > 0) {
    root.appendChild(findingsList(detail.findings));
  }
}
