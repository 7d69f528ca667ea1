import { el, formatDelta, formatScore, shortId, verdictClass } from '../format.js';
import { pairRuns } from '../pairing.js';
import type { RunSummary } from '../types.js';

function scoreCell(run: RunSummary | null): HTMLTableCellElement {
  const cell = el('td');
  if (!run) {
    cell.textContent = '—';
    return cell;
  }
  const link = el('a', 'run-link', formatScore(run.overall));
  link.href = `#/runs/${run.run_id}`;
  cell.appendChild(link);
  cell.appendChild(el('span', verdictClass(run.verdict), run.verdict));
  return cell;
}

export function renderRunsList(root: HTMLElement, runs: RunSummary[]): void {
  root.textContent = '';
  root.appendChild(el('h2', undefined, 'Runs'));
  if (runs.length === 0) {
    root.appendChild(el('p', 'empty', 'No runs yet.'));
    return;
  }

  const table = el('table', 'runs-table');
  const head = el('tr');
  for (const title of ['Posting', 'Inputs', 'Baseline', 'With vault', 'Δ overall', 'Approved']) {
    head.appendChild(el('th', undefined, title));
  }
  table.appendChild(head);

  for (const row of pairRuns(runs)) {
    const tr = el('tr', 'run-pair');
    tr.dataset.jdId = row.jdId;
    tr.appendChild(el('td', 'mono', shortId(row.jdId)));
    tr.appendChild(el('td', 'mono', shortId(row.inputsDigest)));
    tr.appendChild(scoreCell(row.baseline));
    tr.appendChild(scoreCell(row.vault));

    const deltaCell = el('td', 'delta-cell');
    if (row.delta !== null) {
      deltaCell.textContent = formatDelta(row.delta);
      deltaCell.dataset.delta = String(row.delta);
      deltaCell.classList.add(row.delta >= 0 ? 'delta--up' : 'delta--down');
    } else {
      deltaCell.textContent = '—';
    }
    tr.appendChild(deltaCell);

    const approved = [row.baseline, row.vault].some((run) => run?.approved);
    tr.appendChild(el('td', undefined, approved ? '✓' : ''));
    table.appendChild(tr);
  }
  root.appendChild(table);
}
