import { el } from '../format.js';
import type { VaultChunk } from '../types.js';

export const COLLECTIONS = ['resume_history', 'career_records', 'generated_content'] as const;

function truncate(text: string, max = 110): string {
  return text.length <= max ? text : `${text.slice(0, max - 1)}…`;
}

export function renderVaultBrowser(
  root: HTMLElement,
  collection: string,
  chunks: VaultChunk[],
): void {
  root.textContent = '';
  root.appendChild(el('h2', undefined, 'Vault'));

  const tabs = el('nav', 'collection-tabs');
  for (const name of COLLECTIONS) {
    const tab = el('a', name === collection ? 'tab tab--active' : 'tab', name.replace('_', ' '));
    tab.href = `#/vault/${name}`;
    tabs.appendChild(tab);
  }
  root.appendChild(tabs);

  if (chunks.length === 0) {
    root.appendChild(el('p', 'empty', `No chunks in ${collection}.`));
    return;
  }

  const table = el('table', 'chunks-table');
  const head = el('tr');
  for (const title of ['Chunk', 'Level', 'Employer', 'Text', 'From run']) {
    head.appendChild(el('th', undefined, title));
  }
  table.appendChild(head);

  for (const chunk of chunks) {
    const tr = el('tr', 'chunk-row');
    tr.dataset.chunkId = chunk.chunk_id;
    tr.appendChild(el('td', 'mono', chunk.chunk_id));
    tr.appendChild(el('td', undefined, chunk.level));
    tr.appendChild(el('td', undefined, chunk.employer ?? '—'));
    tr.appendChild(el('td', 'chunk-text', truncate(chunk.text)));
    tr.appendChild(el('td', 'mono', chunk.source_run_id ?? ''));
    table.appendChild(tr);
  }
  root.appendChild(table);
  root.appendChild(el('p', 'muted', `${chunks.length} chunk${chunks.length === 1 ? '' : 's'} in ${collection}`));
}
