import { api } from './api.js';
import { el } from './format.js';
import { renderRunDetail } from './views/runDetail.js';
import { renderRunsList } from './views/runsList.js';
import { COLLECTIONS, renderVaultBrowser } from './views/vaultBrowser.js';

// Hash-routed, single-page: #/runs, #/runs/{id}, #/vault/{collection}.
// All data comes from the REST service; nothing is computed locally that
// the API already reports.

const approvedHere = new Set<string>();

function navBar(): HTMLElement {
  const nav = el('nav', 'top-nav');
  nav.appendChild(el('h1', 'brand', 'Tailor'));
  const runs = el('a', 'nav-link', 'Runs');
  runs.href = '#/runs';
  nav.appendChild(runs);
  const vault = el('a', 'nav-link', 'Vault');
  vault.href = `#/vault/${COLLECTIONS[0]}`;
  nav.appendChild(vault);
  return nav;
}

function showError(main: HTMLElement, error: unknown): void {
  main.textContent = '';
  const box = el('div', 'error-box');
  box.appendChild(el('strong', undefined, 'Request failed'));
  box.appendChild(el('p', undefined, error instanceof Error ? error.message : String(error)));
  main.appendChild(box);
}

async function route(main: HTMLElement): Promise<void> {
  const hash = window.location.hash || '#/runs';
  const parts = hash.replace(/^#\//, '').split('/');
  main.textContent = '';
  main.appendChild(el('p', 'muted', 'Loading…'));

  try {
    if (parts[0] === 'vault') {
      const collection = parts[1] && (COLLECTIONS as readonly string[]).includes(parts[1])
        ? parts[1]
        : COLLECTIONS[0];
      const payload = await api.listChunks(collection);
      renderVaultBrowser(main, payload.collection, payload.chunks);
      return;
    }
    if (parts[0] === 'runs' && parts[1]) {
      const runId = parts[1];
      const [detail, listing] = await Promise.all([api.getRun(runId), api.listRuns()]);
      const summary = listing.runs.find((run) => run.run_id === runId);
      renderRunDetail(main, detail, {
        approved: approvedHere.has(runId) || Boolean(summary?.approved),
        onApprove: async (id) => {
          await api.approveRun(id);
          approvedHere.add(id);
        },
      });
      return;
    }
    const listing = await api.listRuns();
    renderRunsList(main, listing.runs);
  } catch (error) {
    showError(main, error);
  }
}

export function mount(root: HTMLElement): void {
  root.textContent = '';
  root.appendChild(navBar());
  const main = el('main', 'content');
  root.appendChild(main);
  window.addEventListener('hashchange', () => void route(main));
  void route(main);
}

const appRoot = document.getElementById('app');
if (appRoot) {
  mount(appRoot);
}
