import { afterEach, describe, expect, it, vi } from 'vitest';

import { api } from '../src/api.js';
import { renderVaultBrowser } from '../src/views/vaultBrowser.js';
import type { VaultChunk } from '../src/types.js';
import { installFetch } from './helpers.js';
import fixture from './fixture.json';

interface ChunkListing {
  collection: string;
  chunks: VaultChunk[];
}

const before = fixture.chunks_before as ChunkListing;
const after = fixture.chunks_after as unknown as ChunkListing;

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('vault browser view', () => {
  it('shows the empty state before any run is approved', () => {
    const root = document.createElement('div');
    renderVaultBrowser(root, before.collection, before.chunks);

    expect(root.querySelector('.chunks-table')).toBeNull();
    expect(root.textContent).toContain('No chunks in generated_content.');
    expect(root.textContent).not.toContain('run:');
  });

  it('shows harvested chunks after approve and refetch', async () => {
    // First fetch sees the pre-approve store; after the POST the same
    // listing returns the harvested chunks — exactly what the service does.
    let approved = false;
    const calls = installFetch((method, url) => {
      if (method === 'POST' && url === `/runs/${fixture.approve.run_id}/approve`) {
        approved = true;
        return fixture.approve;
      }
      if (method === 'GET' && url === '/vault/chunks?collection=generated_content') {
        return approved ? after : before;
      }
      return undefined;
    });

    const root = document.createElement('div');

    const first = await api.listChunks('generated_content');
    renderVaultBrowser(root, first.collection, first.chunks);
    expect(root.textContent).not.toContain(`run:${fixture.approve.run_id}/summary`);

    await api.approveRun(fixture.approve.run_id);

    const second = await api.listChunks('generated_content');
    renderVaultBrowser(root, second.collection, second.chunks);

    const row = root.querySelector<HTMLElement>(
      `[data-chunk-id="run:${fixture.approve.run_id}/summary"]`,
    );
    expect(row).not.toBeNull();
    expect(row!.textContent).toContain(fixture.approve.run_id);
    expect(root.querySelectorAll('.chunk-row').length).toBe(after.chunks.length);

    expect(calls.map((call) => call.method)).toEqual(['GET', 'POST', 'GET']);
  });

  it('marks the active collection tab', () => {
    const root = document.createElement('div');
    renderVaultBrowser(root, 'career_records', []);

    const active = root.querySelector('.tab--active')!;
    expect(active.textContent).toBe('career records');
    expect(active.getAttribute('href')).toBe('#/vault/career_records');
    expect(root.querySelectorAll('.tab').length).toBe(3);
  });

  it('shows the source run for harvested chunks', () => {
    const root = document.createElement('div');
    renderVaultBrowser(root, after.collection, after.chunks);

    for (const chunk of after.chunks) {
      const row = root.querySelector(`[data-chunk-id="${chunk.chunk_id}"]`)!;
      expect(row.textContent).toContain(chunk.source_run_id!);
    }
  });
});
