import type { ApproveResponse, RunDetail, RunSummary, VaultChunk } from './types.js';

// Same-origin by default; point this at `tailor serve` when the dashboard
// is hosted elsewhere.
let baseUrl = '';

export function setApiBase(url: string): void {
  baseUrl = url.replace(/\/$/, '');
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(`${baseUrl}${path}`, init);
  if (!response.ok) {
    throw new Error(`${init?.method ?? 'GET'} ${path} failed with ${response.status}`);
  }
  return response.json() as Promise<T>;
}

export const api = {
  listRuns: (): Promise<{ runs: RunSummary[] }> => request('/runs'),

  getRun: (runId: string): Promise<RunDetail> => request(`/runs/${runId}`),

  approveRun: (runId: string): Promise<ApproveResponse> =>
    request(`/runs/${runId}/approve`, { method: 'POST' }),

  listChunks: (collection: string): Promise<{ collection: string; chunks: VaultChunk[] }> =>
    request(`/vault/chunks?collection=${encodeURIComponent(collection)}`),
};
