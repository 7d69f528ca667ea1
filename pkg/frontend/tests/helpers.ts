import { vi } from 'vitest';

export interface RecordedCall {
  method: string;
  url: string;
}

// Replace global fetch with a stub that answers from `handler` and records
// every call. Returning undefined from the handler produces a 404 so tests
// notice unexpected requests instead of silently passing.
export function installFetch(handler: (method: string, url: string) => unknown): RecordedCall[] {
  const calls: RecordedCall[] = [];
  const fake = async (input: RequestInfo | URL, init?: RequestInit) => {
    const method = init?.method ?? 'GET';
    const url = String(input);
    calls.push({ method, url });
    const payload = handler(method, url);
    if (payload === undefined) {
      return { ok: false, status: 404, json: async () => ({ detail: 'not found' }) } as unknown as Response;
    }
    return { ok: true, status: 200, json: async () => payload } as unknown as Response;
  };
  vi.stubGlobal('fetch', fake);
  return calls;
}
