/** Mock server: a fetch implementation backed by path-prefix routes, which
 * records every request URL so tests can assert exactly what was issued. */

import payloads from "../fixtures/payloads.json";

export { payloads };

export type Route = (url: string) => { status?: number; body: unknown } | null;

export interface MockServer {
  fetch: (input: string, init?: RequestInit) => Promise<Response>;
  requests: string[];
}

export function mockServer(routes: Record<string, unknown | Route>): MockServer {
  const requests: string[] = [];
  const fetchImpl = async (input: string, _init?: RequestInit): Promise<Response> => {
    requests.push(input);
    for (const [prefix, handler] of Object.entries(routes)) {
      if (!input.startsWith(prefix)) continue;
      const result = typeof handler === "function" ? (handler as Route)(input) : { body: handler };
      if (result === null) continue;
      const status = result.status ?? 200;
      return new Response(JSON.stringify(result.body), {
        status,
        headers: { "content-type": "application/json" },
      });
    }
    return new Response(JSON.stringify({ error: "not found", code: 404 }), { status: 404 });
  };
  return { fetch: fetchImpl, requests };
}

export function storageStub(): { getItem(k: string): string | null; setItem(k: string, v: string): void } {
  const map = new Map<string, string>();
  return {
    getItem: (k) => map.get(k) ?? null,
    setItem: (k, v) => void map.set(k, v),
  };
}
