/** fetch stub that records every call and answers from canned routes. */

import { vi } from "vitest";

export interface RecordedCall {
  method: string;
  path: string;
  body: unknown;
}

export interface MockApi {
  calls: RecordedCall[];
  callsTo(pathPrefix: string, method?: string): RecordedCall[];
  route(method: string, path: string, handler: (body: unknown) => unknown): void;
}

export function installMockApi(): MockApi {
  const calls: RecordedCall[] = [];
  const routes = new Map<string, (body: unknown) => unknown>();

  const api: MockApi = {
    calls,
    callsTo: (pathPrefix, method) =>
      calls.filter(
        (c) => c.path.startsWith(pathPrefix) && (method === undefined || c.method === method),
      ),
    route: (method, path, handler) => {
      routes.set(`${method} ${path}`, handler);
    },
  };

  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = typeof input === "string" ? input : input.toString();
      const path = url.split("?")[0];
      const method = init?.method ?? "GET";
      const body = init?.body ? JSON.parse(init.body as string) : null;
      calls.push({ method, path, body });

      const handler = routes.get(`${method} ${path}`);
      if (!handler) {
        return new Response(JSON.stringify({ error: `no route for ${method} ${path}` }), {
          status: 404,
          headers: { "Content-Type": "application/json" },
        });
      }
      const result = handler(body);
      if (result instanceof Response) return result;
      return new Response(JSON.stringify(result), {
        status: method === "POST" ? 200 : 200,
        headers: { "Content-Type": "application/json" },
      });
    }),
  );

  return api;
}

/** Let in-flight requests and their continuations settle. */
export async function flush(): Promise<void> {
  for (let i = 0; i < 3; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
