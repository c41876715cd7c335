// In-process mock of the prediction service: a fetch replacement that routes
// the four endpoints to canned payloads, with per-endpoint delays and a call
// log so tests can assert request counts and cancellation behaviour.

import type {
  CategoriesResponse,
  HealthResponse,
  NeighborsResponse,
  PredictResponse,
} from "../src/types";

type Handler = (url: URL, init?: RequestInit) => Promise<unknown> | unknown;

export interface MockOptions {
  health: HealthResponse;
  categories: CategoriesResponse;
  neighbors: Handler | NeighborsResponse;
  predict: Handler | PredictResponse;
  delayMs?: Partial<Record<"neighbors" | "predict", number>>;
}

export class MockServer {
  calls: { method: string; path: string; body?: unknown }[] = [];
  private realFetch = globalThis.fetch;

  constructor(private opts: MockOptions) {}

  install(): void {
    globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = new URL(String(input), "http://mock.local");
      const method = init?.method ?? "GET";
      const body = init?.body ? JSON.parse(String(init.body)) : undefined;
      this.calls.push({ method, path: url.pathname, body });

      const respond = (payload: unknown, status = 200) =>
        new Response(JSON.stringify(payload), {
          status,
          headers: { "content-type": "application/json" },
        });

      const delay = async (key: "neighbors" | "predict") => {
        const ms = this.opts.delayMs?.[key] ?? 0;
        if (ms > 0) await new Promise((r) => setTimeout(r, ms));
        if (init?.signal?.aborted) {
          throw new DOMException("The operation was aborted.", "AbortError");
        }
      };

      switch (url.pathname) {
        case "/health":
          return respond(this.opts.health);
        case "/categories":
          return respond(this.opts.categories);
        case "/neighbors": {
          await delay("neighbors");
          const h = this.opts.neighbors;
          return respond(typeof h === "function" ? await h(url, init) : h);
        }
        case "/predict": {
          await delay("predict");
          const h = this.opts.predict;
          return respond(typeof h === "function" ? await h(url, init) : h);
        }
        default:
          return respond({ error: "not found" }, 404);
      }
    }) as typeof fetch;
  }

  restore(): void {
    globalThis.fetch = this.realFetch;
  }

  countCalls(path: string): number {
    return this.calls.filter((c) => c.path === path).length;
  }

  lastBody(path: string): unknown {
    const hits = this.calls.filter((c) => c.path === path);
    return hits[hits.length - 1]?.body;
  }
}
