// Thin fetch client for the four service endpoints. Neighbor lookups accept
// an AbortSignal so a newer pin drop can cancel a stale request.

import type {
  CategoriesResponse,
  HealthResponse,
  NeighborsResponse,
  PredictRequest,
  PredictResponse,
} from "./types";

export class ApiError extends Error {
  status: number;

  constructor(status: number, reason: string) {
    super(reason);
    this.status = status;
  }
}

async function parseOrThrow<T>(res: Response): Promise<T> {
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    const reason = typeof body?.error === "string" ? body.error : `HTTP ${res.status}`;
    throw new ApiError(res.status, reason);
  }
  return body as T;
}

export class ApiClient {
  constructor(private baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async health(): Promise<HealthResponse> {
    return parseOrThrow(await fetch(this.url("/health")));
  }

  async categories(): Promise<CategoriesResponse> {
    return parseOrThrow(await fetch(this.url("/categories")));
  }

  async neighbors(
    lat: number,
    lng: number,
    radius: number,
    signal?: AbortSignal,
  ): Promise<NeighborsResponse> {
    const qs = new URLSearchParams({
      lat: String(lat),
      lng: String(lng),
      radius: String(radius),
    });
    return parseOrThrow(await fetch(this.url(`/neighbors?${qs}`), { signal }));
  }

  async predict(req: PredictRequest): Promise<PredictResponse> {
    return parseOrThrow(
      await fetch(this.url("/predict"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(req),
      }),
    );
  }
}
