import type {
  ClustersResponse,
  CurationOp,
  CurationResponse,
  ExportResponse,
  GraphView,
  MentionsResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

/** The mutation carried a stale if_version: someone curated in between. */
export class ConflictError extends ApiError {
  constructor(message: string) {
    super(409, message);
    this.name = "ConflictError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base = "",
    // wrapped so the global fetch keeps its own receiver in browsers
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.base + path, init);
    if (!res.ok) {
      const detail = await detailOf(res);
      // the server reports both stale-version and name-collision as 409;
      // only the former mentions versions, and only it warrants a reload
      if (res.status === 409 && /version/.test(detail)) {
        throw new ConflictError(detail);
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  getClusters(): Promise<ClustersResponse> {
    return this.request("/api/v1/clusters");
  }

  getGraph(): Promise<GraphView> {
    return this.request("/api/v1/graph");
  }

  getMentions(clusterId: string): Promise<MentionsResponse> {
    return this.request(`/api/v1/mentions?cluster=${encodeURIComponent(clusterId)}`);
  }

  postCuration(op: CurationOp): Promise<CurationResponse> {
    return this.request("/api/v1/curation", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(op),
    });
  }

  postExport(): Promise<ExportResponse> {
    return this.request("/api/v1/export", { method: "POST" });
  }
}

async function detailOf(res: Response): Promise<string> {
  const text = await res.text();
  try {
    const body = JSON.parse(text);
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    // non-JSON error body; fall through to the raw text
  }
  return text || `HTTP ${res.status}`;
}
