import { describe, expect, it } from "vitest";
import { ApiClient, ApiError, ConflictError } from "../src/api.js";

function clientWith(status: number, body: unknown) {
  const calls: Array<{ url: string; init?: RequestInit }> = [];
  const fetchFn = async (url: string, init?: RequestInit) => {
    calls.push({ url, init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { api: new ApiClient("http://srv", fetchFn), calls };
}

describe("ApiClient", () => {
  it("fetches and parses the cluster listing", async () => {
    const state = { version: 3, roles: [], actions: [], objects: [] };
    const { api, calls } = clientWith(200, state);
    expect(await api.getClusters()).toEqual(state);
    expect(calls[0].url).toBe("http://srv/api/v1/clusters");
  });

  it("builds the mentions query from the cluster id", async () => {
    const { api, calls } = clientWith(200, { cluster: "a0", count: 0, mentions: [] });
    await api.getMentions("a0");
    expect(calls[0].url).toBe("http://srv/api/v1/mentions?cluster=a0");
  });

  it("posts curation ops as JSON", async () => {
    const { api, calls } = clientWith(200, { version: 1, applied: true, roles: [] });
    await api.postCuration({ op: "merge", a: "r1", b: "r2", op_id: "k" });
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(calls[0].init?.body as string)).toEqual({
      op: "merge",
      a: "r1",
      b: "r2",
      op_id: "k",
    });
  });

  it("maps a stale-version 409 to ConflictError", async () => {
    const { api } = clientWith(409, {
      detail: "state is at version 4, op expected 2",
    });
    await expect(api.postCuration({ op: "remove", role: "r1" })).rejects.toBeInstanceOf(
      ConflictError,
    );
  });

  it("keeps a name-collision 409 as a plain ApiError", async () => {
    const { api } = clientWith(409, { detail: "role name 'Analysis' already in use" });
    const failure = api.postCuration({ op: "rename", role: "r1", name: "Analysis" });
    await expect(failure).rejects.toBeInstanceOf(ApiError);
    await expect(failure).rejects.not.toBeInstanceOf(ConflictError);
  });

  it("surfaces the server detail on other errors", async () => {
    const { api } = clientWith(404, { detail: "unknown role r9" });
    await expect(api.getMentions("r9")).rejects.toMatchObject({
      status: 404,
      message: "unknown role r9",
    });
  });
});
