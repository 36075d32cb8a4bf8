import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, MathfindClient } from "../src/api.js";

function mockFetch(status: number, body: unknown) {
  return vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  })) as unknown as typeof fetch;
}

describe("MathfindClient", () => {
  afterEach(() => {
    vi.unstubAllGlobals();
  });

  it("posts search requests with the engine parameters", async () => {
    const fetcher = mockFetch(200, { hits: [] });
    vi.stubGlobal("fetch", fetcher);
    const client = new MathfindClient("http://api.test/");
    await client.search("a+b", "slt", "none", 10);
    const [url, init] = (fetcher as ReturnType<typeof vi.fn>).mock.calls[0];
    expect(url).toBe("http://api.test/search");
    expect(JSON.parse((init as RequestInit).body as string)).toEqual({
      query: "a+b",
      engine: "slt",
      rerank: "none",
      k: 10,
    });
  });

  it("returns parsed hits", async () => {
    const hit = {
      docId: "d1",
      formulaId: "f0",
      itemId: "d1#f0",
      latex: "a+b",
      score: 1.0,
      matchedTerms: ["slt:a|+|n"],
    };
    vi.stubGlobal("fetch", mockFetch(200, { hits: [hit] }));
    const client = new MathfindClient("http://api.test");
    const response = await client.search("a+b", "slt", "none", 10);
    expect(response.hits).toHaveLength(1);
    expect(response.hits[0].latex).toBe("a+b");
  });

  it("raises ApiError with the server message on 400", async () => {
    vi.stubGlobal("fetch", mockFetch(400, { error: "unknown engine 'wat'" }));
    const client = new MathfindClient("http://api.test");
    await expect(client.search("a", "wat", "none", 5)).rejects.toThrowError(ApiError);
    await expect(client.search("a", "wat", "none", 5)).rejects.toThrow(/unknown engine/);
  });

  it("encodes formula lookup path segments", async () => {
    const fetcher = mockFetch(200, { docId: "d/1", formulaId: "f0", latex: "x", text: "" });
    vi.stubGlobal("fetch", fetcher);
    const client = new MathfindClient("http://api.test");
    await client.formula("d/1", "f0");
    const [url] = (fetcher as ReturnType<typeof vi.fn>).mock.calls[0];
    expect(url).toBe("http://api.test/formula/d%2F1/f0");
  });
});
