// Typed client for the mathfind HTTP API.

export interface SearchHit {
  docId: string;
  formulaId: string | null;
  itemId: string;
  latex: string;
  score: number;
  matchedTerms: string[];
}

export interface SearchResponse {
  hits: SearchHit[];
}

export interface AutocompleteCandidate {
  docId: string;
  formulaId: string;
  latex: string;
  score: number;
}

export interface FormulaContext {
  docId: string;
  formulaId: string;
  latex: string;
  text: string;
}

export interface HealthInfo {
  status: string;
  version: string;
  docs: number;
  formulas: number;
  terms: number;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function request<T>(baseUrl: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(`${baseUrl.replace(/\/$/, "")}${path}`, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const message = typeof body.error === "string" ? body.error : `HTTP ${response.status}`;
    throw new ApiError(response.status, message);
  }
  return body as T;
}

export class MathfindClient {
  constructor(readonly baseUrl: string) {}

  search(query: string, engine: string, rerank: string, k: number): Promise<SearchResponse> {
    return request<SearchResponse>(this.baseUrl, "/search", {
      method: "POST",
      body: JSON.stringify({ query, engine, rerank, k }),
    });
  }

  autocomplete(symbols: string[], k = 8): Promise<{ candidates: AutocompleteCandidate[] }> {
    return request(this.baseUrl, "/autocomplete", {
      method: "POST",
      body: JSON.stringify({ symbols, k }),
    });
  }

  formula(docId: string, formulaId: string): Promise<FormulaContext> {
    return request(this.baseUrl, `/formula/${encodeURIComponent(docId)}/${encodeURIComponent(formulaId)}`);
  }

  health(): Promise<HealthInfo> {
    return request(this.baseUrl, "/health");
  }
}
