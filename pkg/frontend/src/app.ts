// Page wiring: query bar + engine selector + results column, with a
// live symbol-autocompletion panel. All state flows through the API;
// displayed rank i is API rank i, never reordered or filtered here.

import { ApiError, MathfindClient, SearchHit } from "./api.js";
import { debounce } from "./debounce.js";
import { renderError, renderHits, renderSuggestions } from "./render.js";
import { SequenceGuard } from "./sequence.js";

const API_BASE =
  (window as { MATHFIND_API_URL?: string }).MATHFIND_API_URL ?? "http://127.0.0.1:8765";

const client = new MathfindClient(API_BASE);
const searchGuard = new SequenceGuard();
const suggestGuard = new SequenceGuard();

const queryInput = document.querySelector<HTMLInputElement>("#query")!;
const engineSelect = document.querySelector<HTMLSelectElement>("#engine")!;
const rerankSelect = document.querySelector<HTMLSelectElement>("#rerank")!;
const searchButton = document.querySelector<HTMLButtonElement>("#go")!;
const resultsDiv = document.querySelector<HTMLDivElement>("#results")!;
const errorDiv = document.querySelector<HTMLDivElement>("#error")!;
const symbolsInput = document.querySelector<HTMLInputElement>("#symbols")!;
const suggestionsDiv = document.querySelector<HTMLDivElement>("#suggestions")!;
const statusSpan = document.querySelector<HTMLSpanElement>("#status")!;

async function fetchSnippets(hits: SearchHit[]): Promise<Map<string, string>> {
  const snippets = new Map<string, string>();
  await Promise.all(
    hits
      .filter((hit) => hit.formulaId !== null)
      .map(async (hit) => {
        try {
          const context = await client.formula(hit.docId, hit.formulaId!);
          snippets.set(hit.itemId, context.text);
        } catch {
          // context is decoration; a missing snippet is not an error
        }
      }),
  );
  return snippets;
}

async function runSearch(): Promise<void> {
  const query = queryInput.value.trim();
  if (!query) return;
  const ticket = searchGuard.next();
  errorDiv.innerHTML = "";
  statusSpan.textContent = "searching…";
  try {
    const response = await client.search(query, engineSelect.value, rerankSelect.value, 10);
    if (!searchGuard.isCurrent(ticket)) return; // superseded
    const snippets = await fetchSnippets(response.hits);
    if (!searchGuard.isCurrent(ticket)) return;
    resultsDiv.innerHTML = renderHits(response.hits, snippets);
    statusSpan.textContent = `${response.hits.length} hits`;
  } catch (err) {
    if (!searchGuard.isCurrent(ticket)) return;
    // previous results stay on screen; the error shows inline
    const message = err instanceof ApiError ? err.message : String(err);
    errorDiv.innerHTML = renderError(message);
    statusSpan.textContent = "";
  }
}

async function runAutocomplete(): Promise<void> {
  const symbols = symbolsInput.value
    .split(/[\s,]+/)
    .map((s) => s.trim())
    .filter(Boolean);
  if (symbols.length === 0) {
    suggestionsDiv.innerHTML = "";
    return;
  }
  const ticket = suggestGuard.next();
  try {
    const response = await client.autocomplete(symbols);
    if (!suggestGuard.isCurrent(ticket)) return;
    suggestionsDiv.innerHTML = renderSuggestions(response.candidates);
  } catch (err) {
    if (!suggestGuard.isCurrent(ticket)) return;
    suggestionsDiv.innerHTML = "";
  }
}

searchButton.addEventListener("click", () => void runSearch());
queryInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter") void runSearch();
});
// switching engines re-issues the current query
engineSelect.addEventListener("change", () => void runSearch());
rerankSelect.addEventListener("change", () => void runSearch());

symbolsInput.addEventListener("input", debounce(() => void runAutocomplete(), 200));

suggestionsDiv.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement).closest<HTMLElement>(".suggestion");
  if (target?.dataset.latex) {
    queryInput.value = `$${target.dataset.latex}$`;
    suggestionsDiv.innerHTML = "";
    void runSearch();
  }
});

void client
  .health()
  .then((info) => {
    statusSpan.textContent = `index: ${info.docs} docs, ${info.formulas} formulas`;
  })
  .catch(() => {
    statusSpan.textContent = "API unreachable";
  });
