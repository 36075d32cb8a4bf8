// HTML rendering of search hits and autocomplete suggestions.
//
// Formulas render with KaTeX when the page loaded it; otherwise (or on a
// KaTeX error) the raw LaTeX shows in a code span so results are never
// blank.

import type { AutocompleteCandidate, SearchHit } from "./api.js";
import { escapeHtml, highlightSnippet, termChips } from "./highlight.js";

interface KatexLike {
  renderToString(latex: string, options?: { throwOnError?: boolean; output?: string }): string;
}

declare global {
  interface Window {
    katex?: KatexLike;
  }
}

export function renderFormula(latex: string, katex?: KatexLike): string {
  const engine = katex ?? (typeof window !== "undefined" ? window.katex : undefined);
  if (engine) {
    try {
      return engine.renderToString(latex, { throwOnError: false });
    } catch {
      // fall through to the raw form
    }
  }
  return `<code class="formula-raw">${escapeHtml(latex)}</code>`;
}

export function renderHit(hit: SearchHit, rank: number, snippet: string, katex?: KatexLike): string {
  const formula = hit.latex ? renderFormula(hit.latex, katex) : "";
  const source = hit.formulaId === null ? hit.docId : `${hit.docId} / ${hit.formulaId}`;
  return [
    `<li class="hit" data-rank="${rank}" data-item="${escapeHtml(hit.itemId)}">`,
    `<div class="hit-rank">${rank}</div>`,
    `<div class="hit-body">`,
    `<div class="hit-formula">${formula}</div>`,
    snippet ? `<p class="hit-snippet">${highlightSnippet(snippet, hit.matchedTerms)}</p>` : "",
    `<div class="hit-meta">`,
    `<span class="hit-source">${escapeHtml(source)}</span>`,
    `<span class="hit-score">${hit.score.toFixed(4)}</span>`,
    `</div>`,
    hit.matchedTerms.length ? `<div class="hit-terms">${termChips(hit.matchedTerms)}</div>` : "",
    `</div>`,
    `</li>`,
  ]
    .filter(Boolean)
    .join("");
}

export function renderHits(hits: SearchHit[], snippets: Map<string, string>, katex?: KatexLike): string {
  if (hits.length === 0) {
    return `<p class="empty">No results.</p>`;
  }
  const items = hits
    .map((hit, i) => renderHit(hit, i + 1, snippets.get(hit.itemId) ?? "", katex))
    .join("");
  return `<ol class="hit-list">${items}</ol>`;
}

export function renderSuggestions(candidates: AutocompleteCandidate[], katex?: KatexLike): string {
  if (candidates.length === 0) {
    return "";
  }
  const rows = candidates
    .map(
      (c) =>
        `<li class="suggestion" data-latex="${escapeHtml(c.latex)}">` +
        `${renderFormula(c.latex, katex)}<span class="suggestion-score">${c.score.toFixed(4)}</span></li>`,
    )
    .join("");
  return `<ul class="suggestion-list">${rows}</ul>`;
}

export function renderError(message: string): string {
  return `<div class="error-banner">${escapeHtml(message)}</div>`;
}
