// Matched-term highlighting for context snippets and term chips.

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Strip the index-family prefix from a matched term for display. */
export function displayTerm(term: string): string {
  return term.replace(/^(slt|opt|tok|txt):/, "").replace(/^wm:[cg]:/, "");
}

/** Words of the snippet that appear in txt: matched terms are bolded. */
export function highlightSnippet(text: string, matchedTerms: string[]): string {
  const words = new Set(
    matchedTerms.filter((t) => t.startsWith("txt:")).map((t) => t.slice(4).toLowerCase()),
  );
  if (words.size === 0) return escapeHtml(text);
  return text
    .split(/(\W+)/)
    .map((part) => {
      const escaped = escapeHtml(part);
      return words.has(part.toLowerCase()) ? `<b>${escaped}</b>` : escaped;
    })
    .join("");
}

export function termChips(matchedTerms: string[]): string {
  return matchedTerms
    .map((term) => `<span class="term-chip">${escapeHtml(displayTerm(term))}</span>`)
    .join("");
}
