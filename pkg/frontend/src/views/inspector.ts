import { spanColor } from "../colors";
import type { Inspection, SentenceView } from "../types";

export interface InspectorHandlers {
  onTokenClick?: (sentence: number, token: number, anchor: HTMLElement) => void;
  onTokenOverride?: (sentence: number, token: number) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Render one sentence with label-colored span highlights. */
export function renderSentence(view: SentenceView, handlers: InspectorHandlers = {}): HTMLElement {
  const row = el("div", "sentence");
  row.dataset.sentence = String(view.index);
  const spanAt = new Map<number, { label: string; start: number; end: number }>();
  for (const span of view.spans) {
    for (let i = span.start; i < span.end; i++) {
      spanAt.set(i, span);
    }
  }
  view.tokens.forEach((token, i) => {
    const cell = el("span", "token", token);
    cell.dataset.index = String(i);
    const span = spanAt.get(i);
    if (span) {
      cell.classList.add("in-span");
      cell.style.backgroundColor = spanColor(span.label);
      cell.title = span.label;
      if (i === span.start) {
        const badge = el("sup", "span-label", span.label);
        badge.style.color = spanColor(span.label);
        cell.appendChild(badge);
      }
    }
    if (view.overrides.some((o) => o.start <= i && i < o.end)) {
      cell.classList.add("overridden");
    }
    cell.addEventListener("click", () => handlers.onTokenClick?.(view.index, i, cell));
    cell.addEventListener("contextmenu", (event) => {
      event.preventDefault();
      handlers.onTokenOverride?.(view.index, i);
    });
    row.appendChild(cell);
    row.appendChild(document.createTextNode(" "));
  });
  return row;
}

/**
 * Token inspection popover: assigned label, then every candidate with its
 * provenance; the winning candidate carries the "winner" mark.
 */
export function renderPopover(inspection: Inspection): HTMLElement {
  const box = el("div", "popover");
  const head = el("div", "popover-head");
  head.appendChild(el("strong", undefined, inspection.token));
  head.appendChild(el("span", "predicted-tag", ` → ${inspection.predicted}`));
  if (inspection.gold !== null) {
    head.appendChild(el("span", "gold-tag", ` (gold: ${inspection.gold})`));
  }
  box.appendChild(head);

  const list = el("ul", "candidates");
  if (inspection.candidates.length === 0) {
    list.appendChild(el("li", "no-candidates", "no lexicon entries cover this token"));
  }
  for (const candidate of inspection.candidates) {
    const item = el("li", "candidate");
    if (candidate.won) {
      item.classList.add("winner");
      item.appendChild(el("span", "winner-mark", "✓ "));
    }
    item.appendChild(el("span", "candidate-label", candidate.label));
    const detail =
      ` — "${candidate.surface}" (${candidate.lexicon}, ${candidate.source_item}, ` +
      `${candidate.length} token${candidate.length === 1 ? "" : "s"}` +
      (candidate.fuzzy_cost > 0 ? `, fuzzy cost ${candidate.fuzzy_cost}` : "") +
      ")";
    item.appendChild(el("span", "candidate-detail", detail));
    list.appendChild(item);
  }
  box.appendChild(list);
  return box;
}
