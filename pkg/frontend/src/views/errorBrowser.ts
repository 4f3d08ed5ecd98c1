import type { EvalReport } from "../types";

export interface ErrorBrowserHandlers {
  onAddFalsePositive: (token: string) => void;
  onJumpToToken: (token: string) => void;
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

function table(
  title: string,
  kind: "fp" | "fn",
  rows: [string, number][],
  handlers: ErrorBrowserHandlers,
): HTMLElement {
  const wrap = el("div", `error-table error-${kind}`);
  wrap.appendChild(el("h3", undefined, title));
  const body = el("table");
  const head = el("tr");
  head.appendChild(el("th", undefined, "token"));
  head.appendChild(el("th", undefined, "count"));
  head.appendChild(el("th", undefined, ""));
  body.appendChild(head);
  for (const [token, count] of rows) {
    const row = el("tr", "error-row");
    row.dataset.token = token;
    const tokenCell = el("td", "error-token", token);
    tokenCell.addEventListener("click", () => handlers.onJumpToToken(token));
    row.appendChild(tokenCell);
    row.appendChild(el("td", "error-count", String(count)));
    const actions = el("td");
    if (kind === "fp") {
      const add = el("button", "add-fp", "add to false positives");
      add.type = "button";
      add.addEventListener("click", () => handlers.onAddFalsePositive(token));
      actions.appendChild(add);
    }
    row.appendChild(actions);
    body.appendChild(row);
  }
  if (rows.length === 0) {
    const empty = el("tr");
    const cell = el("td", "empty", "none");
    cell.colSpan = 3;
    empty.appendChild(cell);
    body.appendChild(empty);
  }
  wrap.appendChild(body);
  return wrap;
}

/** Ranked false-positive / false-negative token tables. */
export function renderErrorBrowser(report: EvalReport, handlers: ErrorBrowserHandlers): HTMLElement {
  const root = el("div", "error-browser");
  root.appendChild(
    table("most frequent false positives", "fp", report.top_false_positives, handlers),
  );
  root.appendChild(
    table("most frequent misses", "fn", report.top_false_negatives, handlers),
  );
  return root;
}

/** Per-label metric table used next to the error rankings. */
export function renderMetricsTable(report: EvalReport): HTMLElement {
  const wrap = el("div", "metrics-table");
  const body = el("table");
  const head = el("tr");
  for (const caption of ["label", "P", "R", "F1", "tp", "fp", "fn"]) {
    head.appendChild(el("th", undefined, caption));
  }
  body.appendChild(head);
  const rows = [...Object.entries(report.per_label)].sort(([a], [b]) => a.localeCompare(b));
  rows.push(["micro", report.micro]);
  for (const [label, m] of rows) {
    const row = el("tr", "metric-row");
    row.dataset.label = label;
    row.appendChild(el("td", undefined, label));
    row.appendChild(el("td", undefined, (100 * m.precision).toFixed(1)));
    row.appendChild(el("td", undefined, (100 * m.recall).toFixed(1)));
    row.appendChild(el("td", undefined, (100 * m.f1).toFixed(1)));
    row.appendChild(el("td", undefined, String(m.tp)));
    row.appendChild(el("td", undefined, String(m.fp)));
    row.appendChild(el("td", undefined, String(m.fn)));
    body.appendChild(row);
  }
  wrap.appendChild(body);
  return wrap;
}
