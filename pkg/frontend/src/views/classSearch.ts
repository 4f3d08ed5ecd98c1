import type { ApiClient } from "../api";
import { pollJob } from "../poll";
import type { ClassEntry } from "../types";

export interface ClassSearchOptions {
  api: ApiClient;
  onExtracted: (name: string) => void;
  signal?: AbortSignal;
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

/** Query box, ranked results with instance counts, extraction launcher. */
export function renderClassSearch(options: ClassSearchOptions): HTMLElement {
  const { api } = options;
  const root = el("div", "class-search");
  const selected = new Map<string, ClassEntry>();

  const queryBox = document.createElement("input");
  queryBox.type = "search";
  queryBox.placeholder = "search entity classes, e.g. person";
  const searchButton = el("button", undefined, "Search");
  searchButton.type = "button";
  const status = el("div", "search-status");
  const results = el("ul", "class-results");
  const basket = el("div", "selected-classes");
  const labelBox = document.createElement("input");
  labelBox.type = "text";
  labelBox.placeholder = "label name, e.g. PER";
  const extractButton = el("button", "extract", "Extract lexicon");
  extractButton.type = "button";
  const progress = document.createElement("progress");
  progress.max = 1;
  progress.value = 0;
  progress.hidden = true;

  const refreshBasket = () => {
    basket.textContent = selected.size
      ? `selected: ${[...selected.values()].map((e) => `${e.label} (${e.class_id})`).join(", ")}`
      : "";
  };

  const runSearch = async () => {
    const query = queryBox.value.trim();
    if (!query) return;
    status.textContent = "searching…";
    results.textContent = "";
    try {
      const entries = await api.searchClasses(query);
      status.textContent = entries.length ? "" : "no matching classes";
      for (const entry of entries) {
        const row = el("li", "class-result");
        row.dataset.classId = entry.class_id;
        row.appendChild(el("span", "class-label", entry.label));
        row.appendChild(el("span", "class-id", ` ${entry.class_id}`));
        row.appendChild(el("span", "class-count", ` · ${entry.instance_count} items`));
        row.addEventListener("click", () => {
          if (selected.has(entry.class_id)) selected.delete(entry.class_id);
          else selected.set(entry.class_id, entry);
          row.classList.toggle("selected");
          refreshBasket();
        });
        results.appendChild(row);
      }
    } catch (error) {
      status.textContent = String(error);
    }
  };

  searchButton.addEventListener("click", () => void runSearch());
  queryBox.addEventListener("keydown", (event) => {
    if (event.key === "Enter") void runSearch();
  });

  extractButton.addEventListener("click", async () => {
    const label = labelBox.value.trim();
    if (!label || selected.size === 0) {
      status.textContent = "pick at least one class and a label name";
      return;
    }
    extractButton.disabled = true;
    progress.hidden = false;
    try {
      const { job_id } = await api.extractLexicon([...selected.keys()], label);
      await pollJob(api, job_id, {
        signal: options.signal,
        onProgress: (job) => {
          progress.value = job.progress;
        },
      });
      status.textContent = `lexicon "${label}" extracted`;
      selected.clear();
      refreshBasket();
      options.onExtracted(label);
    } catch (error) {
      status.textContent = `extraction failed: ${String(error)}`;
    } finally {
      extractButton.disabled = false;
      progress.hidden = true;
    }
  });

  root.appendChild(queryBox);
  root.appendChild(searchButton);
  root.appendChild(status);
  root.appendChild(results);
  root.appendChild(basket);
  root.appendChild(labelBox);
  root.appendChild(extractButton);
  root.appendChild(progress);
  return root;
}
