import type { SaveResult } from "../api";
import { ConfigFormState } from "../state";
import type { Config, FieldError } from "../types";

export interface ConfigPanelOptions {
  state: ConfigFormState;
  lexiconNames: string[];
  onSave: (patch: Partial<Config>) => Promise<SaveResult>;
  onSaved: (config: Config) => void;
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

function fieldRow(label: string, input: HTMLElement, field: string): HTMLElement {
  const row = el("div", "field-row");
  const caption = el("label", undefined, label);
  caption.appendChild(input);
  row.appendChild(caption);
  const error = el("div", "field-error");
  error.id = `err-${field}`;
  row.appendChild(error);
  return row;
}

function checkbox(state: ConfigFormState, field: keyof Config, onInput: () => void): HTMLInputElement {
  const input = document.createElement("input");
  input.type = "checkbox";
  input.checked = Boolean(state.draft[field]);
  input.dataset.field = field;
  input.addEventListener("change", () => {
    state.set(field, input.checked as never);
    onInput();
  });
  return input;
}

function textInput(
  state: ConfigFormState,
  field: "lemma_table" | "stopword_language",
  onInput: () => void,
): HTMLInputElement {
  const input = document.createElement("input");
  input.type = "text";
  input.value = state.draft[field] ?? "";
  input.dataset.field = field;
  input.addEventListener("input", () => {
    state.set(field, input.value === "" ? null : input.value);
    onInput();
  });
  return input;
}

/** One surface form per line. */
function linesArea(
  state: ConfigFormState,
  field: "false_positives",
  onInput: () => void,
): HTMLTextAreaElement {
  const area = document.createElement("textarea");
  area.rows = 4;
  area.dataset.field = field;
  area.value = state.draft[field].join("\n");
  area.addEventListener("input", () => {
    state.set(
      field,
      area.value
        .split("\n")
        .map((line) => line.trim())
        .filter((line) => line.length > 0),
    );
    onInput();
  });
  return area;
}

/** "surface | alias1 | alias2" per line, mirroring the user-list format. */
function aliasArea(state: ConfigFormState, onInput: () => void): HTMLTextAreaElement {
  const area = document.createElement("textarea");
  area.rows = 4;
  area.dataset.field = "extra_aliases";
  area.value = Object.entries(state.draft.extra_aliases)
    .map(([surface, aliases]) => [surface, ...aliases].join(" | "))
    .join("\n");
  area.addEventListener("input", () => {
    const mapping: Record<string, string[]> = {};
    for (const line of area.value.split("\n")) {
      const parts = line.split("|").map((p) => p.trim()).filter(Boolean);
      if (parts.length >= 2) {
        mapping[parts[0]] = parts.slice(1);
      }
    }
    state.set("extra_aliases", mapping);
    onInput();
  });
  return area;
}

function priorityList(state: ConfigFormState, onInput: () => void): HTMLElement {
  const wrap = el("div", "priority-list");
  wrap.dataset.field = "priority_order";

  const rebuild = () => {
    wrap.textContent = "";
    state.draft.priority_order.forEach((name, i) => {
      const row = el("div", "priority-item");
      row.draggable = true;
      row.dataset.name = name;
      row.appendChild(el("span", "drag-handle", "⋮⋮"));
      row.appendChild(el("span", "priority-rank", String(i + 1)));
      row.appendChild(el("span", "priority-name", name));
      const up = el("button", "move-up", "↑");
      up.type = "button";
      up.disabled = i === 0;
      up.addEventListener("click", () => move(i, i - 1));
      const down = el("button", "move-down", "↓");
      down.type = "button";
      down.disabled = i === state.draft.priority_order.length - 1;
      down.addEventListener("click", () => move(i, i + 1));
      row.appendChild(up);
      row.appendChild(down);
      row.addEventListener("dragstart", (event) => {
        event.dataTransfer?.setData("text/plain", String(i));
      });
      row.addEventListener("dragover", (event) => event.preventDefault());
      row.addEventListener("drop", (event) => {
        event.preventDefault();
        const from = Number(event.dataTransfer?.getData("text/plain"));
        if (!Number.isNaN(from)) move(from, i);
      });
      wrap.appendChild(row);
    });
  };

  const move = (from: number, to: number) => {
    if (to < 0 || to >= state.draft.priority_order.length || from === to) return;
    const order = [...state.draft.priority_order];
    const [name] = order.splice(from, 1);
    order.splice(to, 0, name);
    state.set("priority_order", order);
    rebuild();
    onInput();
  };

  rebuild();
  return wrap;
}

function splitChecklist(
  state: ConfigFormState,
  lexiconNames: string[],
  onInput: () => void,
): HTMLElement {
  const wrap = el("div", "split-list");
  wrap.dataset.field = "split_names";
  for (const name of lexiconNames) {
    const label = el("label", "split-item", ` ${name}`);
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = state.draft.split_names.includes(name);
    box.addEventListener("change", () => {
      const current = new Set(state.draft.split_names);
      if (box.checked) current.add(name);
      else current.delete(name);
      state.set("split_names", [...current].sort());
      onInput();
    });
    label.prepend(box);
    wrap.appendChild(label);
  }
  return wrap;
}

export function clearFieldErrors(root: HTMLElement): void {
  root.querySelectorAll(".field-error").forEach((node) => {
    node.textContent = "";
  });
}

export function showFieldErrors(root: HTMLElement, errors: FieldError[]): void {
  clearFieldErrors(root);
  for (const error of errors) {
    const field = error.field.split(".")[0];
    const slot = root.querySelector(`#err-${field}`);
    if (slot) {
      slot.textContent = error.message;
    } else {
      const fallback = root.querySelector(".form-error");
      if (fallback) fallback.textContent = `${error.field}: ${error.message}`;
    }
  }
}

/** The full configuration form; Save PUTs and surfaces 422 errors inline. */
export function renderConfigPanel(options: ConfigPanelOptions): HTMLElement {
  const { state, lexiconNames } = options;
  const root = el("div", "config-panel");
  const dirtyBadge = el("span", "dirty-badge");
  const refreshDirty = () => {
    dirtyBadge.textContent = state.isDirty() ? "unsaved changes" : "";
  };

  const numberInput = (field: "min_length") => {
    const input = document.createElement("input");
    input.type = "number";
    input.min = "0";
    input.value = String(state.draft[field]);
    input.dataset.field = field;
    input.addEventListener("input", () => {
      state.set(field, Number(input.value || 0));
      refreshDirty();
    });
    return input;
  };

  const fuzzyRow = () => {
    const wrap = el("div", "fuzzy-row");
    wrap.dataset.field = "fuzzy";
    const enabled = document.createElement("input");
    enabled.type = "checkbox";
    enabled.checked = state.draft.fuzzy.enabled;
    const cost = document.createElement("input");
    cost.type = "number";
    cost.min = "0";
    cost.value = String(state.draft.fuzzy.max_cost);
    const minLen = document.createElement("input");
    minLen.type = "number";
    minLen.min = "1";
    minLen.value = String(state.draft.fuzzy.min_token_len);
    const sync = () => {
      state.set("fuzzy", {
        enabled: enabled.checked,
        max_cost: Number(cost.value || 0),
        min_token_len: Number(minLen.value || 1),
      });
      refreshDirty();
    };
    for (const [label, input] of [
      ["enabled", enabled],
      ["max edits", cost],
      ["min token length", minLen],
    ] as const) {
      const caption = el("label", undefined, ` ${label}`);
      caption.prepend(input);
      wrap.appendChild(caption);
      input.addEventListener("change", sync);
      input.addEventListener("input", sync);
    }
    return wrap;
  };

  root.appendChild(dirtyBadge);
  root.appendChild(
    fieldRow("case-insensitive matching", checkbox(state, "case_insensitive", refreshDirty), "case_insensitive"),
  );
  root.appendChild(
    fieldRow("strip diacritics", checkbox(state, "strip_diacritics", refreshDirty), "strip_diacritics"),
  );
  root.appendChild(fieldRow("lemmatize", checkbox(state, "lemmatize", refreshDirty), "lemmatize"));
  root.appendChild(fieldRow("lemma table path", textInput(state, "lemma_table", refreshDirty), "lemma_table"));
  root.appendChild(
    fieldRow("stopword language", textInput(state, "stopword_language", refreshDirty), "stopword_language"),
  );
  root.appendChild(fieldRow("minimum entity length", numberInput("min_length"), "min_length"));
  root.appendChild(
    fieldRow("false positives (one per line)", linesArea(state, "false_positives", refreshDirty), "false_positives"),
  );
  root.appendChild(
    fieldRow("extra aliases (surface | alias | …)", aliasArea(state, refreshDirty), "extra_aliases"),
  );
  root.appendChild(fieldRow("split names for", splitChecklist(state, lexiconNames, refreshDirty), "split_names"));
  root.appendChild(fieldRow("lexicon priority (top wins)", priorityList(state, refreshDirty), "priority_order"));
  root.appendChild(fieldRow("fuzzy matching", fuzzyRow(), "fuzzy"));
  root.appendChild(el("div", "form-error"));

  const save = el("button", "save-config", "Save configuration");
  save.type = "button";
  save.addEventListener("click", async () => {
    save.disabled = true;
    try {
      const result = await options.onSave({ ...state.draft });
      if (result.ok) {
        state.markSaved(result.config);
        clearFieldErrors(root);
        refreshDirty();
        options.onSaved(result.config);
      } else {
        showFieldErrors(root, result.errors);
      }
    } finally {
      save.disabled = false;
    }
  });
  root.appendChild(save);
  refreshDirty();
  return root;
}
