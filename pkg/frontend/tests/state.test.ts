import { describe, expect, it } from "vitest";

import { ConfigFormState, guardNavigation } from "../src/state";
import type { Config } from "../src/types";

function baseConfig(): Config {
  return {
    case_insensitive: false,
    strip_diacritics: false,
    lemmatize: false,
    lemma_table: null,
    stopword_language: null,
    false_positives: [],
    extra_aliases: {},
    split_names: [],
    min_length: 0,
    priority_order: ["PER", "LOC"],
    fuzzy: { enabled: false, max_cost: 0, min_token_len: 5 },
  };
}

describe("ConfigFormState", () => {
  it("starts clean", () => {
    expect(new ConfigFormState(baseConfig()).isDirty()).toBe(false);
  });

  it("tracks dirty fields individually", () => {
    const state = new ConfigFormState(baseConfig());
    state.set("min_length", 3);
    state.set("false_positives", ["Of"]);
    expect(state.dirtyFields().sort()).toEqual(["false_positives", "min_length"]);
  });

  it("reordering the priority list marks it dirty", () => {
    const state = new ConfigFormState(baseConfig());
    state.set("priority_order", ["LOC", "PER"]);
    expect(state.dirtyFields()).toEqual(["priority_order"]);
  });

  it("markSaved adopts the server snapshot", () => {
    const state = new ConfigFormState(baseConfig());
    state.set("min_length", 3);
    state.markSaved({ ...baseConfig(), min_length: 3 });
    expect(state.isDirty()).toBe(false);
    expect(state.draft.min_length).toBe(3);
  });

  it("revert drops local edits", () => {
    const state = new ConfigFormState(baseConfig());
    state.set("min_length", 9);
    state.revert();
    expect(state.draft.min_length).toBe(0);
    expect(state.isDirty()).toBe(false);
  });

  it("draft mutations never leak into the snapshot", () => {
    const state = new ConfigFormState(baseConfig());
    state.draft.false_positives.push("Of");
    expect(state.isDirty()).toBe(true);
    state.revert();
    expect(state.draft.false_positives).toEqual([]);
  });
});

describe("guardNavigation", () => {
  it("allows leaving a clean form without prompting", () => {
    let prompted = false;
    const ok = guardNavigation(new ConfigFormState(baseConfig()), () => {
      prompted = true;
      return false;
    });
    expect(ok).toBe(true);
    expect(prompted).toBe(false);
  });

  it("prompts on a dirty form and honors the answer", () => {
    const state = new ConfigFormState(baseConfig());
    state.set("min_length", 1);
    expect(guardNavigation(state, () => false)).toBe(false);
    expect(guardNavigation(state, () => true)).toBe(true);
  });

  it("treats a missing form as clean", () => {
    expect(guardNavigation(null, () => false)).toBe(true);
  });
});
