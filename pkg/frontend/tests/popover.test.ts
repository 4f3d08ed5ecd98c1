import { describe, expect, it } from "vitest";

import { renderPopover, renderSentence } from "../src/views/inspector";
import type { Inspection, SentenceView } from "../src/types";

/** The shape the backend returns for the "United" token of the UAE fixture. */
const UNITED_INSPECTION: Inspection = {
  token: "United",
  gold: "B-COUNTRY",
  predicted: "B-COUNTRY",
  candidates: [
    {
      label: "COUNTRY",
      lexicon: "COUNTRY",
      source_item: "Q1:COUNTRY",
      surface: "United Arab Emirates",
      start: 0,
      length: 3,
      fuzzy_cost: 0,
      won: true,
    },
    {
      label: "AIRLINE",
      lexicon: "AIRLINE",
      source_item: "Q1:AIRLINE",
      surface: "United",
      start: 0,
      length: 1,
      fuzzy_cost: 0,
      won: false,
    },
  ],
};

describe("renderPopover", () => {
  it("lists exactly the candidates with the winner marked", () => {
    const popover = renderPopover(UNITED_INSPECTION);
    const rows = popover.querySelectorAll("li.candidate");
    expect(rows.length).toBe(2);
    const winners = popover.querySelectorAll("li.candidate.winner");
    expect(winners.length).toBe(1);
    expect(winners[0].textContent).toContain("COUNTRY");
    const losing = [...rows].find((r) => !r.classList.contains("winner"))!;
    expect(losing.textContent).toContain("AIRLINE");
    expect(losing.textContent).toContain('"United"');
  });

  it("shows assigned and gold tags", () => {
    const popover = renderPopover(UNITED_INSPECTION);
    expect(popover.querySelector(".predicted-tag")!.textContent).toContain("B-COUNTRY");
    expect(popover.querySelector(".gold-tag")!.textContent).toContain("B-COUNTRY");
  });

  it("renders an empty state without candidates", () => {
    const popover = renderPopover({
      token: "nothing",
      gold: null,
      predicted: "O",
      candidates: [],
    });
    expect(popover.querySelector(".no-candidates")).not.toBeNull();
  });
});

describe("renderSentence", () => {
  const sentence: SentenceView = {
    index: 0,
    tokens: ["United", "Arab", "Emirates", "flights"],
    gold: null,
    tags: ["B-COUNTRY", "I-COUNTRY", "I-COUNTRY", "O"],
    spans: [{ start: 0, end: 3, label: "COUNTRY" }],
    overrides: [],
  };

  it("highlights span tokens with the label color and badge", () => {
    const row = renderSentence(sentence);
    const tokens = row.querySelectorAll(".token");
    expect(tokens.length).toBe(4);
    expect(tokens[0].classList.contains("in-span")).toBe(true);
    expect(tokens[3].classList.contains("in-span")).toBe(false);
    expect(row.querySelectorAll(".span-label").length).toBe(1);
    expect(row.querySelector(".span-label")!.textContent).toBe("COUNTRY");
  });

  it("click on a token reports sentence and token index", () => {
    let clicked: [number, number] | null = null;
    const row = renderSentence(sentence, {
      onTokenClick: (sent, tok) => {
        clicked = [sent, tok];
      },
    });
    (row.querySelectorAll(".token")[2] as HTMLElement).click();
    expect(clicked).toEqual([0, 2]);
  });

  it("marks overridden tokens", () => {
    const row = renderSentence({
      ...sentence,
      overrides: [{ start: 3, end: 4, label: "O" }],
    });
    expect(row.querySelectorAll(".token.overridden").length).toBe(1);
  });
});
