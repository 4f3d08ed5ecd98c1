import { describe, expect, it } from "vitest";

import { historySeries, renderHistoryChart } from "../src/chart";
import type { HistoryStep } from "../src/types";

function step(index: number, metrics: Record<string, [number, number]>): HistoryStep {
  return {
    index,
    description: `step ${index}`,
    timestamp: "",
    metrics: {
      labels: Object.fromEntries(
        Object.entries(metrics).map(([label, [p, r]]) => [
          label,
          { precision: p, recall: r, f1: 0 },
        ]),
      ),
      micro: { precision: 0, recall: 0, f1: 0 },
    },
  };
}

describe("historySeries", () => {
  it("copies the payload values exactly, no smoothing", () => {
    const history = [
      step(0, { LOC: [0.5, 0.3333333333333333] }),
      step(1, { LOC: [0.7612345, 0.63] }),
    ];
    const series = historySeries(history);
    const precision = series.find((s) => s.label === "LOC" && s.metric === "precision")!;
    expect(precision.points).toEqual([
      { step: 0, value: 0.5 },
      { step: 1, value: 0.7612345 },
    ]);
    const recall = series.find((s) => s.label === "LOC" && s.metric === "recall")!;
    expect(recall.points.map((p) => p.value)).toEqual([0.3333333333333333, 0.63]);
  });

  it("skips steps without metrics", () => {
    const bare: HistoryStep = { index: 0, description: "init", metrics: null, timestamp: "" };
    const history = [bare, step(1, { PER: [1, 1] })];
    const series = historySeries(history);
    expect(series.every((s) => s.points.length === 1)).toBe(true);
  });

  it("produces one precision and one recall series per label", () => {
    const history = [step(0, { PER: [1, 1], LOC: [0.5, 0.5] })];
    const series = historySeries(history);
    expect(series.map((s) => `${s.label}/${s.metric}`).sort()).toEqual([
      "LOC/precision",
      "LOC/recall",
      "PER/precision",
      "PER/recall",
    ]);
  });
});

describe("renderHistoryChart", () => {
  it("renders one dot per step per series and labels the x axis", () => {
    const history = [step(0, { LOC: [0.5, 0.4] }), step(1, { LOC: [0.8, 0.6] })];
    const svg = renderHistoryChart(history);
    const dots = svg.querySelectorAll("circle.point[data-label='LOC']");
    expect(dots.length).toBe(4); // 2 steps x (precision + recall)
    const xLabels = [...svg.querySelectorAll("text.x-label")].map((t) => t.textContent);
    expect(xLabels).toEqual(["step 0", "step 1"]);
  });

  it("adding a step adds exactly one point per series", () => {
    const history = [step(0, { LOC: [0.5, 0.4], PER: [0.9, 0.2] })];
    const before = renderHistoryChart(history).querySelectorAll("circle.point").length;
    const after = renderHistoryChart([...history, step(1, { LOC: [0.6, 0.5], PER: [0.9, 0.3] })])
      .querySelectorAll("circle.point").length;
    expect(before).toBe(4);
    expect(after).toBe(8);
  });

  it("stores the raw value on each dot", () => {
    const svg = renderHistoryChart([step(0, { LOC: [0.7612345, 0.63] })]);
    const values = [...svg.querySelectorAll("circle.point[data-label='LOC']")].map((c) =>
      c.getAttribute("data-value"),
    );
    expect(values).toContain("0.7612345");
    expect(values).toContain("0.63");
  });
});
