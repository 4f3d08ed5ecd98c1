import { lineColor } from "./colors";
import type { HistoryStep } from "./types";

export interface ChartPoint {
  step: number;
  value: number;
}

export interface ChartSeries {
  label: string;
  metric: "precision" | "recall";
  points: ChartPoint[];
}

/**
 * Map the /history payload onto chart series, one precision and one recall
 * line per label. Values are copied as-is: whatever the server reported is
 * what gets plotted.
 */
export function historySeries(history: HistoryStep[]): ChartSeries[] {
  const steps = history.filter((s) => s.metrics !== null);
  const labels = new Set<string>();
  for (const step of steps) {
    for (const label of Object.keys(step.metrics!.labels)) {
      labels.add(label);
    }
  }
  const series: ChartSeries[] = [];
  for (const label of [...labels].sort()) {
    for (const metric of ["precision", "recall"] as const) {
      series.push({
        label,
        metric,
        points: steps
          .filter((s) => label in s.metrics!.labels)
          .map((s) => ({ step: s.index, value: s.metrics!.labels[label][metric] })),
      });
    }
  }
  return series;
}

const WIDTH = 640;
const HEIGHT = 260;
const MARGIN = { top: 12, right: 12, bottom: 64, left: 40 };

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

/** Render the tuning trajectory as an inline SVG line chart. */
export function renderHistoryChart(history: HistoryStep[]): SVGSVGElement {
  const svg = svgEl("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: String(WIDTH),
    height: String(HEIGHT),
    class: "history-chart",
  });
  const steps = history.filter((s) => s.metrics !== null);
  const series = historySeries(history);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const xs = steps.map((s) => s.index);
  const xMin = Math.min(...xs, 0);
  const xMax = Math.max(...xs, xMin + 1);
  const x = (step: number) =>
    MARGIN.left + ((step - xMin) / Math.max(xMax - xMin, 1)) * plotW;
  const y = (value: number) => MARGIN.top + (1 - value) * plotH;

  for (const frac of [0, 0.25, 0.5, 0.75, 1]) {
    svg.appendChild(
      svgEl("line", {
        x1: String(MARGIN.left),
        x2: String(WIDTH - MARGIN.right),
        y1: String(y(frac)),
        y2: String(y(frac)),
        class: "grid-line",
        stroke: "#ddd",
      }),
    );
    const tick = svgEl("text", {
      x: String(MARGIN.left - 6),
      y: String(y(frac) + 4),
      "text-anchor": "end",
      class: "tick-label",
    });
    tick.textContent = `${Math.round(frac * 100)}`;
    svg.appendChild(tick);
  }

  for (const s of series) {
    const color = lineColor(s.label, s.metric === "precision" ? "primary" : "secondary");
    if (s.points.length > 1) {
      svg.appendChild(
        svgEl("polyline", {
          points: s.points.map((p) => `${x(p.step)},${y(p.value)}`).join(" "),
          fill: "none",
          stroke: color,
          "stroke-width": "2",
          "stroke-dasharray": s.metric === "recall" ? "5,3" : "",
          class: `series series-${s.metric}`,
          "data-label": s.label,
        }),
      );
    }
    for (const p of s.points) {
      const dot = svgEl("circle", {
        cx: String(x(p.step)),
        cy: String(y(p.value)),
        r: "3.5",
        fill: color,
        class: `point point-${s.metric}`,
        "data-label": s.label,
        "data-step": String(p.step),
        "data-value": String(p.value),
      });
      const title = svgEl("title", {});
      title.textContent = `${s.label} ${s.metric} @ step ${p.step}: ${(p.value * 100).toFixed(1)}%`;
      dot.appendChild(title);
      svg.appendChild(dot);
    }
  }

  for (const step of steps) {
    const label = svgEl("text", {
      x: String(x(step.index)),
      y: String(HEIGHT - MARGIN.bottom + 14),
      transform: `rotate(25 ${x(step.index)} ${HEIGHT - MARGIN.bottom + 14})`,
      class: "x-label",
      "font-size": "10",
    });
    label.textContent = step.description || `step ${step.index}`;
    svg.appendChild(label);
  }
  return svg;
}
