import { describe, expect, it } from "vitest";

import type { Figure } from "../src/figures.js";
import { renderFigure } from "../src/svg.js";

function figure(overrides: Partial<Figure> = {}): Figure {
  return {
    problem: "mcps",
    deltaT: "0.25",
    series: [
      {
        n: 6,
        mixer: "xy",
        points: [
          { p: 5, mean: 0.3, count: 2 },
          { p: 10, mean: 0.5, count: 2 },
        ],
      },
      {
        n: 6,
        mixer: "x",
        points: [
          { p: 5, mean: 0.004, count: 2 },
          { p: 10, mean: 0.002, count: 2 },
        ],
      },
    ],
    ...overrides,
  };
}

describe("svg rendering", () => {
  it("emits a well-formed standalone svg with title and legend", () => {
    const svg = renderFigure(figure(), { logY: false });
    expect(svg.startsWith("<svg xmlns=")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    expect(svg).toContain("mcps, dt=0.25");
    expect(svg).toContain("n=6 xy");
    expect(svg).toContain("n=6 x");
    expect(svg).toContain("Trotter steps p");
    expect(svg.match(/<polyline /g)).toHaveLength(2);
  });

  it("uses power-of-ten tick labels in log mode", () => {
    const svg = renderFigure(figure(), { logY: true });
    expect(svg).toMatch(/1e-\d/);
  });

  it("survives zero values in log mode without NaN coordinates", () => {
    const fig = figure({
      series: [
        {
          n: 6,
          mixer: "x",
          points: [
            { p: 5, mean: 0, count: 2 },
            { p: 10, mean: 1e-20, count: 2 },
          ],
        },
      ],
    });
    const svg = renderFigure(fig, { logY: true });
    expect(svg).not.toContain("NaN");
    expect(svg).not.toContain("Infinity");
  });

  it("handles a single-point series", () => {
    const fig = figure({
      series: [{ n: 5, mixer: "xy", points: [{ p: 5, mean: 0.2, count: 1 }] }],
    });
    const svg = renderFigure(fig, { logY: false });
    expect(svg).toContain("<circle");
    expect(svg).not.toContain("NaN");
  });

  it("escapes markup-significant characters in labels", () => {
    const fig = figure({ problem: "a<b&c" });
    const svg = renderFigure(fig, { logY: false });
    expect(svg).toContain("a&lt;b&amp;c");
    expect(svg).not.toContain("a<b&c");
  });
});
