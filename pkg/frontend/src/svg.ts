import type { Figure, Series } from "./figures.js";

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 180, bottom: 56, left: 72 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

/** Values at or below this floor render on the bottom edge of log plots. */
const LOG_FLOOR = 1e-16;

const MIXER_COLORS: Record<string, string> = {
  xy: "#1f6fb4",
  x: "#c24a3a",
};
const FALLBACK_COLORS = ["#2a9d5c", "#8255a8", "#b58a2a", "#4a8e8e"];
const DASHES = ["", "7 3", "2 3", "7 3 2 3", "12 4"];

function seriesColor(series: Series, index: number): string {
  return MIXER_COLORS[series.mixer] ?? FALLBACK_COLORS[index % FALLBACK_COLORS.length];
}

function fmt(value: number): string {
  return value.toFixed(2).replace(/\.?0+$/, "") || "0";
}

function tickLabel(value: number, logY: boolean): string {
  if (!logY) return fmt(value);
  const exp = Math.round(Math.log10(value));
  return exp >= -2 && exp <= 0 ? fmt(value) : `1e${exp}`;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export interface RenderOptions {
  logY: boolean;
}

export function renderFigure(figure: Figure, options: RenderOptions): string {
  const { logY } = options;
  const ps = figure.series.flatMap((s) => s.points.map((pt) => pt.p));
  const means = figure.series.flatMap((s) => s.points.map((pt) => pt.mean));
  const pMin = Math.min(...ps);
  const pMax = Math.max(...ps);
  const pSpan = pMax > pMin ? pMax - pMin : 1;

  let yMin: number;
  let yMax: number;
  if (logY) {
    const positive = means.filter((v) => v > LOG_FLOOR);
    yMax = positive.length ? Math.max(...positive) : 1;
    yMin = positive.length ? Math.min(LOG_FLOOR * 10, ...positive) : LOG_FLOOR;
    yMin = Math.max(yMin / 2, LOG_FLOOR);
    yMax = Math.min(yMax * 2, 1.5);
  } else {
    yMax = Math.max(...means, 0) * 1.05 || 1;
    yMin = 0;
  }

  const x = (p: number): number => MARGIN.left + ((p - pMin) / pSpan) * PLOT_W;
  const y = (v: number): number => {
    if (logY) {
      const clamped = Math.max(v, yMin);
      const t = Math.log10(clamped / yMin) / Math.log10(yMax / yMin);
      return MARGIN.top + (1 - t) * PLOT_H;
    }
    return MARGIN.top + (1 - (v - yMin) / (yMax - yMin)) * PLOT_H;
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${MARGIN.left}" y="28" font-size="17" font-weight="bold">${escapeXml(
      `${figure.problem}, dt=${figure.deltaT}`,
    )}</text>`,
  );

  // axes
  const x0 = MARGIN.left;
  const x1 = MARGIN.left + PLOT_W;
  const y0 = MARGIN.top + PLOT_H;
  const y1 = MARGIN.top;
  parts.push(
    `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#333" stroke-width="1"/>`,
    `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#333" stroke-width="1"/>`,
  );

  // x ticks on the distinct step counts (thin out to at most 10 labels)
  const uniqueP = [...new Set(ps)].sort((a, b) => a - b);
  const stride = Math.max(1, Math.ceil(uniqueP.length / 10));
  uniqueP.forEach((p, i) => {
    if (i % stride !== 0 && i !== uniqueP.length - 1) return;
    const px = x(p);
    parts.push(
      `<line x1="${px.toFixed(2)}" y1="${y0}" x2="${px.toFixed(2)}" y2="${y0 + 5}" stroke="#333"/>`,
      `<text x="${px.toFixed(2)}" y="${y0 + 20}" font-size="12" text-anchor="middle">${p}</text>`,
    );
  });
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" font-size="13" text-anchor="middle">Trotter steps p</text>`,
  );

  // y ticks
  const ticks: number[] = [];
  if (logY) {
    const eMin = Math.ceil(Math.log10(yMin));
    const eMax = Math.floor(Math.log10(yMax));
    for (let e = eMin; e <= eMax; e++) ticks.push(10 ** e);
  } else {
    for (let i = 0; i <= 5; i++) ticks.push(yMin + ((yMax - yMin) * i) / 5);
  }
  for (const tick of ticks) {
    const py = y(tick);
    parts.push(
      `<line x1="${x0 - 5}" y1="${py.toFixed(2)}" x2="${x0}" y2="${py.toFixed(2)}" stroke="#333"/>`,
      `<line x1="${x0}" y1="${py.toFixed(2)}" x2="${x1}" y2="${py.toFixed(2)}" stroke="#ddd" stroke-width="0.5"/>`,
      `<text x="${x0 - 9}" y="${(py + 4).toFixed(2)}" font-size="12" text-anchor="end">${tickLabel(tick, logY)}</text>`,
    );
  }
  parts.push(
    `<text x="18" y="${(y0 + y1) / 2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 ${(y0 + y1) / 2})">mean success probability</text>`,
  );

  // series lines, point markers, legend
  const nsInFigure = [...new Set(figure.series.map((s) => s.n))].sort((a, b) => a - b);
  figure.series.forEach((series, index) => {
    const color = seriesColor(series, index);
    const dash = DASHES[nsInFigure.indexOf(series.n) % DASHES.length];
    const coords = series.points
      .map((pt) => `${x(pt.p).toFixed(2)},${y(pt.mean).toFixed(2)}`)
      .join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${color}" stroke-width="1.8"${dashAttr}/>`,
    );
    for (const pt of series.points) {
      parts.push(
        `<circle cx="${x(pt.p).toFixed(2)}" cy="${y(pt.mean).toFixed(2)}" r="2.6" fill="${color}"/>`,
      );
    }
    const ly = MARGIN.top + 14 + index * 20;
    const lx = x1 + 14;
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 26}" y2="${ly - 4}" stroke="${color}" stroke-width="1.8"${dashAttr}/>`,
      `<text x="${lx + 32}" y="${ly}" font-size="12">${escapeXml(`n=${series.n} ${series.mixer}`)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
