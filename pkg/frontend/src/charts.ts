/** Hand-rolled SVG charts. Pure element builders: identical data and
 * dimensions always produce identical markup. Scaling to pixels is the
 * only arithmetic here; every displayed quantity comes from the API. */

import { svgEl } from './dom.js';
import type { TimeSeriesDto } from './types.js';

export interface SeriesWithLabel {
  label: string;
  series: TimeSeriesDto;
}

const WIDTH = 860;
const HEIGHT = 240;
const PAD = { left: 46, right: 12, top: 12, bottom: 24 };

function xPosition(index: number, count: number): number {
  const span = WIDTH - PAD.left - PAD.right;
  return PAD.left + (count <= 1 ? span / 2 : (index / (count - 1)) * span);
}

function yScale(maxValue: number): (v: number) => number {
  const span = HEIGHT - PAD.top - PAD.bottom;
  const top = maxValue <= 0 ? 1 : maxValue;
  return (v) => HEIGHT - PAD.bottom - (v / top) * span;
}

const PALETTE = ['#2563eb', '#db2777', '#059669', '#d97706', '#7c3aed', '#0891b2', '#be123c'];

export function color(index: number): string {
  return PALETTE[index % PALETTE.length]!;
}

/** Multi-line chart; one `<circle class="point">` per observation. */
export function lineChart(series: SeriesWithLabel[]): SVGElement {
  const svg = svgEl('svg', {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: 'chart line-chart',
    preserveAspectRatio: 'none',
  });
  const maxValue = Math.max(0, ...series.flatMap((s) => s.series.values));
  const y = yScale(maxValue);
  svg.append(
    svgEl('line', {
      x1: String(PAD.left), y1: String(y(0)), x2: String(WIDTH - PAD.right), y2: String(y(0)),
      class: 'axis',
    }),
  );
  series.forEach((entry, seriesIndex) => {
    const values = entry.series.values;
    const stroke = color(seriesIndex);
    const path = values
      .map((v, i) => `${i === 0 ? 'M' : 'L'}${xPosition(i, values.length)},${y(v)}`)
      .join(' ');
    svg.append(svgEl('path', { d: path, fill: 'none', stroke, class: 'series-line' }));
    values.forEach((v, i) => {
      svg.append(
        svgEl('circle', {
          cx: String(xPosition(i, values.length)),
          cy: String(y(v)),
          r: '2.2',
          fill: stroke,
          class: 'point',
          'data-series': entry.label,
          'data-value': String(v),
        }),
      );
    });
  });
  return svg;
}

/** Stacked weekly bars, one group per label (e.g. business unit). */
export function stackedBarChart(series: SeriesWithLabel[]): SVGElement {
  const svg = svgEl('svg', {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: 'chart stacked-bar-chart',
    preserveAspectRatio: 'none',
  });
  const count = Math.max(0, ...series.map((s) => s.series.values.length));
  if (count === 0) {
    return svg;
  }
  const totals = Array.from({ length: count }, (_, i) =>
    series.reduce((sum, s) => sum + (s.series.values[i] ?? 0), 0),
  );
  const y = yScale(Math.max(...totals));
  const barWidth = Math.max(2, (WIDTH - PAD.left - PAD.right) / count - 2);
  for (let i = 0; i < count; i += 1) {
    let cursor = 0;
    series.forEach((entry, seriesIndex) => {
      const value = entry.series.values[i] ?? 0;
      if (value <= 0) {
        return;
      }
      const yTop = y(cursor + value);
      const yBottom = y(cursor);
      svg.append(
        svgEl('rect', {
          x: String(xPosition(i, count) - barWidth / 2),
          y: String(yTop),
          width: String(barWidth),
          height: String(Math.max(0.5, yBottom - yTop)),
          fill: color(seriesIndex),
          class: 'bar',
          'data-series': entry.label,
          'data-value': String(value),
        }),
      );
      cursor += value;
    });
  }
  return svg;
}
