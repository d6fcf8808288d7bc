/** Descriptive view: the reconstructed workload as a time series.
 * Renders one line per requested series; every plotted point is one
 * API observation. */

import { lineChart } from '../charts.js';
import { clear, el } from '../dom.js';
import type { WorkloadDto } from '../types.js';

export function renderWorkloadTimeline(container: Element, workloads: WorkloadDto[]): void {
  clear(container);
  container.append(el('h2', {}, ['Workload timeline']));
  if (workloads.length === 0) {
    container.append(el('p', { class: 'empty' }, ['No series selected.']));
    return;
  }
  const chart = lineChart(
    workloads.map((w) => ({
      label: w.business_unit ? `${w.article_type} / ${w.business_unit}` : w.article_type,
      series: w.series,
    })),
  );
  container.append(chart);
  const legend = el('ul', { class: 'legend' });
  for (const workload of workloads) {
    legend.append(
      el('li', { 'data-article-type': workload.article_type }, [
        `${workload.article_type}: ${workload.series.values.length} ${workload.series.step}s `
        + `of ${workload.kind} (${workload.unit})`,
      ]),
    );
  }
  container.append(legend);
}
