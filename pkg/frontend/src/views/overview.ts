/** Descriptive landing view: what the log contains and how well the
 * models fit, straight from the API's evaluation report. */

import { clear, el } from '../dom.js';
import type { ArticleTypesDto, EvalReportDto } from '../types.js';

function metric(value: number | null, suffix = ''): string {
  return value === null ? 'n/a' : `${value.toFixed(2)}${suffix}`;
}

export function renderOverview(
  container: Element,
  types: ArticleTypesDto,
  evalReport: EvalReportDto | null,
): void {
  clear(container);
  container.append(el('h2', {}, ['Overview']));
  container.append(
    el('div', { class: 'kpi-row' }, [
      el('div', { class: 'kpi' }, [
        el('strong', {}, [String(types.article_types.length)]),
        ' article types',
      ]),
      el('div', { class: 'kpi' }, [
        el('strong', {}, [evalReport ? metric(evalReport.macro_rmse) : 'n/a']),
        ' macro one-step RMSE',
      ]),
      el('div', { class: 'kpi' }, [
        el('strong', {}, [evalReport ? metric(evalReport.macro_mape, '%') : 'n/a']),
        ' macro one-step MAPE',
      ]),
    ]),
  );
  if (!evalReport) {
    container.append(
      el('p', { class: 'empty' }, ['Evaluation not loaded; per-type metrics unavailable.']),
    );
    return;
  }
  const table = el('table', { class: 'eval' }, [
    el('tr', {}, [
      el('th', {}, ['article type']),
      el('th', {}, ['one-step RMSE']),
      el('th', {}, ['one-step MAPE']),
      el('th', {}, ['horizon MAPE']),
    ]),
  ]);
  for (const entry of evalReport.per_type) {
    table.append(
      el('tr', { 'data-article-type': entry.article_type }, [
        el('td', {}, [entry.article_type]),
        el('td', {}, [metric(entry.one_step_rmse)]),
        el('td', {}, [metric(entry.one_step_mape, '%')]),
        el('td', {}, [`${metric(entry.horizon_mape, '%')} over ${entry.horizon_weeks}w`]),
      ]),
    );
  }
  container.append(table);
}
