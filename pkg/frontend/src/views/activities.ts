/** Predictive view: the concrete activity plan behind a forecast,
 * grouped by business unit, plus the aggregated hours per week. */

import { stackedBarChart } from '../charts.js';
import { clear, el } from '../dom.js';
import type { ForecastDto, PlannedActivityDto } from '../types.js';

function activityRow(activity: PlannedActivityDto): HTMLElement {
  return el('tr', { class: `activity ${activity.provenance.kind}` }, [
    el('td', {}, [activity.planned_date.slice(0, 10)]),
    el('td', {}, [activity.activity]),
    el('td', {}, [activity.business_unit]),
    el('td', { class: 'hours' }, [String(activity.duration_hours)]),
    el('td', {}, [`${activity.provenance.kind}:${activity.provenance.source}`]),
  ]);
}

export function renderActivities(container: Element, forecast: ForecastDto | null): void {
  clear(container);
  container.append(el('h2', {}, ['Planned activities']));
  if (!forecast) {
    container.append(
      el('p', { class: 'empty' }, ['Run a forecast first (orders-forecast view).']),
    );
    return;
  }
  const units = Object.keys(forecast.aggregate).sort();
  container.append(
    stackedBarChart(units.map((unit) => ({ label: unit, series: forecast.aggregate[unit]! }))),
  );
  const legend = el('ul', { class: 'legend' });
  for (const unit of units) {
    legend.append(el('li', {}, [unit]));
  }
  container.append(legend);

  const table = el('table', { class: 'activities' }, [
    el('tr', {}, [
      el('th', {}, ['date']),
      el('th', {}, ['activity']),
      el('th', {}, ['business unit']),
      el('th', {}, ['hours']),
      el('th', {}, ['provenance']),
    ]),
  ]);
  const all = [...forecast.new_order_activities, ...forecast.running_completions];
  for (const activity of all) {
    table.append(activityRow(activity));
  }
  container.append(table);
  container.append(
    el('p', { class: 'caption' }, [`${all.length} activities over ${units.length} units`]),
  );
}
