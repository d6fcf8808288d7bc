/** Predictive what-if view: request a forecast (as-of, horizon, seed,
 * article types) and render the predicted weekly quantities. Changing
 * any input re-submits the request. */

import { lineChart } from '../charts.js';
import { clear, el } from '../dom.js';
import type { ViewState } from '../state.js';
import type { ForecastDto, ForecastRequestDto } from '../types.js';

export interface ForecastFormHandlers {
  onSubmit: (request: ForecastRequestDto) => void;
}

export function renderForecastForm(
  container: Element,
  state: ViewState,
  handlers: ForecastFormHandlers,
): void {
  clear(container);
  const asOf = el('input', { type: 'date', value: state.asOf, name: 'as_of' });
  const horizon = el('input', {
    type: 'number', min: '1', value: String(state.horizonWeeks), name: 'horizon',
  });
  const seed = el('input', { type: 'number', value: String(state.seed), name: 'seed' });
  const typeBoxes = state.articleTypes.map((articleType) => {
    const box = el('input', { type: 'checkbox', value: articleType, name: 'types' });
    box.checked =
      state.selectedTypes.length === 0 || state.selectedTypes.includes(articleType);
    return box;
  });

  const submit = () => {
    const selected = typeBoxes.filter((b) => b.checked).map((b) => b.value);
    handlers.onSubmit({
      as_of: asOf.value,
      horizon_weeks: Number(horizon.value),
      seed: Number(seed.value),
      article_types: selected.length === typeBoxes.length ? [] : selected,
    });
  };
  for (const input of [asOf, horizon, seed, ...typeBoxes]) {
    input.addEventListener('change', submit);
  }

  const form = el('form', { class: 'forecast-form' }, [
    el('label', {}, ['as of ', asOf]),
    el('label', {}, ['horizon (weeks) ', horizon]),
    el('label', {}, ['seed ', seed]),
  ]);
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    submit();
  });
  state.articleTypes.forEach((articleType, i) => {
    form.append(el('label', { class: 'type-box' }, [typeBoxes[i]!, articleType]));
  });
  const run = el('button', { type: 'submit' }, ['run forecast']);
  form.append(run);
  container.append(el('h2', {}, ['Orders forecast']), form);
  container.append(el('div', { class: 'forecast-result' }));
}

export function renderForecastResult(container: Element, forecast: ForecastDto): void {
  const slot = container.querySelector('.forecast-result');
  if (!slot) {
    return;
  }
  clear(slot);
  const types = Object.keys(forecast.order_quantities).sort();
  slot.append(
    lineChart(
      types.map((articleType) => ({
        label: articleType,
        series: {
          start_date: forecast.first_week,
          step: 'week' as const,
          values: forecast.order_quantities[articleType]!,
        },
      })),
    ),
  );
  const table = el('table', { class: 'quantities' });
  const header = el('tr', {}, [el('th', {}, ['article type'])]);
  for (let week = 0; week < forecast.horizon_weeks; week += 1) {
    header.append(el('th', {}, [`w+${week + 1}`]));
  }
  table.append(header);
  for (const articleType of types) {
    const row = el('tr', { 'data-article-type': articleType }, [
      el('td', {}, [articleType]),
    ]);
    for (const quantity of forecast.order_quantities[articleType]!) {
      row.append(el('td', { class: 'quantity' }, [String(quantity)]));
    }
    table.append(row);
  }
  slot.append(table);
  slot.append(
    el('p', { class: 'caption' }, [
      `forecast ${forecast.id} from ${forecast.first_week}, seed ${forecast.seed}: `
      + `${forecast.new_order_activities.length} new-order activities, `
      + `${forecast.running_completions.length} running completions`,
    ]),
  );
}
