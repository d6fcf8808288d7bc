/** Predictive view: cases open at the as-of date, the activities they
 * have executed, and the replayed completions. */

import { clear, el } from '../dom.js';
import type { RunningOrdersDto } from '../types.js';

export function renderRunningOrders(container: Element, data: RunningOrdersDto): void {
  clear(container);
  container.append(el('h2', {}, [`Running orders at ${data.as_of}`]));
  if (data.running_orders.length === 0) {
    container.append(el('p', { class: 'empty' }, ['No open cases at this date.']));
    return;
  }
  const table = el('table', { class: 'running-orders' }, [
    el('tr', {}, [
      el('th', {}, ['case']),
      el('th', {}, ['article type']),
      el('th', {}, ['executed']),
      el('th', {}, ['replayed completion']),
    ]),
  ]);
  for (const order of data.running_orders) {
    table.append(
      el('tr', { class: 'running-order', 'data-case-id': order.case_id }, [
        el('td', {}, [order.case_id]),
        el('td', {}, [order.article_type]),
        el('td', { class: 'signature' }, [order.executed_signature.join(' > ')]),
        el('td', { class: 'completion' }, [
          order.completions.map((c) => c.activity).join(' > ') || '(complete)',
        ]),
      ]),
    );
  }
  container.append(table);
  container.append(
    el('p', { class: 'caption' }, [`${data.running_orders.length} open cases`]),
  );
}
