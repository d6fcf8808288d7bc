import { afterEach, beforeEach, describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { App } from '../src/app.js';
import {
  FILTERED_GRAPH_FIXTURE,
  FULL_GRAPH_FIXTURE,
  RUNNING_ORDERS_FIXTURE,
  WORKLOAD_FIXTURE,
  startFixtureServer,
  type Fixture,
} from './fixtureServer.js';

let fixture: Fixture;
let app: App;
let root: HTMLElement;

async function startApp(): Promise<void> {
  root = document.createElement('div');
  document.body.append(root);
  app = new App(root, new ApiClient(fixture.baseUrl), '2022-09-07');
  await app.start();
}

beforeEach(async () => {
  fixture = await startFixtureServer();
  await startApp();
});

afterEach(async () => {
  await fixture.close();
  document.body.innerHTML = '';
});

describe('workload timeline', () => {
  it('renders exactly the fixture series point count', async () => {
    app.state.activeView = 'workload-timeline';
    app.state.selectedTypes = ['AT-ALPHA'];
    await app.render();
    const points = root.querySelectorAll('circle.point');
    expect(points.length).toBe(WORKLOAD_FIXTURE.series.values.length);
  });

  it('passes series values through untouched', async () => {
    app.state.activeView = 'workload-timeline';
    app.state.selectedTypes = ['AT-ALPHA'];
    await app.render();
    const values = [...root.querySelectorAll('circle.point')].map((node) =>
      Number(node.getAttribute('data-value')),
    );
    expect(values).toEqual(WORKLOAD_FIXTURE.series.values);
  });

  it('shows all article types when no filter is set', async () => {
    app.state.activeView = 'workload-timeline';
    app.state.selectedTypes = [];
    await app.render();
    const legendEntries = root.querySelectorAll('.legend li');
    expect(legendEntries.length).toBe(2); // both fixture types
  });
});

describe('process map', () => {
  it('renders the API edge count for two thresholds', async () => {
    app.state.activeView = 'process-map';
    app.state.graphThreshold = 1.0;
    await app.render();
    expect(root.querySelectorAll('line.edge').length).toBe(FULL_GRAPH_FIXTURE.edges.length);

    app.state.graphThreshold = 0.5;
    await app.render();
    expect(root.querySelectorAll('line.edge').length).toBe(
      FILTERED_GRAPH_FIXTURE.edges.length,
    );
  });

  it('re-fetches when the slider moves', async () => {
    app.state.activeView = 'process-map';
    app.state.graphThreshold = 1.0;
    await app.render();
    const before = fixture.requests.filter((r) => r.path.startsWith('/api/process-graph'));
    const slider = root.querySelector<HTMLInputElement>('input.threshold-slider')!;
    slider.value = '0.5';
    slider.dispatchEvent(new Event('change'));
    await new Promise((resolve) => setTimeout(resolve, 30));
    const after = fixture.requests.filter((r) => r.path.startsWith('/api/process-graph'));
    expect(after.length).toBe(before.length + 1);
    expect(after.at(-1)!.path).toContain('threshold=0.5');
  });
});

describe('running orders', () => {
  it('lists executed and replayed activities from the API', async () => {
    app.state.activeView = 'running-orders';
    await app.render();
    const rows = root.querySelectorAll('tr.running-order');
    expect(rows.length).toBe(RUNNING_ORDERS_FIXTURE.running_orders.length);
    expect(root.querySelector('.signature')!.textContent).toBe('order entry > planning');
    expect(root.querySelector('.completion')!.textContent).toBe('shipping');
  });
});

describe('overview', () => {
  it('displays the evaluation metrics verbatim', async () => {
    app.state.activeView = 'overview';
    await app.render();
    expect(root.textContent).toContain('12.50%');
    expect(root.textContent).toContain('1.25');
  });
});

describe('error handling', () => {
  it('shows a banner when the API fails and flags stale data', async () => {
    app.state.activeView = 'workload-timeline';
    await app.render();
    fixture.failNext.value = true;
    await app.render();
    expect(root.querySelector('.error-banner')).not.toBeNull();
    expect(root.querySelector('.stale-flag')).not.toBeNull();
  });
});
