/** Application shell: navigation, state, fetching, and error handling.
 * Views are pure renders of (API data, state); this module owns the
 * side effects. API failures surface as a banner and any previously
 * rendered data is flagged stale rather than wiped. */

import { ApiClient } from './api.js';
import { clear, el, errorBanner, staleFlag } from './dom.js';
import { defaultState, validate, type ViewName, type ViewState } from './state.js';
import type { ForecastDto, ForecastRequestDto } from './types.js';
import { renderActivities } from './views/activities.js';
import { renderForecastForm, renderForecastResult } from './views/ordersForecast.js';
import { renderOverview } from './views/overview.js';
import { renderProcessMap } from './views/processMap.js';
import { renderRunningOrders } from './views/runningOrders.js';
import { renderWorkloadTimeline } from './views/workloadTimeline.js';

const VIEWS: { name: ViewName; label: string }[] = [
  { name: 'overview', label: 'Overview' },
  { name: 'workload-timeline', label: 'Workload timeline' },
  { name: 'process-map', label: 'Process map' },
  { name: 'orders-forecast', label: 'Orders forecast' },
  { name: 'activities', label: 'Activities' },
  { name: 'running-orders', label: 'Running orders' },
];

export class App {
  readonly state: ViewState;
  private lastForecast: ForecastDto | null = null;
  private readonly viewContainer: HTMLElement;
  private readonly bannerSlot: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
    today: string = new Date().toISOString().slice(0, 10),
  ) {
    this.state = defaultState(today);
    this.bannerSlot = el('div', { class: 'banner-slot' });
    this.viewContainer = el('main', { class: 'view' });
  }

  async start(): Promise<void> {
    const nav = el('nav', {});
    for (const view of VIEWS) {
      const button = el('button', { 'data-view': view.name }, [view.label]);
      button.addEventListener('click', () => {
        this.state.activeView = view.name;
        void this.render();
      });
      nav.append(button);
    }
    clear(this.root);
    this.root.append(el('h1', {}, ['workcast']), nav, this.bannerSlot, this.viewContainer);
    try {
      const types = await this.client.articleTypes();
      this.state.articleTypes = types.article_types;
    } catch (error) {
      this.showError(error);
    }
    await this.render();
  }

  private showError(error: unknown): void {
    clear(this.bannerSlot);
    this.bannerSlot.append(errorBanner(error instanceof Error ? error.message : String(error)));
    if (this.viewContainer.childNodes.length > 0) {
      this.bannerSlot.append(staleFlag());
    }
  }

  private clearError(): void {
    clear(this.bannerSlot);
  }

  async render(): Promise<void> {
    const problems = validate(this.state);
    if (problems.length > 0) {
      this.showError(new Error(problems.join('; ')));
      return;
    }
    try {
      switch (this.state.activeView) {
        case 'overview': {
          const types = await this.client.articleTypes();
          let evalReport = null;
          try {
            evalReport = await this.client.evalReport();
          } catch {
            /* evaluation is expensive server-side and optional here */
          }
          renderOverview(this.viewContainer, types, evalReport);
          break;
        }
        case 'workload-timeline': {
          const selected =
            this.state.selectedTypes.length > 0
              ? this.state.selectedTypes
              : this.state.articleTypes;
          const workloads = await Promise.all(
            selected.map((t) => this.client.workload(t, 'demand', 'week')),
          );
          renderWorkloadTimeline(this.viewContainer, workloads);
          break;
        }
        case 'process-map': {
          const graph = await this.client.processGraph(this.state.graphThreshold);
          renderProcessMap(this.viewContainer, graph, (threshold) => {
            this.state.graphThreshold = threshold;
            void this.render();
          });
          break;
        }
        case 'orders-forecast': {
          renderForecastForm(this.viewContainer, this.state, {
            onSubmit: (request) => void this.submitForecast(request),
          });
          if (this.lastForecast) {
            renderForecastResult(this.viewContainer, this.lastForecast);
          }
          break;
        }
        case 'activities': {
          renderActivities(this.viewContainer, this.lastForecast);
          break;
        }
        case 'running-orders': {
          const data = await this.client.runningOrders(this.state.asOf);
          renderRunningOrders(this.viewContainer, data);
          break;
        }
      }
      this.clearError();
    } catch (error) {
      this.showError(error);
    }
  }

  async submitForecast(request: ForecastRequestDto): Promise<void> {
    this.state.asOf = request.as_of;
    this.state.horizonWeeks = request.horizon_weeks;
    this.state.seed = request.seed;
    this.state.selectedTypes = request.article_types;
    try {
      this.lastForecast = await this.client.forecast(request);
      renderForecastResult(this.viewContainer, this.lastForecast);
      this.clearError();
    } catch (error) {
      this.showError(error);
    }
  }
}
