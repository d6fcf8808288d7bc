/** Dashboard view state: which view is active and the filters every
 * view shares. All renders are pure functions of (API data, state). */

export type ViewName =
  | 'overview'
  | 'workload-timeline'
  | 'process-map'
  | 'orders-forecast'
  | 'activities'
  | 'running-orders';

export interface ViewState {
  activeView: ViewName;
  articleTypes: string[];
  selectedTypes: string[];
  dateFrom: string | null;
  dateTo: string | null;
  asOf: string;
  horizonWeeks: number;
  seed: number;
  graphThreshold: number;
}

export function defaultState(today: string): ViewState {
  return {
    activeView: 'overview',
    articleTypes: [],
    selectedTypes: [],
    dateFrom: null,
    dateTo: null,
    asOf: today,
    horizonWeeks: 8,
    seed: 0,
    graphThreshold: 0.8,
  };
}

export function validate(state: ViewState): string[] {
  const problems: string[] = [];
  if (state.horizonWeeks < 1) {
    problems.push('horizon must be at least 1 week');
  }
  if (state.dateFrom && state.dateTo && state.dateFrom > state.dateTo) {
    problems.push('date range is inverted');
  }
  if (state.graphThreshold < 0 || state.graphThreshold > 1) {
    problems.push('graph threshold must be within [0, 1]');
  }
  return problems;
}
