/** Typed client for the workcast API. Concurrent requests with the same
 * method + URL + body share one in-flight promise. */

import type {
  ArticleTypesDto,
  EvalReportDto,
  ForecastDto,
  ForecastRequestDto,
  ProcessGraphDto,
  RunningOrdersDto,
  WorkloadDto,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`API error ${status}: ${detail}`);
  }
}

export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();

  constructor(private readonly baseUrl: string = '') {}

  private request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const key = `${method} ${path} ${body === undefined ? '' : JSON.stringify(body)}`;
    const existing = this.inflight.get(key);
    if (existing) {
      return existing as Promise<T>;
    }
    const promise = (async () => {
      const response = await fetch(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { 'content-type': 'application/json' },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      const text = await response.text();
      if (!response.ok) {
        let detail = text;
        try {
          detail = JSON.stringify(JSON.parse(text).detail);
        } catch {
          /* non-JSON error body, keep the raw text */
        }
        throw new ApiError(response.status, detail);
      }
      return JSON.parse(text) as T;
    })().finally(() => this.inflight.delete(key));
    this.inflight.set(key, promise);
    return promise;
  }

  articleTypes(): Promise<ArticleTypesDto> {
    return this.request('GET', '/api/article-types');
  }

  workload(
    articleType: string,
    kind: 'demand' | 'supply',
    step: 'day' | 'week',
    businessUnit?: string,
  ): Promise<WorkloadDto> {
    const params = new URLSearchParams({ article_type: articleType, kind, step });
    if (businessUnit) {
      params.set('unit', businessUnit);
    }
    return this.request('GET', `/api/workload?${params}`);
  }

  processGraph(threshold: number): Promise<ProcessGraphDto> {
    return this.request('GET', `/api/process-graph?threshold=${threshold}`);
  }

  forecast(request: ForecastRequestDto): Promise<ForecastDto> {
    return this.request('POST', '/api/forecast', request);
  }

  runningOrders(asOf: string): Promise<RunningOrdersDto> {
    return this.request('GET', `/api/running-orders?as_of=${asOf}`);
  }

  evalReport(): Promise<EvalReportDto> {
    return this.request('GET', '/api/eval');
  }
}
