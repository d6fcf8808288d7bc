/** Payload shapes of the workcast HTTP API (mirrors the server's
 * published JSON schemas). The dashboard renders these verbatim and
 * performs no domain computation of its own. */

export interface TimeSeriesDto {
  start_date: string;
  step: 'day' | 'week';
  values: number[];
  metadata?: Record<string, boolean>;
}

export interface WorkloadDto {
  article_type: string;
  kind: 'demand' | 'supply';
  unit: 'positions' | 'hours';
  business_unit: string | null;
  series: TimeSeriesDto;
}

export interface GraphNodeDto {
  activity: string;
  frequency: number;
}

export interface GraphEdgeDto {
  source: string;
  target: string;
  frequency: number;
}

export interface ProcessGraphDto {
  threshold: number;
  nodes: GraphNodeDto[];
  edges: GraphEdgeDto[];
  dot: string;
}

export interface ProvenanceDto {
  kind: 'new_order' | 'running_completion';
  source: string;
}

export interface PlannedActivityDto {
  activity: string;
  business_unit: string;
  planned_date: string;
  duration_hours: number;
  offset_days: number;
  provenance: ProvenanceDto;
}

export interface ForecastDto {
  id: string;
  as_of: string;
  horizon_weeks: number;
  seed: number;
  first_week: string;
  order_quantities: Record<string, number[]>;
  new_order_activities: PlannedActivityDto[];
  running_completions: PlannedActivityDto[];
  aggregate: Record<string, TimeSeriesDto>;
}

export interface ForecastRequestDto {
  as_of: string;
  horizon_weeks: number;
  article_types: string[];
  seed: number;
}

export interface RunningOrderDto {
  case_id: string;
  article_type: string;
  executed_signature: string[];
  completions: PlannedActivityDto[];
}

export interface RunningOrdersDto {
  as_of: string;
  running_orders: RunningOrderDto[];
}

export interface ArticleTypesDto {
  article_types: string[];
}

export interface TypeEvalDto {
  article_type: string;
  one_step_rmse: number | null;
  one_step_mape: number | null;
  one_step_mape_skipped: number;
  horizon_weeks: number;
  horizon_mape: number | null;
  horizon_mape_skipped: number;
}

export interface EvalReportDto {
  per_type: TypeEvalDto[];
  skipped_types: [string, string][];
  macro_rmse: number | null;
  macro_mape: number | null;
}
