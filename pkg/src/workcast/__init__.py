"""workcast: reconstruct a company's historical workload from business
process event logs and forecast it — order quantities with a recurrent
regressor, concrete activity plans by replaying historical trace
variants, and running-order completions by edit-distance alignment."""

from . import errors
from .eventlog import (
    EventLog,
    EventRecord,
    LogIssue,
    ProcessGraph,
    Trace,
    build_process_graph,
    export_graph,
    parse_log,
    validate_log,
    write_log_csv,
)
from .forecast import (
    FeatureRow,
    ForecastModel,
    TrainConfig,
    build_features,
    forward,
    gradients,
    gru_step,
    load_model,
    predict_horizon,
    save_model,
    train,
)
from .pipeline import (
    EvalConfig,
    EvalReport,
    ForecastRequest,
    WorkloadForecast,
    evaluate,
    mape,
    rmse,
    run_pipeline,
    weekly_demand,
)
from .replay import (
    PlannedActivity,
    RunningOrder,
    TraceVariant,
    VariantCatalog,
    build_variant_catalog,
    complete_running_order,
    frequency_filter,
    levenshtein,
    sample_new_order_activities,
)
from .synth import SyntheticLogSpec, bundled_spec, generate_synthetic_log
from .workload import (
    TimeSeries,
    WorkloadSeries,
    centered_exp_smooth,
    demand_series,
    first_difference,
    resample_weekly,
    supply_series,
    triangular_smooth,
)

__version__ = "0.1.0"
