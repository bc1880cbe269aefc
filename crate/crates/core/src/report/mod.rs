//! Operator spec files, the end-to-end pipeline, the demo catalog and JSON reports.

mod demos;
mod pipeline;
mod spec;

pub use demos::{demo, demo_spec, Demo, DEMOS, DEMO_BLOCKS, DEMO_N};
pub use pipeline::{
    classify_spec, run_pipeline, run_pipeline_full, select_path, solve_q, ClassificationReport, Generator,
    ModelSummary, PipelineRun, QSummary, ReportFile, WeightSummary, REPORTED_WEIGHTS,
};
pub use spec::{emit_spec, parse_spec, OperatorSpec, OperatorSpecFile, Truncation, MAX_ORDER, SCHEMA_VERSION};

#[cfg(test)]
mod tests;
