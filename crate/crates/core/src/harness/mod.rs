//! Config-driven experiment runs with CSV, JSON and SVG reports.

mod config;
mod experiments;
mod report;
mod svg;

pub use config::{
    load_config, parse_config, Bracket, CarlesonSpec, CurveSpec, DomainSpec, ExperimentConfig, ExperimentKind,
    OutputSpec, ProbeSpec, ReportFormat, SewingSpec, Sweep, TransformSpec,
};
pub use experiments::{
    exterior_probe, run, sewing_exponent_closed_form, test_function_norm_lower_bound, RunOutput, ENERGY_BOUND_SLACK,
};
pub use report::{emit_report, from_json, to_csv, to_json, Cell, Flag, FlagSummary, ReportRow, Status};
pub use svg::plot_column;
