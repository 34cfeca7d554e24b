//! Scenario files, identity suites, reports and the transport/flow commands behind the CLI.

mod commands;
mod report;
mod scenario;
mod suites;

pub use commands::{cmd_flow, cmd_transport, FlowRow, FlowTable, TransportReport};
pub use report::{CheckKind, CheckRecord, Report, Settings, Status};
pub use scenario::{
    load_scenario, parse_scenario, rescale_interval_unit, CheckSpec, FrameSpec, Perturbation, Scenario, ScenarioError,
};
pub use suites::{run_suite, RunOptions, SUITES};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("scenario error at {0}")]
    Scenario(#[from] ScenarioError),
    #[error("unknown suite '{0}' (known: algebra, lie-flow, connection, forms, bivector, rescale)")]
    UnknownSuite(String),
    #[error("no suites selected")]
    NoSuites,
    #[error("unknown curve '{0}'")]
    UnknownCurve(String),
    #[error("unknown field '{0}'")]
    UnknownField(String),
    #[error("unknown frame '{0}'")]
    UnknownFrame(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] crate::Error),
}
