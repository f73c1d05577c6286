use thiserror::Error;

use crate::model::{NodeId, PairId, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("power class `{0}` is not in the power profile")]
    UnknownPowerClass(String),

    #[error("no path from node {ingress} to node {egress}")]
    NoPath { ingress: NodeId, egress: NodeId },

    #[error("invalid path request: {0}")]
    InvalidRequest(String),

    #[error("pair {0} has a single remaining path; refusing to exclude it")]
    LastPath(PairId),

    #[error("search needs {needed} objective evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("no feasible split assignment exists on the search grid")]
    NoFeasiblePoint,

    #[error("descent start point violates the problem constraints")]
    InfeasibleStart,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("scenario failed validation:\n{}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}
