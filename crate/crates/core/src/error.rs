use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

/// `(provider_id, consumer_id)` of an edge.
pub type EdgeKey = (String, String);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("transaction fee is not set")]
    MissingFee,
    #[error("transaction infeasible: total cost exceeds total value by {deficit}")]
    Infeasible { deficit: f64 },
    #[error("infeasible edges: {}", join_edges(.0))]
    InfeasibleEdges(Vec<EdgeKey>),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("no sign change on [{low}, {high}] (f(low) = {f_low}, f(high) = {f_high})")]
    NoBracket {
        low: f64,
        high: f64,
        f_low: f64,
        f_high: f64,
    },
    #[error("no convergence after {iterations} iterations (bracket width {width})")]
    NonConvergence { iterations: usize, width: f64 },
    #[error("inelastic supply at X = {at}: n'(X) = {slope}")]
    InelasticSupply { at: f64, slope: f64 },
    #[error("supply response is negative or decreasing near X = {at}")]
    InvalidSupply { at: f64 },
    #[error("case undecidable: dV = {delta_v}, dT = {delta_t}")]
    AmbiguousCase { delta_v: f64, delta_t: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("model evaluation failed at X = {at}")]
    EvaluationFailure { at: f64 },
}

impl Error {
    /// Root-finding and model-evaluation failures, as opposed to infeasible
    /// economics or bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoBracket { .. }
                | Error::NonConvergence { .. }
                | Error::InelasticSupply { .. }
                | Error::EvaluationFailure { .. }
        )
    }
}

fn join_edges(edges: &[EdgeKey]) -> String {
    let mut out = String::new();
    for (i, (p, c)) in edges.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{p}->{c}");
    }
    out
}

pub type Result<T> = core::result::Result<T, Error>;
