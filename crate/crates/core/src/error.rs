use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("{what} did not converge: error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    NonConvergence {
        what: &'static str,
        estimate: f64,
        tolerance: f64,
    },

    #[error("no sign change of the residual on [{lo}, {hi}] (f(lo) = {f_lo:.3e}, f(hi) = {f_hi:.3e})")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("residual changes sign {} times on the bracket (crossings near {crossings:?})", crossings.len())]
    MultipleRoots { crossings: Vec<f64> },

    #[error("root solver exhausted {iterations} iterations (bracket width {width:.3e})")]
    MaxIterations { iterations: usize, width: f64 },

    #[error("{what}: independent evaluations disagree by {diff:.3e} (limit {limit:.1e})")]
    Disagreement { what: &'static str, diff: f64, limit: f64 },
}

pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain { func, msg: msg.into() }
}
