use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("infeasible cluster cap: {k} clusters of at most {cap} vertices cannot hold {n} vertices")]
    InfeasibleCap { n: usize, k: usize, cap: usize },

    #[error("eigensolver did not converge (residual {residual:e} > tolerance {tol:e})")]
    NoConvergence { residual: f64, tol: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
