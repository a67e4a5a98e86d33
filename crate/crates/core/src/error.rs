use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("anisotropic spacing: hx = {hx}, hy = {hy}")]
    AnisotropicSpacing { hx: f64, hy: f64 },

    #[error("degenerate box: {0}")]
    DegenerateBox(String),

    #[error("coverage error: {0}")]
    Coverage(String),

    #[error("interface at {position} is not on a grid node (h = {h})")]
    NonNodalInterface { position: f64, h: f64 },

    #[error("under-resolved: {0}")]
    UnderResolved(String),

    #[error("solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("empty shape: no Shape cells on the grid")]
    EmptyShape,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("point {0} is outside the solution domain")]
    OutOfDomain(f64),

    #[error("grid too large for the brute-force oracle: {0} cells")]
    OracleTooLarge(usize),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
