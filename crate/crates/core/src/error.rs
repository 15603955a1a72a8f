use alloc::vec::Vec;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("unsupported Bessel order {0}, only 0, 1 and 2 are implemented")]
    UnsupportedOrder(u32),

    #[error("Lévy measure at the origin is singular")]
    Singularity,

    #[error("jump integral does not converge; partial sums over doubling panels: {partial_sums:?}")]
    DivergentTail { partial_sums: Vec<f64> },

    #[error("quadrature did not reach tolerance: estimate {estimate}, error {error}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("grid too coarse: dx = {dx}, the characteristic function needs dx <= {required_dx}")]
    GridTooCoarse { dx: f64, required_dx: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("density ringing reached {min:e}, below the -1e-10 clipping floor")]
    Ringing { min: f64 },

    #[error("field does not fit on the grid: boundary amplitude {boundary_amplitude:e}")]
    GridSupport { boundary_amplitude: f64 },

    #[error("samples reach x = {x} where the reference grid has no support")]
    SampleOutsideGrid { x: f64 },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("degenerate root at x = {x}: g'(x) = {derivative:e}")]
    DegenerateRoot { x: f64, derivative: f64 },

    #[error("time step {dt} exceeds the explicit stability limit {max_dt}")]
    Stability { dt: f64, max_dt: f64 },

    #[error("branch {index} is not a real positive root (spectrum has {available} usable branches)")]
    Branch { index: usize, available: usize },

    #[error("Euclidean denominator vanishes at k = {k}")]
    NonPositiveDenominator { k: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn ensure_positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}
