use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite function value at x = {abscissa}")]
    NonFinite { abscissa: f64 },

    #[error("no sign change over bracket [{lo}, {hi}] (g(lo) = {g_lo:e}, g(hi) = {g_hi:e})")]
    Bracket { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("root finding did not converge after {iterations} iterations (last |g| = {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("depressed cubic y^3 + {p}y + {q} has three real roots")]
    AmbiguousCubic { p: f64, q: f64 },

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("requested acceleration exceeds the cubic well (radicand {radicand:e} < 0)")]
    TrapDepthExceeded { radicand: f64 },

    /// Objective trace is `(a1, objective)` pairs from the coefficient scan.
    #[error("no coefficient root in a1 in [{lo}, {hi}] for {objective}")]
    NoSolution { objective: String, lo: f64, hi: f64, scanned: Vec<(f64, f64)> },

    #[error("particle escaped the cubic well at s = {s} (|x - x0| = {excursion:e})")]
    Escape { s: f64, excursion: f64 },

    #[error("non-finite state at s = {s}")]
    Divergence { s: f64 },

    #[error("wave packets live on different grids")]
    GridMismatch,

    #[error("packet center {center} lies within {padding} of the grid edge [{x_min}, {x_max}]")]
    Padding { center: f64, padding: f64, x_min: f64, x_max: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by bad input rather than by the numerics.
    pub fn is_configuration(&self) -> bool {
        matches!(self, Error::Spec(_) | Error::Config(_) | Error::Padding { .. } | Error::Io(_))
    }
}
