use thiserror::Error;

/// Errors produced by the solvers and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),

    #[error("solvability condition violated: <f, theta0'> = {inner:.3e}")]
    Solvability { inner: f64 },

    #[error("no velocity root in [{lo}, {hi}] for F = {forcing}, beta = {beta}")]
    RootNotFound {
        lo: f64,
        hi: f64,
        forcing: f64,
        beta: f64,
    },

    #[error("velocity equation has {} roots: {roots:?}", roots.len())]
    MultipleRoots { roots: Vec<f64> },

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("curve self-intersects at step {step}")]
    SelfIntersection { step: usize },

    #[error("level set has {count} components, expected exactly one")]
    Components { count: usize },

    #[error("non-finite values at step {step}")]
    Divergence { step: usize },

    #[error("no rho = 1/2 crossing: front lost")]
    FrontLost,

    #[error("under-resolved grid: {0}")]
    Resolution(String),

    #[error("singular tridiagonal system (pivot {pivot:.3e} at row {row})")]
    Singular { row: usize, pivot: f64 },

    #[error("expansion order {order}, time node {node}: {source}")]
    Expansion {
        order: usize,
        node: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("integration aborted at t = {t}: {source}")]
    Integration {
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_order(self, order: usize, node: usize) -> Self {
        Error::Expansion {
            order,
            node,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_time(self, t: f64) -> Self {
        Error::Integration {
            t,
            source: Box::new(self),
        }
    }
}
