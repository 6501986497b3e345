use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cubic solver consistency failure: residual {residual:e} exceeds {limit:e}")]
    RootResidual { residual: f64, limit: f64 },

    #[error("characteristic roots nearly coincide (gap {gap:e} at r = {r}); no confluent formula available")]
    DegenerateRoots { r: f64, gap: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integrand is not finite at r = {r}; a multiplier with an r^-2 singularity was probably evaluated in the naive Lagrange-sum mode")]
    NonFiniteIntegrand { r: f64 },

    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("integrator step underflow at t = {t} (r = {r}, epsilon = {epsilon}): dt fell below {dt_min:e}")]
    StepUnderflow {
        t: f64,
        r: f64,
        epsilon: f64,
        dt_min: f64,
    },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("rate fit rejected: {0}")]
    RateFit(String),
}
