//! Fourier-side solution machinery for the linear thermoelastic plate
//! equations
//!
//! ```text
//! u_tt + Δ²u + Δθ = 0,    ε θ_t − Δθ − Δu_t = 0,
//! ```
//!
//! together with the tools needed to verify their large-time behaviour and
//! the ε → 0 singular limit numerically: closed-form kernels, asymptotic
//! profiles, radial L² quadrature, an independent RK4 oracle and power-law
//! fitting.
//!
//! The Fourier transform convention is `f̂(ξ) = ∫ e^{−ix·ξ} f(x) dx`, so the
//! mean of a datum is `P_f = f̂(0)`. Growth and decay exponents do not depend
//! on this choice; absolute constants do.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex;
pub mod error;
pub mod kernels;
pub mod oracle;
pub mod presets;
pub mod profiles;
pub mod quadrature;
pub mod rates;
pub mod reduction;
pub mod roots;
pub mod singular_limit;

pub use complex::Complex;
pub use error::{Error, Result};
pub use kernels::{EvalMode, Kernel, KernelSet, SolutionMultipliers};
pub use presets::{preset_data, Preset};
pub use quadrature::{NormResult, NormTask, RadialData, Zone};
pub use rates::RateFit;
pub use roots::{characteristic_roots_general, solve_characteristic_cubic, CharRoots};

/// Inner-zone radius ε₀.
pub const EPS0: f64 = 0.1;
/// Outer-zone radius N₀.
pub const N0: f64 = 10.0;
