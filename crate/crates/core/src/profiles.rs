//! Large-time profiles `Ĵ₀ … Ĵ₃`, the combined data `Ψ̂₀, Ψ̂₁`, and the
//! structurally damped plate `û⁰` with its second-order corrector `û^{I,1}`.
//!
//! With `s = r²t` and `D = (a0 − a1)² + a2²`,
//!
//! ```text
//! Ĵ₀ = (e^{−a0 s} − cos(a2 s) e^{−a1 s}) / (r² D)
//! Ĵ₁ = sin(a2 s) e^{−a1 s} / (a2 r² D)
//! Ĵ₂ = (r⁻²∂t² + r²) Ĵ₀,   Ĵ₃ = (r⁻²∂t² + r²) Ĵ₁.
//! ```

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::kernels::sinc;
use crate::quadrature::{integrate, RadialData};
use crate::roots::{solve_characteristic_cubic, CharRoots};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// `Ψ̂₀ = 2a1 û₁ + θ̂₀` and `Ψ̂₁ = β û₁ + δ θ̂₀`.
#[derive(Clone, Debug)]
pub struct CombinedData {
    pub psi0: RadialData,
    pub psi1: RadialData,
}

impl CombinedData {
    pub fn p_psi0(&self) -> f64 {
        self.psi0.mean
    }

    pub fn p_psi1(&self) -> f64 {
        self.psi1.mean
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Profiles {
    roots: CharRoots,
}

impl Profiles {
    pub fn new(roots: CharRoots) -> Self {
        Profiles { roots }
    }

    pub fn plate() -> Result<Self> {
        Ok(Profiles::new(solve_characteristic_cubic()?))
    }

    pub fn roots(&self) -> &CharRoots {
        &self.roots
    }

    /// `g₀(s)/s` with `g₀ = r² Ĵ₀`, written without the `0/0` at `s = 0`.
    fn g0_over_s(&self, s: f64) -> f64 {
        let r = &self.roots;
        let half = 0.5 * r.a2 * s;
        let sin_sq = r.a2 * half.sin() * sinc(half);
        let x = r.delta() * s;
        let expm1_over_s = if x.abs() < 1e-4 {
            -r.delta() * (1.0 - x / 2.0 + x * x / 6.0)
        } else {
            (-x).exp_m1() / s
        };
        (-r.a1 * s).exp() * (sin_sq + expm1_over_s) / r.denom()
    }

    fn g1_over_s(&self, s: f64) -> f64 {
        let r = &self.roots;
        sinc(r.a2 * s) * (-r.a1 * s).exp() / r.denom()
    }

    fn g0_lift(&self, s: f64) -> f64 {
        let r = &self.roots;
        let (sn, cs) = (r.a2 * s).sin_cos();
        let e0 = (-r.a0 * s).exp();
        let e1 = (-r.a1 * s).exp();
        let m = r.a1 * r.a1 - r.a2 * r.a2;
        let g0 = e0 - cs * e1;
        let g0pp = r.a0 * r.a0 * e0 - e1 * (m * cs + 2.0 * r.a1 * r.a2 * sn);
        (g0pp + g0) / r.denom()
    }

    fn g1_lift(&self, s: f64) -> f64 {
        let r = &self.roots;
        let (sn, cs) = (r.a2 * s).sin_cos();
        let e1 = (-r.a1 * s).exp();
        let m = r.a1 * r.a1 - r.a2 * r.a2;
        let g1 = sn * e1;
        let g1pp = e1 * (m * sn - 2.0 * r.a1 * r.a2 * cs);
        (g1pp + g1) / (r.a2 * r.denom())
    }

    /// `Ĵ_j(t, r)` for `j ∈ 0..=3`.
    pub fn eval_j(&self, j: usize, t: f64, r: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!("t = {t} must be ≥ 0")));
        }
        let s = r * r * t;
        match j {
            0 => Ok(t * self.g0_over_s(s)),
            1 => Ok(t * self.g1_over_s(s)),
            2 => Ok(self.g0_lift(s)),
            3 => Ok(self.g1_lift(s)),
            _ => Err(Error::InvalidParameter(format!("profile index {j} not in 0..=3"))),
        }
    }

    pub fn combined_data(&self, u1: &RadialData, theta0: &RadialData) -> CombinedData {
        let r = &self.roots;
        CombinedData {
            psi0: RadialData::combine(2.0 * r.a1, u1, 1.0, theta0),
            psi1: RadialData::combine(r.beta(), u1, r.delta(), theta0),
        }
    }
}

/// `(û⁰, û⁰_t)` of `û_tt + r²û_t + r⁴û = 0` with data `(û₀, û₁)`.
pub fn eval_u0_hat(t: f64, r: f64, u0: Complex, u1: Complex) -> (Complex, Complex) {
    let r2 = r * r;
    let s = r2 * t;
    let omega = 0.5 * SQRT3 * s;
    let (sn, cs) = omega.sin_cos();
    let e = (-0.5 * s).exp();
    let a = (sn / SQRT3 + cs) * e;
    let c = (cs - sn / SQRT3) * e;
    let u = u0 * a + u1 * (t * sinc(omega) * e);
    let ut = u0 * (-2.0 / SQRT3 * r2 * sn * e) + u1 * c;
    (u, ut)
}

/// Duhamel weights of `û^{I,1}` at `s = r²t`:
///
/// ```text
/// û^{I,1}   = −(2/√3) [ ia·û₀ + t·ib_over_s·û₁ ]
/// û^{I,1}_t = −(2/√3) [ r²·ja·û₀ + jb·û₁ ]
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DuhamelWeights {
    pub ia: f64,
    pub ib_over_s: f64,
    pub ja: f64,
    pub jb: f64,
}

/// Absolute tolerance of the Duhamel quadrature.
pub const DUHAMEL_TOL: f64 = 1e-11;

/// Evaluates the Duhamel integrals by adaptive Gauss–Kronrod quadrature over
/// `σ = s·u`, `u ∈ [0, 1]`.
pub fn duhamel_weights(s: f64) -> Result<DuhamelWeights> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!("s = {s} must be finite and ≥ 0")));
    }
    if s == 0.0 {
        return Ok(DuhamelWeights {
            ia: 0.0,
            ib_over_s: 0.0,
            ja: 0.0,
            jb: 0.0,
        });
    }
    // The envelopes e^{−(s−σ)/2} e^{−σ/2} combine to e^{−s/2}.
    let env = (-0.5 * s).exp();
    let h = 0.5 * SQRT3;
    let green = |x: f64| (h * x).sin();
    let green_dt = |x: f64| {
        let (sn, cs) = (h * x).sin_cos();
        h * cs - 0.5 * sn
    };
    let a = |x: f64| {
        let (sn, cs) = (h * x).sin_cos();
        sn / SQRT3 + cs
    };
    let c = |x: f64| {
        let (sn, cs) = (h * x).sin_cos();
        cs - sn / SQRT3
    };
    let panels = (s / 4.0).ceil().max(1.0) as usize;
    let tol = DUHAMEL_TOL / s.max(1.0);
    let run = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
        let mut g = |u: f64| f(u);
        let out = integrate(&mut g, 0.0, 1.0, panels, tol, 0.0);
        if !out.converged {
            return Err(Error::QuadratureNonConvergence {
                achieved: out.abs_err,
                requested: tol,
            });
        }
        Ok(out.value)
    };
    let ia = run(&|u| green(s * (1.0 - u)) * c(s * u))?;
    let ib = run(&|u| green(s * (1.0 - u)) * a(s * u))?;
    let ja = run(&|u| green_dt(s * (1.0 - u)) * c(s * u))?;
    let jb = run(&|u| green_dt(s * (1.0 - u)) * a(s * u))?;
    Ok(DuhamelWeights {
        ia: s * ia * env,
        ib_over_s: ib * env,
        ja: s * ja * env,
        jb: s * jb * env,
    })
}

impl DuhamelWeights {
    pub fn value(&self, t: f64, u0: Complex, u1: Complex) -> Complex {
        (u0 * self.ia + u1 * (t * self.ib_over_s)) * (-2.0 / SQRT3)
    }

    pub fn time_derivative(&self, r: f64, u0: Complex, u1: Complex) -> Complex {
        (u0 * (r * r * self.ja) + u1 * self.jb) * (-2.0 / SQRT3)
    }
}

/// Second-order corrector `û^{I,1}(t, r)`.
pub fn eval_ui1_hat(t: f64, r: f64, u0: Complex, u1: Complex) -> Result<Complex> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be ≥ 0")));
    }
    Ok(duhamel_weights(r * r * t)?.value(t, u0, u1))
}

/// `∂t û^{I,1}(t, r)`.
pub fn eval_ui1_hat_dt(t: f64, r: f64, u0: Complex, u1: Complex) -> Result<Complex> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be ≥ 0")));
    }
    Ok(duhamel_weights(r * r * t)?.time_derivative(r, u0, u1))
}
