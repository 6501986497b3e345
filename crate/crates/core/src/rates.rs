//! Power-law fits of norm sweeps and the dimension classification of the
//! large-time behaviour.

use std::fmt;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::kernels::{EvalMode, KernelSet};
use crate::presets::{preset_data, DataTriple, Preset};
use crate::profiles::Profiles;
use crate::quadrature::{l2_norms, NormOptions, NormResult, Zone};

/// `log norm ≈ intercept + exponent · log t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Largest absolute log-residual of the fit.
    pub max_residual: f64,
    /// Standard error of the exponent.
    pub std_err: f64,
    pub t_range: (f64, f64),
}

impl RateFit {
    /// `exponent ± 2·std_err`.
    pub fn confidence_interval(&self) -> (f64, f64) {
        (self.exponent - 2.0 * self.std_err, self.exponent + 2.0 * self.std_err)
    }

    /// Fitted norm at `t`.
    pub fn predict(&self, t: f64) -> f64 {
        (self.intercept + self.exponent * t.ln()).exp()
    }
}

/// Least-squares slope of `log norm` against `log t`.
pub fn fit_rate(samples: &[(f64, f64)]) -> Result<RateFit> {
    if samples.len() < 4 {
        return Err(Error::RateFit(format!("need ≥ 4 samples, got {}", samples.len())));
    }
    if let Some(&(t, v)) = samples.iter().find(|&&(t, v)| !(v > 0.0) || !v.is_finite() || !(t > 0.0)) {
        return Err(Error::RateFit(format!("nonpositive sample ({t}, {v})")));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::RateFit("abscissae must be strictly increasing".into()));
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - intercept - exponent * x).collect();
    let max_residual = residuals.iter().fold(0.0, |m: f64, r| m.max(r.abs()));
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let std_err = (sse / (n - 2.0) / sxx).sqrt();
    Ok(RateFit {
        exponent,
        intercept,
        max_residual,
        std_err,
        t_range: (samples[0].0, samples[samples.len() - 1].0),
    })
}

/// `t = 2^k`, `k = 10..=24`.
pub fn dyadic_grid() -> Vec<f64> {
    (10..=24).map(|k| 2f64.powi(k)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `u`.
    Displacement,
    /// `θ`.
    Temperature,
}

/// Norm of the solution and of its profile error on the inner zone.
pub struct Sweeper {
    kernels: KernelSet,
    profiles: Profiles,
    rel_tol: f64,
}

impl Sweeper {
    pub fn plate() -> Result<Self> {
        let kernels = KernelSet::plate(EvalMode::Stabilized)?;
        let profiles = Profiles::new(*kernels.roots());
        Ok(Sweeper { kernels, profiles, rel_tol: NormOptions::new(Zone::Inner).rel_tol })
    }

    /// Relative tolerance of the squared-norm quadrature.
    pub fn with_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn kernels(&self) -> &KernelSet {
        &self.kernels
    }

    fn options(&self) -> NormOptions {
        let r = self.kernels.roots();
        NormOptions {
            phase_rate: Some(r.a2),
            decay_rate: Some(r.a1),
            rel_tol: self.rel_tol,
            ..NormOptions::new(Zone::Inner)
        }
    }

    /// `[‖χ_int û‖, ‖χ_int θ̂‖]` at `t`.
    pub fn solution_norms(&self, n: u32, data: &DataTriple, t: f64) -> Result<[NormResult; 2]> {
        let field = |t: f64, r: f64| {
            let (u, th) = self.kernels.solution_hat(t, r, data.at(r));
            [u, th]
        };
        l2_norms(n, &field, t, &self.options())
    }

    /// `[‖χ_int(û − Ĵ₀P_{Ψ₀} − Ĵ₁P_{Ψ₁})‖, ‖χ_int(θ̂ − Ĵ₂P_{Ψ₀} − Ĵ₃P_{Ψ₁})‖]`.
    pub fn profile_error_norms(&self, n: u32, data: &DataTriple, t: f64) -> Result<[NormResult; 2]> {
        let psi = self.profiles.combined_data(&data.u1, &data.theta0);
        let (p0, p1) = (psi.p_psi0(), psi.p_psi1());
        let pr = &self.profiles;
        if t < 0.0 {
            return Err(Error::InvalidParameter(format!("t = {t} must be ≥ 0")));
        }
        let field = |t: f64, r: f64| {
            let (u, th) = self.kernels.solution_hat(t, r, data.at(r));
            let j = |k| pr.eval_j(k, t, r).unwrap_or(f64::NAN);
            let pu = j(0) * p0 + j(1) * p1;
            let pt = j(2) * p0 + j(3) * p1;
            [u - Complex::real(pu), th - Complex::real(pt)]
        };
        l2_norms(n, &field, t, &self.options())
    }

    /// Fits of the solution norm over `grid`, `[u, θ]`.
    pub fn solution_rates(&self, n: u32, data: &DataTriple, grid: &[f64]) -> Result<[RateFit; 2]> {
        self.fit_both(grid, |t| self.solution_norms(n, data, t))
    }

    /// Fits of the profile-error norm over `grid`, `[u, θ]`.
    pub fn profile_error_rates(&self, n: u32, data: &DataTriple, grid: &[f64]) -> Result<[RateFit; 2]> {
        self.fit_both(grid, |t| self.profile_error_norms(n, data, t))
    }

    fn fit_both(&self, grid: &[f64], norms: impl Fn(f64) -> Result<[NormResult; 2]>) -> Result<[RateFit; 2]> {
        let mut u = Vec::with_capacity(grid.len());
        let mut th = Vec::with_capacity(grid.len());
        for &t in grid {
            let [a, b] = norms(t)?;
            u.push((t, a.norm));
            th.push((t, b.norm));
        }
        Ok([fit_rate(&u)?, fit_rate(&th)?])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Growth,
    Bounded,
    Decay,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Growth => "growth",
            Regime::Bounded => "bounded",
            Regime::Decay => "decay",
        })
    }
}

/// Exponents within this band around zero count as bounded.
pub const BOUNDED_BAND: f64 = 0.05;

impl Regime {
    pub fn from_exponent(e: f64) -> Regime {
        if e > BOUNDED_BAND {
            Regime::Growth
        } else if e < -BOUNDED_BAND {
            Regime::Decay
        } else {
            Regime::Bounded
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Classification {
    pub n: u32,
    pub regime: Regime,
    /// `1 − n/4`.
    pub theoretical_exponent: f64,
    pub fit: RateFit,
    /// Fitted and theoretical exponents differ by more than 0.05.
    pub mismatch: bool,
}

/// Measured large-time behaviour of `‖u(t)‖` in dimension `n` for the
/// constant-profile preset.
pub fn classify(n: u32) -> Result<Classification> {
    classify_with(&Sweeper::plate()?, n)
}

pub fn classify_with(sweeper: &Sweeper, n: u32) -> Result<Classification> {
    if n < 1 {
        return Err(Error::InvalidParameter("dimension must be ≥ 1".into()));
    }
    let data = preset_data(Preset::ConstantProfile);
    let [fit, _] = sweeper.solution_rates(n, &data, &dyadic_grid())?;
    let theoretical_exponent = 1.0 - n as f64 / 4.0;
    Ok(Classification {
        n,
        regime: Regime::from_exponent(fit.exponent),
        theoretical_exponent,
        fit,
        mismatch: (fit.exponent - theoretical_exponent).abs() > 0.05,
    })
}

/// Fitted exponent of `‖u − J₀P_{Ψ₀} − J₁P_{Ψ₁}‖` (or of the θ analogue)
/// over the dyadic grid.
pub fn profile_error_rate(n: u32, data: &DataTriple, branch: Branch) -> Result<RateFit> {
    let sweeper = Sweeper::plate()?;
    let [u, th] = sweeper.profile_error_rates(n, data, &dyadic_grid())?;
    Ok(match branch {
        Branch::Displacement => u,
        Branch::Temperature => th,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let s: Vec<(f64, f64)> = (0..8).map(|k| {
            let t = 10f64.powi(k);
            (t, 3.0 * t.powf(-0.75))
        }).collect();
        let fit = fit_rate(&s).unwrap();
        assert!((fit.exponent + 0.75).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-10);
        assert!(fit.max_residual < 1e-10);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(fit_rate(&[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)]).is_err());
        assert!(fit_rate(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0), (4.0, 1.0)]).is_err());
        assert!(fit_rate(&[(1.0, 1.0), (1.0, 2.0), (3.0, 1.0), (4.0, 1.0)]).is_err());
    }

    #[test]
    fn regimes() {
        assert_eq!(Regime::from_exponent(0.25), Regime::Growth);
        assert_eq!(Regime::from_exponent(0.01), Regime::Bounded);
        assert_eq!(Regime::from_exponent(-0.25), Regime::Decay);
    }

    #[test]
    fn two_dimensional_rates() {
        let sweeper = Sweeper::plate().unwrap();
        let data = preset_data(Preset::ConstantProfile);
        let [u, th] = sweeper.solution_rates(2, &data, &dyadic_grid()).unwrap();
        assert!((u.exponent - 0.5).abs() < 0.02, "{u:?}");
        assert!((th.exponent + 0.5).abs() < 0.02, "{th:?}");
    }

    #[test]
    fn constant_profile_error_comes_from_u0_slot() {
        let sweeper = Sweeper::plate().unwrap();
        let data = preset_data(Preset::ConstantProfile);
        let [u, _] = sweeper.profile_error_rates(3, &data, &dyadic_grid()).unwrap();
        assert!((u.exponent + 0.75).abs() < 0.05, "{u:?}");
    }
}
