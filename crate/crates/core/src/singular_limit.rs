//! The ε → 0 limit of the plate system:
//!
//! ```text
//! u_tt + Δ²u + Δθ = 0,   ε θ_t − Δθ − Δu_t = 0,
//! ```
//!
//! whose formal limit is the structurally damped plate
//! `u_tt + Δ²u − Δu_t = 0`. The first-order error is `U = u^ε − u⁰`, the
//! second-order one `U^s = u^ε − u⁰ − ε u^{I,1}`.
//!
//! `u^ε` comes from the oracle ([`FundamentalTable`]), `u⁰` and `u^{I,1}`
//! from closed forms and Duhamel quadrature.

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::oracle::FundamentalTable;
use crate::presets::DataTriple;
use crate::profiles::{duhamel_weights, eval_u0_hat};
use crate::quadrature::{l2_norms, NormOptions, Zone};
use crate::rates::{fit_rate, RateFit};
use crate::roots::characteristic_roots_general;

/// Per-frequency state of the error system, `V̂ = Û_t`, `Ŵ = V̂_t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonState {
    pub epsilon: f64,
    pub r: f64,
    pub u: Complex,
    pub v: Complex,
    pub w: Complex,
}

impl EpsilonState {
    pub fn new(epsilon: f64, r: f64, u: Complex, v: Complex, w: Complex) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(EpsilonState { epsilon, r, u, v, w })
    }

    /// State `(û, û_t, û_tt)` of the coupled system's displacement, with
    /// `û_tt = −r⁴û + r²θ̂`.
    pub fn from_coupled(epsilon: f64, r: f64, y: &[Complex; 3]) -> Result<Self> {
        let r2 = r * r;
        EpsilonState::new(epsilon, r, y[0], y[1], y[0] * (-r2 * r2) + y[2] * r2)
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    Ok(())
}

/// `Ê = ½(|½r²V + εW|² + ε/(1+ε)·r⁴|r²U + (1+ε)V|² + ¼r⁴|V|²
///      + (1−ε)/(2(1+ε))·r⁸|U|²)`.
pub fn energy(state: &EpsilonState) -> Result<f64> {
    let EpsilonState { epsilon: e, r, u, v, w } = *state;
    check_epsilon(e)?;
    let r2 = r * r;
    let r4 = r2 * r2;
    let a = (v * (0.5 * r2) + w * e).norm_sqr();
    let b = e / (1.0 + e) * r4 * (u * r2 + v * (1.0 + e)).norm_sqr();
    let c = 0.25 * r4 * v.norm_sqr();
    let d = (1.0 - e) / (2.0 * (1.0 + e)) * r4 * r4 * u.norm_sqr();
    Ok(0.5 * (a + b + c + d))
}

/// `dÊ/dt = −((1−ε)/2) r⁶|V|² − (ε/2) r²|W|²` for the homogeneous system.
pub fn energy_rate(state: &EpsilonState) -> Result<f64> {
    check_epsilon(state.epsilon)?;
    let (e, r2) = (state.epsilon, state.r * state.r);
    Ok(-0.5 * (1.0 - e) * r2 * r2 * r2 * state.v.norm_sqr() - 0.5 * e * r2 * state.w.norm_sqr())
}

/// Initial-layer heat profile `θ̂^{L,0} = e^{−r²t/ε} ĝ`, `g = u₁ + θ₀`.
pub fn heat_layer(t: f64, epsilon: f64, r: f64, g_hat: Complex) -> Result<Complex> {
    if !(t >= 0.0) || !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("need t ≥ 0, ε > 0; got ({t}, {epsilon})")));
    }
    Ok(g_hat * (-r * r * t / epsilon).exp())
}

/// 61 logarithmically spaced times in `[10⁻², 10³]`.
pub fn default_t_grid() -> Vec<f64> {
    log_grid(1e-2, 1e3, 61)
}

pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (count - 1) as f64))
        .collect()
}

/// `{10⁻¹, 10^{−1.5}, 10⁻², 10^{−2.5}, 10⁻³}`.
pub fn epsilon_grid() -> Vec<f64> {
    (0..5).map(|k| 10f64.powf(-1.0 - 0.5 * k as f64)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// `U = u^ε − u⁰`.
    First,
    /// `U^s = u^ε − u⁰ − ε u^{I,1}`.
    Second,
}

/// Supremum over the time grid of one norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupNorm {
    pub value: f64,
    pub t_at_sup: f64,
    /// Largest relative quadrature error estimate over the grid.
    pub achieved_tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorReport {
    pub epsilon: f64,
    pub n: u32,
    pub order: Order,
    /// `sup_t (‖Û_t‖ + ‖r²Û‖)`.
    pub energy: SupNorm,
    /// `sup_t ‖Û‖`, present when requested.
    pub l2: Option<SupNorm>,
}

/// Slowest decay rate in `s = r²t` of the ε-system, `min |Re λ|` over the
/// roots of `ελ³ + λ² + (1+ε)λ + 1`.
pub fn slow_decay_rate(epsilon: f64) -> Result<f64> {
    let roots = characteristic_roots_general(1.0 / epsilon, (1.0 + epsilon) / epsilon, 1.0 / epsilon)?;
    Ok(roots.iter().map(|z| -z.re).fold(f64::INFINITY, f64::min))
}

/// Evaluates the error fields of one ε on a time grid.
pub struct ErrorExperiment<'a> {
    pub epsilon: f64,
    pub n: u32,
    pub data: &'a DataTriple,
    pub order: Order,
    pub include_l2: bool,
    pub rel_tol: f64,
    /// Worker threads for the time grid; results do not depend on it.
    pub threads: usize,
}

impl<'a> ErrorExperiment<'a> {
    pub fn new(epsilon: f64, n: u32, data: &'a DataTriple, order: Order) -> Self {
        ErrorExperiment {
            epsilon,
            n,
            data,
            order,
            include_l2: false,
            rel_tol: 1e-6,
            threads: std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1),
        }
    }

    pub fn with_l2(mut self, on: bool) -> Self {
        self.include_l2 = on;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        if self.n < 1 {
            return Err(Error::InvalidParameter("dimension must be ≥ 1".into()));
        }
        if self.include_l2 {
            if self.n < 3 {
                return Err(Error::Hypothesis(format!(
                    "the displacement estimate needs n ≥ 3, got n = {}",
                    self.n
                )));
            }
            if self.data.u1.mean != 0.0 {
                return Err(Error::Hypothesis(format!(
                    "the displacement estimate needs P_u1 = 0, got {}",
                    self.data.u1.mean
                )));
            }
        }
        if self.order == Order::Second {
            let worst = (0..=400)
                .map(|k| {
                    let r = k as f64 * 0.025;
                    let (u1, th) = (self.data.u1.eval(r), self.data.theta0.eval(r));
                    (u1 + th).abs() / (1.0 + u1.abs())
                })
                .fold(0.0, f64::max);
            if worst > 1e-14 {
                return Err(Error::Hypothesis(format!(
                    "second-order error needs θ₀ ≡ −u₁ (deviation {worst:e})"
                )));
            }
        }
        Ok(())
    }

    /// Field `[Û_t, r²Û, Û]` at `(t, r)` from a fundamental table.
    fn fields(&self, table: &FundamentalTable, t: f64, r: f64) -> [Complex; 3] {
        let r2 = r * r;
        let s = r2 * t;
        let d = self.data.at(r);
        if r == 0.0 {
            return [Complex::ZERO; 3];
        }
        let phi = match table.eval(s) {
            Ok(p) => p,
            Err(_) => return [Complex::real(f64::NAN); 3],
        };
        let (u_eps, ut_eps) = if s > 0.0 {
            let ts = t / s;
            let u = d[0] * phi[0][0] + (d[1] * phi[0][1] + d[2] * phi[0][2]) * ts;
            let ut = d[0] * (r2 * phi[1][0]) + d[1] * phi[1][1] + d[2] * phi[1][2];
            (u, ut)
        } else {
            (d[0] + d[1] * t, d[1])
        };
        let (u0, u0t) = eval_u0_hat(t, r, d[0], d[1]);
        let (mut big_u, mut big_ut) = (u_eps - u0, ut_eps - u0t);
        if self.order == Order::Second {
            match duhamel_weights(s) {
                Ok(w) => {
                    big_u -= w.value(t, d[0], d[1]) * self.epsilon;
                    big_ut -= w.time_derivative(r, d[0], d[1]) * self.epsilon;
                }
                Err(_) => return [Complex::real(f64::NAN); 3],
            }
        }
        [big_ut, big_u * r2, big_u]
    }

    /// Per-time norms `(t, ‖Û_t‖, ‖r²Û‖, ‖Û‖, worst achieved tolerance)`.
    pub fn norms_on(&self, t_grid: &[f64]) -> Result<Vec<(f64, [f64; 3], f64)>> {
        self.validate()?;
        if t_grid.is_empty() {
            return Err(Error::InvalidParameter("empty time grid".into()));
        }
        let c = slow_decay_rate(self.epsilon)?.min(0.5) * 0.9;
        let s_max = 23.0 / c + 1.0;
        let table = FundamentalTable::build(self.epsilon, s_max)?;
        let opts = NormOptions {
            phase_rate: Some(0.5 * 3f64.sqrt()),
            decay_rate: Some(c),
            rel_tol: self.rel_tol,
            ..NormOptions::new(Zone::Full)
        };
        let eval_one = |t: f64| -> Result<(f64, [f64; 3], f64)> {
            let field = |t: f64, r: f64| self.fields(&table, t, r);
            let res = l2_norms(self.n, &field, t, &opts)?;
            let tol = res.iter().map(|x| x.achieved_tol).fold(0.0, f64::max);
            Ok((t, res.map(|x| x.norm), tol))
        };
        let threads = self.threads.min(t_grid.len()).max(1);
        if threads == 1 {
            return t_grid.iter().map(|&t| eval_one(t)).collect();
        }
        let chunk = t_grid.len().div_ceil(threads);
        let parts: Vec<Result<Vec<_>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = t_grid
                .chunks(chunk)
                .map(|ts| {
                    let eval_one = &eval_one;
                    scope.spawn(move || ts.iter().map(|&t| eval_one(t)).collect::<Result<Vec<_>>>())
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut out = Vec::with_capacity(t_grid.len());
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }

    pub fn run(&self, t_grid: &[f64]) -> Result<ErrorReport> {
        let rows = self.norms_on(t_grid)?;
        let sup = |f: &dyn Fn(&[f64; 3]) -> f64| {
            let mut best = SupNorm { value: f64::NEG_INFINITY, t_at_sup: f64::NAN, achieved_tol: 0.0 };
            for (t, v, tol) in &rows {
                let x = f(v);
                if x > best.value {
                    best.value = x;
                    best.t_at_sup = *t;
                }
                best.achieved_tol = best.achieved_tol.max(*tol);
            }
            best
        };
        let energy = sup(&|v| v[0] + v[1]);
        let l2 = self.include_l2.then(|| sup(&|v| v[2]));
        Ok(ErrorReport {
            epsilon: self.epsilon,
            n: self.n,
            order: self.order,
            energy,
            l2,
        })
    }
}

/// Sup-in-time norms of `U = u^ε − u⁰`.
pub fn first_order_error(
    epsilon: f64,
    n: u32,
    data: &DataTriple,
    t_grid: &[f64],
    include_l2: bool,
) -> Result<ErrorReport> {
    ErrorExperiment::new(epsilon, n, data, Order::First)
        .with_l2(include_l2)
        .run(t_grid)
}

/// Sup-in-time norms of `U^s = u^ε − u⁰ − εu^{I,1}`; requires `θ₀ ≡ −u₁`.
pub fn second_order_error(
    epsilon: f64,
    n: u32,
    data: &DataTriple,
    t_grid: &[f64],
    include_l2: bool,
) -> Result<ErrorReport> {
    ErrorExperiment::new(epsilon, n, data, Order::Second)
        .with_l2(include_l2)
        .run(t_grid)
}

/// Log-log slope of error values against ε.
pub fn fit_epsilon_slope(epsilons: &[f64], values: &[f64]) -> Result<RateFit> {
    let mut pairs: Vec<(f64, f64)> = epsilons.iter().copied().zip(values.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    fit_rate(&pairs)
}
