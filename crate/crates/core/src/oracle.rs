//! Per-frequency RK4 oracle with step-doubling error control.
//!
//! Every closed form in the crate is checked against these integrators.
//! They know nothing about kernels or roots: each system is integrated
//! directly from its right-hand side.

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::reduction::Thermo1dParams;

/// State vector usable by the integrators.
pub trait OdeState: Copy {
    /// `self + k·other`.
    fn add_scaled(&self, k: f64, other: &Self) -> Self;
    fn max_abs(&self) -> f64;
}

impl<const N: usize> OdeState for [f64; N] {
    fn add_scaled(&self, k: f64, other: &Self) -> Self {
        let mut out = *self;
        for (o, x) in out.iter_mut().zip(other) {
            *o += k * x;
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl<const N: usize> OdeState for [Complex; N] {
    fn add_scaled(&self, k: f64, other: &Self) -> Self {
        let mut out = *self;
        for (o, x) in out.iter_mut().zip(other) {
            *o += *x * k;
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// One classical RK4 step of `y' = f(y)`.
pub fn rk4_step<S: OdeState>(f: &impl Fn(&S) -> S, y: &S, h: f64) -> S {
    let k1 = f(y);
    let k2 = f(&y.add_scaled(0.5 * h, &k1));
    let k3 = f(&y.add_scaled(0.5 * h, &k2));
    let k4 = f(&y.add_scaled(h, &k3));
    y.add_scaled(h / 6.0, &k1)
        .add_scaled(h / 3.0, &k2)
        .add_scaled(h / 3.0, &k3)
        .add_scaled(h / 6.0, &k4)
}

/// `n` equal RK4 steps over `[0, t_end]`.
pub fn integrate_fixed<S: OdeState>(f: impl Fn(&S) -> S, y0: S, t_end: f64, n: usize) -> S {
    let h = t_end / n as f64;
    (0..n).fold(y0, |y, _| rk4_step(&f, &y, h))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl {
    /// Per-step relative error bound of the Richardson estimate.
    pub tol: f64,
    pub dt_max: f64,
    pub dt_min: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            tol: 1e-12,
            dt_max: f64::INFINITY,
            dt_min: 1e-14,
        }
    }
}

/// `(r, ε)` reported with a step underflow.
#[derive(Clone, Copy, Debug, Default)]
pub struct Context {
    pub r: f64,
    pub epsilon: f64,
}

/// Result of an adaptive run.
#[derive(Clone, Copy, Debug)]
pub struct Run<S> {
    pub state: S,
    pub steps: usize,
    /// Step size proposed for a continuation.
    pub next_dt: f64,
}

/// Adaptive RK4 with step doubling; `observe(t, &y)` is called after every
/// accepted step.
pub fn integrate_observed<S: OdeState>(
    f: impl Fn(&S) -> S,
    y0: S,
    t_end: f64,
    dt_initial: f64,
    ctrl: &StepControl,
    ctx: Context,
    mut observe: impl FnMut(f64, &S),
) -> Result<Run<S>> {
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!("t_end = {t_end} must be finite and ≥ 0")));
    }
    let mut y = y0;
    let mut t = 0.0;
    let mut h = dt_initial.min(ctrl.dt_max).min(t_end);
    if !(h > 0.0) {
        h = ctrl.dt_max.min(t_end);
    }
    let mut steps = 0;
    while t < t_end {
        let landing = t + h >= t_end;
        let step = if landing { t_end - t } else { h };
        let full = rk4_step(&f, &y, step);
        let mid = rk4_step(&f, &y, 0.5 * step);
        let half = rk4_step(&f, &mid, 0.5 * step);
        let diff = half.add_scaled(-1.0, &full);
        let scale = half.max_abs();
        let err = if scale > 0.0 { diff.max_abs() / (15.0 * scale) } else { 0.0 };
        if err <= ctrl.tol {
            y = half.add_scaled(1.0 / 15.0, &diff);
            t = if landing { t_end } else { t + step };
            steps += 1;
            observe(t, &y);
            let grow = if err == 0.0 { 4.0 } else { (0.9 * (ctrl.tol / err).powf(0.2)).clamp(0.2, 4.0) };
            if !landing || step >= h {
                h = (step * grow).min(ctrl.dt_max);
            }
        } else {
            if !err.is_finite() {
                h = 0.2 * step;
            } else {
                h = step * (0.9 * (ctrl.tol / err).powf(0.2)).clamp(0.1, 0.5);
            }
            if h < ctrl.dt_min {
                return Err(Error::StepUnderflow {
                    t,
                    r: ctx.r,
                    epsilon: ctx.epsilon,
                    dt_min: ctrl.dt_min,
                });
            }
        }
    }
    Ok(Run {
        state: y,
        steps,
        next_dt: h,
    })
}

/// Adaptive RK4 with step doubling.
pub fn integrate_adaptive<S: OdeState>(
    f: impl Fn(&S) -> S,
    y0: S,
    t_end: f64,
    dt_initial: f64,
    ctrl: &StepControl,
    ctx: Context,
) -> Result<Run<S>> {
    integrate_observed(f, y0, t_end, dt_initial, ctrl, ctx, |_, _| {})
}

/// Coupled system `û_t = v̂`, `v̂_t = −r⁴û + r²θ̂`, `θ̂_t = −(r²/ε)(θ̂ + v̂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrequencyODE {
    pub r: f64,
    pub epsilon: f64,
    /// `(û, v̂, θ̂)`.
    pub state: [Complex; 3],
}

impl FrequencyODE {
    pub fn new(r: f64, epsilon: f64, state: [Complex; 3]) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must be > 0")));
        }
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("r = {r} must be finite and ≥ 0")));
        }
        if !state.iter().all(|z| z.is_finite()) {
            return Err(Error::InvalidParameter("state must be finite".into()));
        }
        Ok(FrequencyODE { r, epsilon, state })
    }

    /// Plate data `(û₀, û₁, θ̂₀)` as the initial state.
    pub fn from_data(r: f64, epsilon: f64, data: [Complex; 3]) -> Result<Self> {
        FrequencyODE::new(r, epsilon, data)
    }

    pub fn rhs(&self, y: &[Complex; 3]) -> [Complex; 3] {
        let r2 = self.r * self.r;
        [
            y[1],
            y[0] * (-r2 * r2) + y[2] * r2,
            (y[2] + y[1]) * (-r2 / self.epsilon),
        ]
    }

    pub fn step_control(&self) -> StepControl {
        let r2 = self.r * self.r;
        StepControl {
            dt_max: if r2 > 0.0 { 0.1 * self.epsilon.min(1.0) / r2 } else { f64::INFINITY },
            ..StepControl::default()
        }
    }

    fn context(&self) -> Context {
        Context {
            r: self.r,
            epsilon: self.epsilon,
        }
    }
}

/// State `(û, v̂, θ̂)` of the coupled system at `t_end`.
pub fn integrate(ode: &FrequencyODE, t_end: f64, dt_initial: f64) -> Result<[Complex; 3]> {
    let ctrl = ode.step_control();
    let run = integrate_adaptive(|y| ode.rhs(y), ode.state, t_end, dt_initial, &ctrl, ode.context())?;
    Ok(run.state)
}

/// Like [`integrate`], reporting every accepted step to `observe`.
pub fn integrate_trajectory(
    ode: &FrequencyODE,
    t_end: f64,
    dt_initial: f64,
    observe: impl FnMut(f64, &[Complex; 3]),
) -> Result<[Complex; 3]> {
    let ctrl = ode.step_control();
    let run = integrate_observed(|y| ode.rhs(y), ode.state, t_end, dt_initial, &ctrl, ode.context(), observe)?;
    Ok(run.state)
}

/// Induced data `(û₀, û₁, ü₀)` with `ü₀ = −r⁴û₀ + r²θ̂₀`.
pub fn reduced_data(r: f64, data: [Complex; 3]) -> [Complex; 3] {
    let r2 = r * r;
    [data[0], data[1], data[0] * (-r2 * r2) + data[2] * r2]
}

/// `(û, û_t, û_tt)` of `û_ttt + r²û_tt + 2r⁴û_t + r⁶û = 0`.
pub fn integrate_third_order(r: f64, t_end: f64, data: [Complex; 3]) -> Result<[Complex; 3]> {
    let r2 = r * r;
    let (c2, c1, c0) = (r2, 2.0 * r2 * r2, r2 * r2 * r2);
    let f = |y: &[Complex; 3]| [y[1], y[2], y[2] * (-c2) - y[1] * c1 - y[0] * c0];
    let ctrl = StepControl {
        dt_max: if r2 > 0.0 { 0.1 / r2 } else { f64::INFINITY },
        ..StepControl::default()
    };
    let ctx = Context { r, epsilon: 1.0 };
    Ok(integrate_adaptive(f, data, t_end, ctrl.dt_max.min(0.01), &ctrl, ctx)?.state)
}

/// `(û⁰, û⁰_t)` of the structurally damped plate `û_tt + r²û_t + r⁴û = 0`.
pub fn integrate_damped_plate(r: f64, t_end: f64, u0: Complex, u1: Complex) -> Result<[Complex; 2]> {
    let r2 = r * r;
    let f = |y: &[Complex; 2]| [y[1], y[1] * (-r2) - y[0] * (r2 * r2)];
    let ctrl = StepControl {
        dt_max: if r2 > 0.0 { 0.1 / r2 } else { f64::INFINITY },
        ..StepControl::default()
    };
    let ctx = Context { r, epsilon: 0.0 };
    Ok(integrate_adaptive(f, [u0, u1], t_end, ctrl.dt_max.min(0.01), &ctrl, ctx)?.state)
}

/// `(y, y_t)` of `y_tt + r²y_t + r⁴y = −r⁴û⁰ − r²û⁰_t`, `y(0) = y_t(0) = 0`,
/// integrated together with the damped plate for `û⁰`.
pub fn integrate_corrector(r: f64, t_end: f64, u0: Complex, u1: Complex) -> Result<[Complex; 2]> {
    let r2 = r * r;
    let r4 = r2 * r2;
    let f = |y: &[Complex; 4]| {
        let force = y[2] * (-r4) - y[3] * r2;
        [y[1], y[1] * (-r2) - y[0] * r4 + force, y[3], y[3] * (-r2) - y[2] * r4]
    };
    let ctrl = StepControl {
        dt_max: if r2 > 0.0 { 0.1 / r2 } else { f64::INFINITY },
        ..StepControl::default()
    };
    let ctx = Context { r, epsilon: 0.0 };
    let y0 = [Complex::ZERO, Complex::ZERO, u0, u1];
    let y = integrate_adaptive(f, y0, t_end, ctrl.dt_max.min(0.01), &ctrl, ctx)?.state;
    Ok([y[0], y[1]])
}

/// `(û, û_t, θ̂)` of the 1D thermoelastic system
/// `û_tt = −αr²û − iγ₁rθ̂`, `θ̂_t = −κr²θ̂ − iγ₂r û_t`.
pub fn integrate_thermoelastic_1d(
    p: &Thermo1dParams,
    r: f64,
    t_end: f64,
    data: [Complex; 3],
) -> Result<[Complex; 3]> {
    let i = Complex::I;
    let f = |y: &[Complex; 3]| {
        [
            y[1],
            y[0] * (-p.alpha * r * r) - i * y[2] * (p.gamma1 * r),
            y[2] * (-p.kappa * r * r) - i * y[1] * (p.gamma2 * r),
        ]
    };
    let rate = (p.kappa * r * r)
        .max(p.alpha.sqrt() * r)
        .max((p.gamma1 * p.gamma2).abs().sqrt() * r);
    let ctrl = StepControl {
        dt_max: if rate > 0.0 { 0.1 / rate } else { f64::INFINITY },
        ..StepControl::default()
    };
    let ctx = Context { r, epsilon: 1.0 };
    Ok(integrate_adaptive(f, data, t_end, ctrl.dt_max.min(0.01), &ctrl, ctx)?.state)
}

/// Fundamental matrix of the coupled system in `s = r²t`.
///
/// With `u(s) = û`, `v = û_t/r²`, `φ = θ̂/r²` the system becomes
/// `u' = v`, `v' = −u + φ`, `εφ' = −(φ + v)`, independent of `r`. One sweep
/// per ε stores checkpoints; an evaluation at `s` integrates afresh from the
/// nearest checkpoint below `s`.
#[derive(Clone, Debug)]
pub struct FundamentalTable {
    epsilon: f64,
    s_max: f64,
    ctrl: StepControl,
    /// `(s, Φ column-major, proposed dt)`.
    checkpoints: Vec<(f64, [f64; 9], f64)>,
}

impl FundamentalTable {
    const STRIDE: usize = 16;

    fn rhs(epsilon: f64) -> impl Fn(&[f64; 9]) -> [f64; 9] {
        move |y: &[f64; 9]| {
            let mut out = [0.0; 9];
            for c in 0..3 {
                let (u, v, p) = (y[3 * c], y[3 * c + 1], y[3 * c + 2]);
                out[3 * c] = v;
                out[3 * c + 1] = -u + p;
                out[3 * c + 2] = -(p + v) / epsilon;
            }
            out
        }
    }

    pub fn build(epsilon: f64, s_max: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must be > 0")));
        }
        if !(s_max > 0.0) || !s_max.is_finite() {
            return Err(Error::InvalidParameter(format!("s_max = {s_max} must be > 0")));
        }
        let ctrl = StepControl {
            dt_max: 0.1 * epsilon.min(1.0),
            ..StepControl::default()
        };
        let ctx = Context { r: 1.0, epsilon };
        let id = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        let mut checkpoints = vec![(0.0, id, 1e-3 * ctrl.dt_max)];
        let mut count = 0usize;
        let mut pending: Option<(f64, [f64; 9])> = None;
        integrate_observed(
            FundamentalTable::rhs(epsilon),
            id,
            s_max,
            1e-3 * ctrl.dt_max,
            &ctrl,
            ctx,
            |s, y| {
                count += 1;
                pending = Some((s, *y));
                if count.is_multiple_of(FundamentalTable::STRIDE) {
                    checkpoints.push((s, *y, f64::NAN));
                }
            },
        )?;
        if let Some((s, y)) = pending {
            if checkpoints.last().map(|c| c.0) != Some(s) {
                checkpoints.push((s, y, f64::NAN));
            }
        }
        // The step in force at each checkpoint is not observed directly; the
        // continuation starts from the spacing of neighbouring checkpoints.
        for k in 1..checkpoints.len() {
            let gap = checkpoints[k].0 - checkpoints[k - 1].0;
            checkpoints[k].2 = (gap / FundamentalTable::STRIDE as f64).min(ctrl.dt_max);
        }
        Ok(FundamentalTable {
            epsilon,
            s_max,
            ctrl,
            checkpoints,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn len(&self) -> usize {
        self.checkpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checkpoints.is_empty()
    }

    /// `Φ(s)` as `[row][col]`, rows `(u, v, φ)`, columns the unit data.
    /// Beyond `s_max` the exponentially small remainder is returned as zero.
    pub fn eval(&self, s: f64) -> Result<[[f64; 3]; 3]> {
        if !(s >= 0.0) {
            return Err(Error::InvalidParameter(format!("s = {s} must be ≥ 0")));
        }
        if s > self.s_max {
            return Ok([[0.0; 3]; 3]);
        }
        let k = self.checkpoints.partition_point(|c| c.0 <= s) - 1;
        let (s0, y0, dt) = self.checkpoints[k];
        let y = if s == s0 {
            y0
        } else {
            let ctx = Context { r: 1.0, epsilon: self.epsilon };
            integrate_adaptive(FundamentalTable::rhs(self.epsilon), y0, s - s0, dt, &self.ctrl, ctx)?
                .state
        };
        let mut m = [[0.0; 3]; 3];
        for (c, col) in y.chunks(3).enumerate() {
            for (row, v) in col.iter().enumerate() {
                m[row][c] = *v;
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupled_at_origin() {
        let data = [Complex::new(1.0, 2.0), Complex::new(-0.5, 0.25), Complex::new(3.0, 0.0)];
        let ode = FrequencyODE::new(0.0, 0.1, data).unwrap();
        let y = integrate(&ode, 7.0, 0.5).unwrap();
        assert!((y[0] - (data[0] + data[1] * 7.0)).abs() < 1e-14);
        assert_eq!(y[1], data[1]);
        assert_eq!(y[2], data[2]);
    }

    #[test]
    fn fourth_order_convergence() {
        let ode = FrequencyODE::new(1.0, 1.0, [Complex::ONE, Complex::ZERO, Complex::ZERO]).unwrap();
        let exact = integrate(&ode, 2.0, 1e-3).unwrap()[0];
        let e1 = (integrate_fixed(|y| ode.rhs(y), ode.state, 2.0, 40)[0] - exact).abs();
        let e2 = (integrate_fixed(|y| ode.rhs(y), ode.state, 2.0, 80)[0] - exact).abs();
        let ratio = e1 / e2;
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn third_order_returns_data_at_zero() {
        let d = [Complex::ONE, Complex::real(2.0), Complex::real(-1.0)];
        assert_eq!(integrate_third_order(0.7, 0.0, d).unwrap(), d);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FrequencyODE::new(1.0, 0.0, [Complex::ZERO; 3]).is_err());
        assert!(FrequencyODE::new(-1.0, 1.0, [Complex::ZERO; 3]).is_err());
        assert!(FundamentalTable::build(-1.0, 1.0).is_err());
    }

    #[test]
    fn step_underflow_is_reported() {
        let ctrl = StepControl { tol: 1e-30, dt_max: 1.0, dt_min: 1e-3 };
        let res = integrate_adaptive(|y: &[f64; 1]| [-1e6 * y[0]], [1.0], 1.0, 1.0, &ctrl, Context { r: 2.0, epsilon: 1e-4 });
        match res {
            Err(Error::StepUnderflow { r, epsilon, .. }) => {
                assert_eq!((r, epsilon), (2.0, 1e-4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fundamental_table_matches_direct_integration() {
        let eps = 0.05;
        let table = FundamentalTable::build(eps, 12.0).unwrap();
        let r = 1.3;
        let data = [Complex::real(0.4), Complex::real(-1.1), Complex::real(0.7)];
        let ode = FrequencyODE::new(r, eps, data).unwrap();
        for t in [0.01, 0.37, 2.0, 6.5] {
            let s = r * r * t;
            let phi = table.eval(s).unwrap();
            let scaled = [data[0].re, data[1].re / (r * r), data[2].re / (r * r)];
            let u: f64 = (0..3).map(|c| phi[0][c] * scaled[c]).sum();
            let direct = integrate(&ode, t, 1e-4).unwrap()[0].re;
            assert!((u - direct).abs() < 1e-8 * direct.abs().max(1e-2), "t={t}: {u} vs {direct}");
        }
        assert_eq!(table.eval(13.0).unwrap(), [[0.0; 3]; 3]);
    }
}
