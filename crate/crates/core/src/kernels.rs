//! Solution kernels of the reduced third-order equation
//! `û_ttt + r²û_tt + 2r⁴û_t + r⁶û = 0`.
//!
//! `K̂_j` is the solution with `∂t^i K̂_j(0) = δ_ij`. Because every root is
//! `μ_i r²`, all kernels are functions of `s = r²t` up to a power of `r`:
//!
//! ```text
//! ∂t^m K̂_j(t, r) = r^{2(m−j)} k_j^{(m)}(s),   k_j = Σ_i w_{j,i} e^{μ_i s}.
//! ```
//!
//! The stabilized mode evaluates the normalized functions
//! `N_{j,m}(s) = k_j^{(m)}(s) / s^{max(j−m,0)}` without cancellation, so the
//! negative powers of `r` never appear explicitly. The Lagrange-sum mode is
//! the literal exponential sum in the unscaled roots `λ_i = μ_i r²` and
//! loses digits as `r²t → 0`.

use crate::complex::Complex;
use crate::error::Result;
use crate::roots::{solve_characteristic_cubic, CharRoots};

/// Number of Taylor terms kept for `s < SERIES_SWITCH`.
const SERIES_TERMS: usize = 36;
const SERIES_SWITCH: f64 = 1.0;
/// Highest time derivative supported by the evaluators.
pub const MAX_ORDER: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    K0,
    K1,
    K2,
}

impl Kernel {
    pub const ALL: [Kernel; 3] = [Kernel::K0, Kernel::K1, Kernel::K2];

    pub fn index(self) -> usize {
        match self {
            Kernel::K0 => 0,
            Kernel::K1 => 1,
            Kernel::K2 => 2,
        }
    }
}

impl TryFrom<usize> for Kernel {
    type Error = crate::error::Error;
    fn try_from(j: usize) -> Result<Kernel> {
        match j {
            0 => Ok(Kernel::K0),
            1 => Ok(Kernel::K1),
            2 => Ok(Kernel::K2),
            _ => Err(crate::error::Error::InvalidParameter(format!(
                "kernel index {j} not in 0..=2"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    /// Literal Lagrange exponential sum in the unscaled roots.
    LagrangeSum,
    /// Cancellation-free evaluation in `s = r²t`.
    Stabilized,
}

/// `A e^{−a0 s} + e^{−a1 s}(B cos(a2 s) + C sin(a2 s))`.
#[derive(Clone, Copy, Debug, Default)]
struct TrigForm {
    a: f64,
    b: f64,
    c: f64,
}

/// Multipliers of `(û₀, û₁, θ̂₀)` for `û` and for `θ̂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolutionMultipliers {
    pub m_u0: Complex,
    pub m_u1: Complex,
    pub m_th0: Complex,
    pub theta_u0: Complex,
    pub theta_u1: Complex,
    pub theta_th0: Complex,
}

impl SolutionMultipliers {
    pub fn apply(&self, data: [Complex; 3]) -> (Complex, Complex) {
        let u = self.m_u0 * data[0] + self.m_u1 * data[1] + self.m_th0 * data[2];
        let th = self.theta_u0 * data[0] + self.theta_u1 * data[1] + self.theta_th0 * data[2];
        (u, th)
    }
}

#[derive(Clone, Debug)]
pub struct KernelSet {
    roots: CharRoots,
    mode: EvalMode,
    mu: [Complex; 3],
    /// Lagrange weights in the scaled roots, `[j][i]`.
    weights: [[Complex; 3]; 3],
    trig: [[TrigForm; (MAX_ORDER + 1) as usize]; 3],
    series: [[[f64; SERIES_TERMS]; (MAX_ORDER + 1) as usize]; 3],
}

/// Weights `[j][i]` such that `Σ_i w_{j,i} z_i^m = δ_jm` for `m = 0, 1, 2`.
pub(crate) fn lagrange_weights(z: [Complex; 3]) -> [[Complex; 3]; 3] {
    let mut w = [[Complex::ZERO; 3]; 3];
    for i in 0..3 {
        let (k, l) = ((i + 1) % 3, (i + 2) % 3);
        let inv = Complex::ONE / ((z[i] - z[k]) * (z[i] - z[l]));
        w[2][i] = inv;
        w[1][i] = -(z[k] + z[l]) * inv;
        w[0][i] = z[k] * z[l] * inv;
    }
    w
}

impl KernelSet {
    pub fn new(roots: CharRoots, mode: EvalMode) -> Self {
        let mu = roots.mu();
        let weights = lagrange_weights(mu);

        let mut trig = [[TrigForm::default(); (MAX_ORDER + 1) as usize]; 3];
        for (j, row) in trig.iter_mut().enumerate() {
            for (m, form) in row.iter_mut().enumerate() {
                let real = weights[j][0] * mu[0].powi(m as u32);
                let upper = weights[j][2] * mu[2].powi(m as u32);
                *form = TrigForm {
                    a: real.re,
                    b: 2.0 * upper.re,
                    c: -2.0 * upper.im,
                };
            }
        }

        // Taylor coefficients of k_j from k''' = −c2 k'' − c1 k' − c0 k.
        let (c2, c1, c0) = roots.cubic_coefficients();
        let len = SERIES_TERMS + 2 + MAX_ORDER as usize + 1;
        let mut series = [[[0.0; SERIES_TERMS]; (MAX_ORDER + 1) as usize]; 3];
        for (j, per_j) in series.iter_mut().enumerate() {
            let mut c = vec![0.0; len];
            c[j] = [1.0, 1.0, 0.5][j];
            for n in 0..len - 3 {
                let (n1, n2, n3) = ((n + 1) as f64, (n + 2) as f64, (n + 3) as f64);
                c[n + 3] =
                    -(c2 * n2 * n1 * c[n + 2] + c1 * n1 * c[n + 1] + c0 * c[n]) / (n3 * n2 * n1);
            }
            for (m, coeffs) in per_j.iter_mut().enumerate() {
                let p = j.saturating_sub(m);
                for (k, d) in coeffs.iter_mut().enumerate() {
                    // k_j^{(m)}(s) = Σ_n c_{n+m} (n+m)!/n! s^n, kept from n = p.
                    let n = k + p;
                    let mut falling = 1.0;
                    for q in 0..m {
                        falling *= (n + m - q) as f64;
                    }
                    *d = c[n + m] * falling;
                }
            }
        }

        KernelSet {
            roots,
            mode,
            mu,
            weights,
            trig,
            series,
        }
    }

    /// Kernel set built on the plate cubic.
    pub fn plate(mode: EvalMode) -> Result<Self> {
        Ok(KernelSet::new(solve_characteristic_cubic()?, mode))
    }

    pub fn roots(&self) -> &CharRoots {
        &self.roots
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn with_mode(&self, mode: EvalMode) -> Self {
        KernelSet {
            mode,
            ..self.clone()
        }
    }

    fn trig_value(&self, j: usize, m: usize, s: f64) -> f64 {
        let f = self.trig[j][m];
        let r = &self.roots;
        let (sn, cs) = (r.a2 * s).sin_cos();
        f.a * (-r.a0 * s).exp() + (-r.a1 * s).exp() * (f.b * cs + f.c * sn)
    }

    /// `k₁(s)/s` through the `sin²` and `∫₀¹ e^{δsτ}dτ` rewriting.
    fn k1_over_s(&self, s: f64) -> f64 {
        let r = &self.roots;
        let f = self.trig[1][0];
        let delta = r.delta();
        let x = delta * s;
        // e^{−a0 s} ∫₀¹ e^{δsτ} dτ
        let damped_integral = if x < 1e-4 {
            (-r.a0 * s).exp() * (1.0 + x * (0.5 + x * (1.0 / 6.0 + x / 24.0)))
        } else if x < 1.0 {
            (-r.a0 * s).exp() * x.exp_m1() / x
        } else {
            ((-r.a1 * s).exp() - (-r.a0 * s).exp()) / x
        };
        let half = 0.5 * r.a2 * s;
        let sin_sq_over_s = if s == 0.0 {
            0.0
        } else {
            2.0 * half.sin().powi(2) / s
        };
        let sinc = sinc(r.a2 * s);
        let e1 = (-r.a1 * s).exp();
        f.a * (sin_sq_over_s * e1 - delta * damped_integral) + f.c * r.a2 * sinc * e1
    }

    /// `N_{j,m}(s) = k_j^{(m)}(s) / s^{max(j−m,0)}`, evaluated stably.
    pub fn normalized(&self, kernel: Kernel, order: u32, s: f64) -> f64 {
        assert!(order <= MAX_ORDER, "derivative order {order} > {MAX_ORDER}");
        let (j, m) = (kernel.index(), order as usize);
        if j == 1 && m == 0 {
            return self.k1_over_s(s);
        }
        if s < SERIES_SWITCH {
            let d = &self.series[j][m];
            return d.iter().rev().fold(0.0, |acc, &c| acc * s + c);
        }
        let p = j.saturating_sub(m) as i32;
        self.trig_value(j, m, s) / s.powi(p)
    }

    /// Raw complex Lagrange sum `Σ_i W_{j,i} λ_i^m e^{λ_i t}` in the unscaled
    /// roots, with `e^{−a1 r² t}` factored out of every term.
    pub fn lagrange_sum(&self, kernel: Kernel, order: u32, t: f64, r: f64) -> Complex {
        let r2 = r * r;
        let lambda = self.mu.map(|m| m * r2);
        let w = lagrange_weights(lambda);
        let shift = self.roots.a1 * r2 * t;
        let envelope = (-shift).exp();
        let j = kernel.index();
        let sum: Complex = (0..3)
            .map(|i| {
                let phase = (lambda[i] * t + shift).exp();
                w[j][i] * lambda[i].powi(order) * phase
            })
            .sum();
        sum * envelope
    }

    /// Value of `K̂_j` at `(t, r)`.
    pub fn eval_kernel(&self, kernel: Kernel, t: f64, r: f64) -> Complex {
        self.eval_kernel_dt(kernel, 0, t, r)
    }

    /// `∂t^order K̂_j` at `(t, r)`; `order ≤ 3`.
    pub fn eval_kernel_dt(&self, kernel: Kernel, order: u32, t: f64, r: f64) -> Complex {
        let j = kernel.index() as i32;
        let m = order as i32;
        if r == 0.0 {
            return Complex::real(origin_limit(j, m, t));
        }
        match self.mode {
            EvalMode::LagrangeSum => {
                Complex::real(self.lagrange_sum(kernel, order, t, r).re)
            }
            EvalMode::Stabilized => {
                let s = r * r * t;
                let n = self.normalized(kernel, order, s);
                let scale = if j > m {
                    t.powi(j - m)
                } else {
                    (r * r).powi(m - j)
                };
                Complex::real(scale * n)
            }
        }
    }

    /// Multipliers of `(û₀, û₁, θ̂₀)` in the solution representation.
    pub fn multipliers(&self, t: f64, r: f64) -> SolutionMultipliers {
        match self.mode {
            EvalMode::Stabilized => self.stabilized_multipliers(t, r),
            EvalMode::LagrangeSum if r == 0.0 => self.stabilized_multipliers(t, r),
            EvalMode::LagrangeSum => self.naive_multipliers(t, r),
        }
    }

    fn stabilized_multipliers(&self, t: f64, r: f64) -> SolutionMultipliers {
        let r2 = r * r;
        let s = r2 * t;
        let n = |k, m| self.normalized(k, m, s);
        let (n00, n02) = (n(Kernel::K0, 0), n(Kernel::K0, 2));
        let (n10, n12) = (n(Kernel::K1, 0), n(Kernel::K1, 2));
        let (n20, n22) = (n(Kernel::K2, 0), n(Kernel::K2, 2));
        let k2 = s * s * n20;
        SolutionMultipliers {
            m_u0: Complex::real(n00 - k2),
            m_u1: Complex::real(t * n10),
            m_th0: Complex::real(t * s * n20),
            theta_u0: Complex::real(r2 * (n02 - n22 + n00 - k2)),
            theta_u1: Complex::real(n12 + s * n10),
            theta_th0: Complex::real(n22 + k2),
        }
    }

    fn naive_multipliers(&self, t: f64, r: f64) -> SolutionMultipliers {
        let r2 = r * r;
        let r4 = r2 * r2;
        let k = |k, m| self.eval_kernel_dt(k, m, t, r);
        let (k0, k1, k2) = (k(Kernel::K0, 0), k(Kernel::K1, 0), k(Kernel::K2, 0));
        let (k0tt, k1tt, k2tt) = (k(Kernel::K0, 2), k(Kernel::K1, 2), k(Kernel::K2, 2));
        let m_u0 = k0 - k2 * r4;
        SolutionMultipliers {
            m_u0,
            m_u1: k1,
            m_th0: k2 * r2,
            theta_u0: (k0tt - k2tt * r4) / r2 + m_u0 * r2,
            theta_u1: k1tt / r2 + k1 * r2,
            theta_th0: k2tt + k2 * r4,
        }
    }

    /// `(û, θ̂)` at `(t, r)` for data `(û₀, û₁, θ̂₀)`.
    pub fn solution_hat(&self, t: f64, r: f64, data: [Complex; 3]) -> (Complex, Complex) {
        self.multipliers(t, r).apply(data)
    }

    /// `(û, û_t, û_tt)` for data `(û₀, û₁, θ̂₀)`, through the induced
    /// acceleration `ü₀ = −r⁴û₀ + r²θ̂₀`.
    pub fn displacement_derivatives(
        &self,
        t: f64,
        r: f64,
        data: [Complex; 3],
    ) -> [Complex; 3] {
        let r2 = r * r;
        let acc = data[0] * (-r2 * r2) + data[2] * r2;
        let mut out = [Complex::ZERO; 3];
        for (m, slot) in out.iter_mut().enumerate() {
            let m = m as u32;
            *slot = self.eval_kernel_dt(Kernel::K0, m, t, r) * data[0]
                + self.eval_kernel_dt(Kernel::K1, m, t, r) * data[1]
                + self.eval_kernel_dt(Kernel::K2, m, t, r) * acc;
        }
        out
    }

    /// Scaled Lagrange weights `[j][i]`.
    pub fn weights(&self) -> &[[Complex; 3]; 3] {
        &self.weights
    }
}

/// `∂t^m K̂_j(t, 0) = t^{j−m}/(j−m)!` for `m ≤ j`, zero otherwise.
fn origin_limit(j: i32, m: i32, t: f64) -> f64 {
    match j - m {
        0 => 1.0,
        1 => t,
        2 => 0.5 * t * t,
        _ => 0.0,
    }
}

pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}
