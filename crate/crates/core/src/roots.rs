//! Characteristic roots of the reduced third-order equation.
//!
//! The plate cubic `λ³ + r²λ² + 2r⁴λ + r⁶ = 0` is homogeneous in `λ` and
//! `r²`, so every root is `λ_j = μ_j r²` with `μ_j` a root of
//! `μ³ + μ² + 2μ + 1 = 0`. The scaled roots are solved once and reused.

use crate::complex::Complex;
use crate::error::{Error, Result};

/// Scaled characteristic roots and the derived decay/oscillation constants.
///
/// `μ₁ = -a0` and `μ_{2,3} = -a1 ∓ i a2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharRoots {
    pub mu_real: f64,
    pub mu_complex_re: f64,
    pub mu_complex_im: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
}

impl CharRoots {
    /// `[μ₁, μ₂, μ₃]` with `μ₂ = -a1 - i a2`, `μ₃ = -a1 + i a2`.
    pub fn mu(&self) -> [Complex; 3] {
        [
            Complex::real(self.mu_real),
            Complex::new(self.mu_complex_re, -self.mu_complex_im),
            Complex::new(self.mu_complex_re, self.mu_complex_im),
        ]
    }

    /// `(a0 - a1)² + a2²`, the common denominator of the closed-form kernels.
    pub fn denom(&self) -> f64 {
        let d = self.a0 - self.a1;
        d * d + self.a2 * self.a2
    }

    /// `a0² + a2² - a1²`.
    pub fn beta(&self) -> f64 {
        self.a0 * self.a0 + self.a2 * self.a2 - self.a1 * self.a1
    }

    /// `a0 - a1 = α₋ / 2 > 0`.
    pub fn delta(&self) -> f64 {
        self.a0 - self.a1
    }

    /// Coefficients `(c2, c1, c0)` of the monic cubic rebuilt from the roots.
    pub fn cubic_coefficients(&self) -> (f64, f64, f64) {
        let m2 = self.a1 * self.a1 + self.a2 * self.a2;
        (
            self.a0 + 2.0 * self.a1,
            2.0 * self.a0 * self.a1 + m2,
            self.a0 * m2,
        )
    }

    /// Largest relative deviation from the three Vieta identities of
    /// `μ³ + μ² + 2μ + 1`.
    pub fn vieta_residual(&self) -> f64 {
        let (c2, c1, c0) = self.cubic_coefficients();
        let sum = self.mu_real + 2.0 * self.mu_complex_re + 1.0;
        (c2 - 1.0)
            .abs()
            .max((c1 - 2.0).abs() / 2.0)
            .max((c0 - 1.0).abs())
            .max(sum.abs())
    }
}

/// `α± = ∛((3√69 + 11)/2) ± ∛((3√69 - 11)/2)`.
pub fn alpha_pm() -> (f64, f64) {
    let s = 3.0 * 69f64.sqrt();
    let p = ((s + 11.0) / 2.0).cbrt();
    let m = ((s - 11.0) / 2.0).cbrt();
    (p + m, p - m)
}

/// Roots of `μ³ + μ² + 2μ + 1 = 0` together with the derived constants.
pub fn solve_characteristic_cubic() -> Result<CharRoots> {
    let [real, lower, _] = characteristic_roots_general(1.0, 2.0, 1.0)?;
    let (alpha_plus, alpha_minus) = alpha_pm();
    let roots = CharRoots {
        mu_real: real.re,
        mu_complex_re: lower.re,
        mu_complex_im: lower.im.abs(),
        a0: -real.re,
        a1: -lower.re,
        a2: lower.im.abs(),
        alpha_plus,
        alpha_minus,
    };
    let residual = roots.vieta_residual();
    if residual > 1e-10 {
        return Err(Error::RootResidual {
            residual,
            limit: 1e-10,
        });
    }
    Ok(roots)
}

/// Evaluates `λ³ + c2 λ² + c1 λ + c0` and its derivative.
fn cubic_and_derivative(c2: f64, c1: f64, c0: f64, x: Complex) -> (Complex, Complex) {
    let p = ((x + c2) * x + c1) * x + c0;
    let dp = (x * 3.0 + 2.0 * c2) * x + c1;
    (p, dp)
}

fn newton_polish(c2: f64, c1: f64, c0: f64, x: Complex) -> Complex {
    let (p, dp) = cubic_and_derivative(c2, c1, c0, x);
    if dp.abs() <= f64::EPSILON * (1.0 + x.abs()).powi(2) {
        return x;
    }
    let next = x - p / dp;
    let (pn, _) = cubic_and_derivative(c2, c1, c0, next);
    if pn.abs() <= p.abs() {
        next
    } else {
        x
    }
}

/// Roots of the monic cubic `λ³ + c2 λ² + c1 λ + c0`.
///
/// Ordering: when there is one real root it comes first, followed by the
/// conjugate pair (negative imaginary part first). Three real roots are
/// returned in ascending order.
pub fn characteristic_roots_general(c2: f64, c1: f64, c0: f64) -> Result<[Complex; 3]> {
    if !(c2.is_finite() && c1.is_finite() && c0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "non-finite cubic coefficients ({c2}, {c1}, {c0})"
        )));
    }
    // Rescale λ = σx so the coefficients are O(1).
    let sigma = c2.abs().max(c1.abs().sqrt()).max(c0.abs().cbrt());
    if sigma == 0.0 {
        return Ok([Complex::ZERO; 3]);
    }
    let b2 = c2 / sigma;
    let b1 = c1 / (sigma * sigma);
    let b0 = c0 / (sigma * sigma * sigma);

    // Depressed cubic x = y - b2/3: y³ + p y + q = 0.
    let shift = b2 / 3.0;
    let p = b1 - b2 * b2 / 3.0;
    let q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    let mut roots = if disc > 0.0 {
        // One real root, Cardano with the cancellation-free sign choice.
        let sq = disc.sqrt();
        let u = (-q / 2.0 - q.signum() * sq).cbrt();
        let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
        let real = u + v - shift;
        let re = -(u + v) / 2.0 - shift;
        let im = 3f64.sqrt() / 2.0 * (u - v).abs();
        [
            Complex::real(real),
            Complex::new(re, -im),
            Complex::new(re, im),
        ]
    } else if p == 0.0 {
        [Complex::real(-shift); 3]
    } else {
        // Three real roots, trigonometric form.
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        let mut r = [
            m * theta.cos() - shift,
            m * (theta - tau).cos() - shift,
            m * (theta - 2.0 * tau).cos() - shift,
        ];
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        [Complex::real(r[0]), Complex::real(r[1]), Complex::real(r[2])]
    };

    if roots[1].im != 0.0 {
        roots[0] = Complex::real(newton_polish(b2, b1, b0, roots[0]).re);
        let pair = newton_polish(b2, b1, b0, roots[1]);
        let pair = Complex::new(pair.re, -pair.im.abs());
        roots[1] = pair;
        roots[2] = pair.conj();
    } else {
        for x in roots.iter_mut() {
            *x = Complex::real(newton_polish(b2, b1, b0, *x).re);
        }
    }

    let roots = roots.map(|x| x * sigma);
    for &x in &roots {
        let (res, _) = cubic_and_derivative(c2, c1, c0, x);
        let scale = 1f64.max(x.abs().powi(3)).max(c0.abs());
        let limit = 1e-10 * scale;
        if res.abs() > limit {
            return Err(Error::RootResidual {
                residual: res.abs(),
                limit,
            });
        }
    }
    Ok(roots)
}
