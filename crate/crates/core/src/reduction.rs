//! Reduction of a 2×2 hyperbolic–parabolic coupling to a third-order
//! equation `û_ttt + c2(r) û_tt + c1(r) û_t + c0(r) û = 0`, and the Lagrange
//! kernels of that equation for pairwise distinct roots.

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::kernels::lagrange_weights;
use crate::roots::characteristic_roots_general;

/// `coef · r^power`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monomial<T> {
    pub coef: T,
    pub power: u32,
}

impl Monomial<f64> {
    pub fn at(&self, r: f64) -> f64 {
        self.coef * r.powi(self.power as i32)
    }
}

impl Monomial<Complex> {
    pub fn at(&self, r: f64) -> Complex {
        self.coef * r.powi(self.power as i32)
    }
}

/// Reduced symbol of a coupled system, including the induced second
/// initial condition `ü₀ = p_u(r) û₀ + p_θ(r) θ̂₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoupledSymbol {
    pub c2: Monomial<f64>,
    pub c1: Monomial<f64>,
    pub c0: Monomial<f64>,
    pub accel_u0: Monomial<Complex>,
    pub accel_theta0: Monomial<Complex>,
}

impl CoupledSymbol {
    pub fn coefficients_at(&self, r: f64) -> (f64, f64, f64) {
        (self.c2.at(r), self.c1.at(r), self.c0.at(r))
    }

    pub fn roots_at(&self, r: f64) -> Result<[Complex; 3]> {
        let (c2, c1, c0) = self.coefficients_at(r);
        characteristic_roots_general(c2, c1, c0)
    }

    /// `(û₀, û₁, ü₀)` from the physical data `(û₀, û₁, θ̂₀)`.
    pub fn reduced_data(&self, r: f64, data: [Complex; 3]) -> [Complex; 3] {
        let acc = self.accel_u0.at(r) * data[0] + self.accel_theta0.at(r) * data[2];
        [data[0], data[1], acc]
    }
}

/// `u_ttt − Δu_tt + 2Δ²u_t − Δ³u = 0`, `u_tt(0) = −Δ²u₀ − Δθ₀`.
pub fn reduce_plate() -> CoupledSymbol {
    let m = |coef, power| Monomial { coef, power };
    CoupledSymbol {
        c2: m(1.0, 2),
        c1: m(2.0, 4),
        c0: m(1.0, 6),
        accel_u0: Monomial { coef: Complex::real(-1.0), power: 4 },
        accel_theta0: Monomial { coef: Complex::ONE, power: 2 },
    }
}

/// Parameters of `u_tt − αu_xx + γ₁θ_x = 0`, `θ_t − κθ_xx + γ₂u_tx = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thermo1dParams {
    pub alpha: f64,
    pub kappa: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl Thermo1dParams {
    pub fn new(alpha: f64, kappa: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        let all_finite = [alpha, kappa, gamma1, gamma2].iter().all(|x| x.is_finite());
        if !all_finite || !(alpha > 0.0) || !(kappa > 0.0) || !(gamma1 * gamma2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need α > 0, κ > 0, γ₁γ₂ > 0; got ({alpha}, {kappa}, {gamma1}, {gamma2})"
            )));
        }
        Ok(Thermo1dParams { alpha, kappa, gamma1, gamma2 })
    }
}

/// `u_ttt − κu_ttxx − (γ₁γ₂+α)u_txx + καu_xxxx = 0` with
/// `u_tt(0) = αu₀'' − γ₁θ₀'`.
pub fn reduce_thermoelastic_1d(alpha: f64, kappa: f64, gamma1: f64, gamma2: f64) -> Result<CoupledSymbol> {
    let p = Thermo1dParams::new(alpha, kappa, gamma1, gamma2)?;
    Ok(symbol_1d(&p))
}

pub fn symbol_1d(p: &Thermo1dParams) -> CoupledSymbol {
    let m = |coef, power| Monomial { coef, power };
    CoupledSymbol {
        c2: m(p.kappa, 2),
        c1: m(p.gamma1 * p.gamma2 + p.alpha, 2),
        c0: m(p.kappa * p.alpha, 4),
        accel_u0: Monomial { coef: Complex::real(-p.alpha), power: 2 },
        accel_theta0: Monomial { coef: Complex::new(0.0, -p.gamma1), power: 1 },
    }
}

/// Roots at `r`, refusing near-coincident ones.
pub fn distinct_roots(symbol: &CoupledSymbol, r: f64) -> Result<[Complex; 3]> {
    let roots = symbol.roots_at(r)?;
    let scale = roots.iter().map(|z| z.abs()).fold(0.0, f64::max);
    let gap = (0..3)
        .map(|i| (roots[i] - roots[(i + 1) % 3]).abs())
        .fold(f64::INFINITY, f64::min);
    if !(gap > 1e-6 * scale) {
        return Err(Error::DegenerateRoots { r, gap });
    }
    Ok(roots)
}

/// `∂t^m û(t)` for `m = 0..=3` from the physical data `(û₀, û₁, θ̂₀)`.
pub fn lagrange_solution(symbol: &CoupledSymbol, t: f64, r: f64, data: [Complex; 3]) -> Result<[Complex; 4]> {
    let lambda = distinct_roots(symbol, r)?;
    let w = lagrange_weights(lambda);
    let y0 = symbol.reduced_data(r, data);
    let mut out = [Complex::ZERO; 4];
    for i in 0..3 {
        let amp = (w[0][i] * y0[0] + w[1][i] * y0[1] + w[2][i] * y0[2]) * (lambda[i] * t).exp();
        let mut pow = Complex::ONE;
        for slot in out.iter_mut() {
            *slot += amp * pow;
            pow *= lambda[i];
        }
    }
    Ok(out)
}

/// `û(t, r)` from the Lagrange sum of the reduced symbol.
pub fn lagrange_kernels(symbol: &CoupledSymbol, t: f64, r: f64, data: [Complex; 3]) -> Result<Complex> {
    Ok(lagrange_solution(symbol, t, r, data)?[0])
}
