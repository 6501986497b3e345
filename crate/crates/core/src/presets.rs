//! Named radial data used by the experiments.

use std::fmt;
use std::str::FromStr;

use crate::complex::Complex;
use crate::error::Error;
use crate::quadrature::RadialData;

/// `sup_r (1 − e^{−r²})/r`, attained at `r ≈ 1.1209`.
pub const GAUSSIAN_LIP: f64 = 0.638_172_686_338_951_5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `f̂(r) = e^{−r²}`.
    Gaussian,
    /// `f̂(r) = 1_{[0,1]}(r)`.
    Indicator,
    /// `f̂(r) = r e^{−r²}`, standing for data with `P_f = 0`.
    MeanZeroGaussianDerivative,
    /// `f̂ ≡ 1`, an idealized point mass.
    ConstantProfile,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Gaussian,
        Preset::Indicator,
        Preset::MeanZeroGaussianDerivative,
        Preset::ConstantProfile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Gaussian => "gaussian",
            Preset::Indicator => "indicator",
            Preset::MeanZeroGaussianDerivative => "mean-zero-gaussian-derivative",
            Preset::ConstantProfile => "constant-profile",
        }
    }

    pub fn radial(self) -> RadialData {
        match self {
            Preset::Gaussian => gaussian(),
            Preset::Indicator => indicator(),
            Preset::MeanZeroGaussianDerivative => mean_zero(),
            Preset::ConstantProfile => RadialData::constant(1.0),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown preset '{s}'")))
    }
}

pub fn gaussian() -> RadialData {
    RadialData::new(|r| Complex::real((-r * r).exp()), 1.0, GAUSSIAN_LIP).expect("valid preset")
}

pub fn mean_zero() -> RadialData {
    RadialData::new(|r| Complex::real(r * (-r * r).exp()), 0.0, 1.0).expect("valid preset")
}

pub fn indicator() -> RadialData {
    RadialData::new(|r| Complex::real(if r <= 1.0 { 1.0 } else { 0.0 }), 1.0, 1.0).expect("valid preset")
}

/// Data `(u₀, u₁, θ₀)`.
#[derive(Clone, Debug)]
pub struct DataTriple {
    pub u0: RadialData,
    pub u1: RadialData,
    pub theta0: RadialData,
}

impl DataTriple {
    pub fn new(u0: RadialData, u1: RadialData, theta0: RadialData) -> Self {
        DataTriple { u0, u1, theta0 }
    }

    pub fn zero() -> Self {
        DataTriple::new(RadialData::zero(), RadialData::zero(), RadialData::zero())
    }

    /// `(û₀(r), û₁(r), θ̂₀(r))`.
    pub fn at(&self, r: f64) -> [Complex; 3] {
        [self.u0.eval(r), self.u1.eval(r), self.theta0.eval(r)]
    }
}

/// The preset profile in all three slots.
pub fn preset_data(p: Preset) -> DataTriple {
    DataTriple::new(p.radial(), p.radial(), p.radial())
}
