//! Double-double arithmetic (about 32 significant digits), enough to
//! evaluate the raw Lagrange sum of `K̂₁` as a reference.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from_f64(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: Cdd = Cdd { re: Dd::ONE, im: Dd::ZERO };

    pub fn new(re: f64, im: f64) -> Cdd {
        Cdd { re: Dd::from_f64(re), im: Dd::from_f64(im) }
    }

    pub fn scale(self, k: Dd) -> Cdd {
        Cdd { re: self.re * k, im: self.im * k }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    /// Taylor series after halving the argument below `2⁻¹⁰`, then squaring.
    pub fn exp(self) -> Cdd {
        let mag = self.re.hi.abs().max(self.im.hi.abs());
        let mut halvings = 0;
        while mag / f64::powi(2.0, halvings) > 1.0 / 1024.0 {
            halvings += 1;
        }
        let z = self.scale(Dd::from_f64(f64::powi(2.0, -halvings)));
        let mut term = Cdd::ONE;
        let mut sum = Cdd::ONE;
        for k in 1..=12 {
            term = (term * z).scale(Dd::from_f64(1.0 / k as f64));
            sum = sum + term;
        }
        for _ in 0..halvings {
            sum = sum * sum;
        }
        sum
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, o: Cdd) -> Cdd {
        Cdd { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    fn neg(self) -> Cdd {
        Cdd { re: -self.re, im: -self.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Div for Cdd {
    type Output = Cdd;
    fn div(self, o: Cdd) -> Cdd {
        let d = o.norm_sqr();
        let num = self * Cdd { re: o.re, im: -o.im };
        Cdd { re: num.re / d, im: num.im / d }
    }
}

/// Newton-polishes approximate roots of `μ³ + μ² + 2μ + 1`.
pub fn polish_plate_roots(seeds: [(f64, f64); 3]) -> [Cdd; 3] {
    let one = Cdd::ONE;
    let two = Cdd::new(2.0, 0.0);
    let three = Cdd::new(3.0, 0.0);
    seeds.map(|(re, im)| {
        let mut z = Cdd::new(re, im);
        for _ in 0..4 {
            let p = ((z + one) * z + two) * z + one;
            let dp = (three * z + two) * z + two;
            z = z - p / dp;
        }
        z
    })
}

/// `K̂₁(t, r) = Σᵢ −(λⱼ + λₖ) e^{λᵢt} / ((λᵢ − λⱼ)(λᵢ − λₖ))`, `λ = μr²`,
/// evaluated entirely in double-double.
pub fn naive_k1(mu: [Cdd; 3], t: f64, r: f64) -> f64 {
    let r2 = Dd::from_f64(r) * Dd::from_f64(r);
    let lambda = mu.map(|m| m.scale(r2));
    let tt = Dd::from_f64(t);
    let mut sum = Cdd::ZERO;
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let w = -(lambda[j] + lambda[k]) / ((lambda[i] - lambda[j]) * (lambda[i] - lambda[k]));
        sum = sum + w * lambda[i].scale(tt).exp();
    }
    sum.re.to_f64()
}
