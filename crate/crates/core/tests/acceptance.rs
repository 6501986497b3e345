//! End-to-end acceptance checks. Every criterion prints one line
//!
//! ```text
//! [criterion N] PASS|FAIL  <measured quantities>
//! ```
//!
//! to stderr (bypassing the test harness capture) and then asserts.

mod common;

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::dd;
use thermoplate::kernels::{EvalMode, Kernel, KernelSet};
use thermoplate::oracle::{integrate, integrate_third_order, integrate_trajectory, reduced_data, FrequencyODE};
use thermoplate::presets::{gaussian, mean_zero, preset_data, DataTriple, Preset};
use thermoplate::quadrature::{l2_norm, NormTask, RadialData, Zone};
use thermoplate::rates::{dyadic_grid, Regime, Sweeper};
use thermoplate::roots::{alpha_pm, characteristic_roots_general, solve_characteristic_cubic};
use thermoplate::singular_limit::{default_t_grid, energy, epsilon_grid, fit_epsilon_slope, EpsilonState, ErrorExperiment, Order};
use thermoplate::Complex;

// Tolerances pinned from the acceptance criteria.
const CONST_TOL: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-7;
const REDUCTION_TOL: f64 = 1e-7;
const RATE_TOL: f64 = 0.05;
const PROFILE_TOL: f64 = 0.07;
const SLOPE_TOL: f64 = 0.1;
const DISSIPATION_TOL: f64 = 1e-8;
const STABILIZED_TOL: f64 = 1e-9;
const NAIVE_MIN_LOSS_DIGITS: f64 = 6.0;

fn report(id: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "[criterion {id:>2}] {verdict}  {detail}");
}

fn rel_err(a: Complex, b: Complex) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / b.abs()
    }
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[test]
fn criterion_01_constants() {
    let roots = solve_characteristic_cubic().unwrap();
    let (ap, am) = alpha_pm();
    let radical = [(1.0 + am) / 3.0, (2.0 - am) / 6.0, 3f64.sqrt() * ap / 6.0];
    let solver = [roots.a0, roots.a1, roots.a2];
    let dev = solver.iter().zip(&radical).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let quoted = [0.57, 0.22, 1.31];
    let decimals_ok = solver.iter().zip(&quoted).all(|(a, q)| round2(*a) == *q);
    let pass = dev <= CONST_TOL && decimals_ok;
    report(
        1,
        pass,
        &format!("a = ({:.15}, {:.15}, {:.15}), radical deviation {dev:.1e}", solver[0], solver[1], solver[2]),
    );
    assert!(pass);
}

fn random_triple(rng: &mut ChaCha8Rng) -> [Complex; 3] {
    std::array::from_fn(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// 10 times in `[0, 20]` × 5 radii log-spaced in `[0.05, 5]`.
fn tr_grid() -> Vec<(f64, f64)> {
    let ts: Vec<f64> = (0..10).map(|k| 20.0 * k as f64 / 9.0).collect();
    let rs: Vec<f64> = (0..5).map(|k| 0.05 * 10f64.powf(k as f64 / 2.0)).collect();
    ts.iter().flat_map(|&t| rs.iter().map(move |&r| (t, r))).collect()
}

#[test]
fn criterion_02_oracle_equivalence() {
    let ks = KernelSet::plate(EvalMode::Stabilized).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57);
    let mut worst = 0.0f64;
    let mut points = 0;
    for _ in 0..3 {
        let data = random_triple(&mut rng);
        for (t, r) in tr_grid() {
            let (u, th) = ks.solution_hat(t, r, data);
            let y = integrate(&FrequencyODE::from_data(r, 1.0, data).unwrap(), t, 1e-3).unwrap();
            worst = worst.max(rel_err(u, y[0])).max(rel_err(th, y[2]));
            points += 1;
        }
    }
    let pass = worst <= ORACLE_TOL;
    report(2, pass, &format!("{points} (t, r, data) points, max relative error {worst:.2e}"));
    assert!(pass);
}

#[test]
fn criterion_03_reduction_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3e0);
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let data = random_triple(&mut rng);
        for (t, r) in tr_grid() {
            let coupled = integrate(&FrequencyODE::from_data(r, 1.0, data).unwrap(), t, 1e-3).unwrap();
            let third = integrate_third_order(r, t, reduced_data(r, data)).unwrap();
            worst = worst.max(rel_err(coupled[0], third[0])).max(rel_err(coupled[1], third[1]));
        }
    }
    let pass = worst <= REDUCTION_TOL;
    report(3, pass, &format!("coupled (ε = 1) vs third-order, max relative error {worst:.2e}"));
    assert!(pass);
}

#[test]
fn criterion_04_large_time_rates() {
    let sweeper = Sweeper::plate().unwrap();
    let data = preset_data(Preset::ConstantProfile);
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 1..=6u32 {
        let [u, th] = sweeper.solution_rates(n, &data, &dyadic_grid()).unwrap();
        let (tu, tth) = (1.0 - n as f64 / 4.0, -(n as f64) / 4.0);
        let ok = (u.exponent - tu).abs() <= RATE_TOL && (th.exponent - tth).abs() <= RATE_TOL;
        pass &= ok;
        if n == 4 {
            pass &= Regime::from_exponent(u.exponent) == Regime::Bounded && u.exponent.abs() <= RATE_TOL;
        }
        parts.push(format!("n={n}: u {:+.4} θ {:+.4}", u.exponent, th.exponent));
    }
    report(4, pass, &parts.join(", "));
    assert!(pass);
}

#[test]
fn criterion_05_profile_improvement() {
    let sweeper = Sweeper::plate().unwrap();
    let data = DataTriple::new(gaussian(), gaussian(), mean_zero());
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 1..=4u32 {
        let [sol, _] = sweeper.solution_rates(n, &data, &dyadic_grid()).unwrap();
        let [err, _] = sweeper.profile_error_rates(n, &data, &dyadic_grid()).unwrap();
        let target = 0.5 - n as f64 / 4.0;
        let gain = err.exponent - sol.exponent;
        pass &= (err.exponent - target).abs() <= PROFILE_TOL && (gain + 0.5).abs() <= PROFILE_TOL;
        parts.push(format!("n={n}: error {:+.4} gain {:+.4}", err.exponent, gain));
    }
    report(5, pass, &parts.join(", "));
    assert!(pass);
}

fn epsilon_slopes(n: u32, data: &DataTriple, order: Order, include_l2: bool) -> (f64, Option<f64>) {
    let eps = epsilon_grid();
    let grid = default_t_grid();
    let mut e_vals = Vec::new();
    let mut l_vals = Vec::new();
    for &e in &eps {
        let rep = ErrorExperiment::new(e, n, data, order).with_l2(include_l2).run(&grid).unwrap();
        e_vals.push(rep.energy.value);
        if let Some(l2) = rep.l2 {
            l_vals.push(l2.value);
        }
    }
    let energy = fit_epsilon_slope(&eps, &e_vals).unwrap().exponent;
    let l2 = include_l2.then(|| fit_epsilon_slope(&eps, &l_vals).unwrap().exponent);
    (energy, l2)
}

#[test]
fn criterion_06_first_order_singular_limit() {
    let energy_data = DataTriple::new(gaussian(), RadialData::zero(), RadialData::zero());
    let (energy_slope, _) = epsilon_slopes(2, &energy_data, Order::First, false);
    let l2_data = DataTriple::new(gaussian(), mean_zero(), mean_zero().scaled(0.5));
    let (_, l2_slope) = epsilon_slopes(3, &l2_data, Order::First, true);
    let l2_slope = l2_slope.unwrap();
    let pass = (energy_slope - 1.0).abs() <= SLOPE_TOL && (l2_slope - 1.0).abs() <= SLOPE_TOL;
    report(6, pass, &format!("energy slope {energy_slope:.4} (n = 2), L² slope {l2_slope:.4} (n = 3)"));
    assert!(pass);
}

#[test]
fn criterion_07_second_order_singular_limit() {
    let data = DataTriple::new(gaussian(), mean_zero(), mean_zero().scaled(-1.0));
    let (energy_slope, l2_slope) = epsilon_slopes(3, &data, Order::Second, true);
    let l2_slope = l2_slope.unwrap();
    let pass = (energy_slope - 2.0).abs() <= SLOPE_TOL && (l2_slope - 2.0).abs() <= SLOPE_TOL;
    report(7, pass, &format!("energy slope {energy_slope:.4}, L² slope {l2_slope:.4} (n = 3, θ₀ = −u₁)"));
    assert!(pass);
}

#[test]
fn criterion_08_energy_dissipation() {
    let data = [Complex::ONE, Complex::new(0.4, -0.2), Complex::real(-0.7)];
    let mut worst_increase = 0.0f64;
    let mut steps = 0usize;
    for eps in [0.5, 0.1, 0.01] {
        for r in [0.1, 1.0, 5.0] {
            let ode = FrequencyODE::from_data(r, eps, data).unwrap();
            let t_end = 20.0 / (r * r);
            let mut prev = energy(&EpsilonState::from_coupled(eps, r, &data).unwrap()).unwrap();
            integrate_trajectory(&ode, t_end, 1e-3 * eps / (r * r), |_, y| {
                let e = energy(&EpsilonState::from_coupled(eps, r, y).unwrap()).unwrap();
                worst_increase = worst_increase.max((e - prev) / prev.max(f64::MIN_POSITIVE));
                prev = e;
                steps += 1;
            })
            .unwrap();
        }
    }
    let pass = worst_increase <= DISSIPATION_TOL;
    report(8, pass, &format!("{steps} accepted steps, largest relative increase {worst_increase:.2e}"));
    assert!(pass);
}

#[test]
fn criterion_09_kernel_stabilization() {
    let (t, r) = (1e4, 1e-4);
    let stable = KernelSet::plate(EvalMode::Stabilized).unwrap();
    let naive = stable.with_mode(EvalMode::LagrangeSum);
    let roots = stable.roots();
    let mu = roots.mu();
    let reference = dd::naive_k1(dd::polish_plate_roots(mu.map(|z| (z.re, z.im))), t, r);
    let k_stable = stable.eval_kernel(Kernel::K1, t, r).re;
    let k_naive = naive.lagrange_sum(Kernel::K1, 0, t, r).re;
    let stable_err = ((k_stable - reference) / reference).abs();
    let naive_err = ((k_naive - reference) / reference).abs();
    let lost = (naive_err / f64::EPSILON).max(1.0).log10();
    let pass = stable_err <= STABILIZED_TOL && lost >= NAIVE_MIN_LOSS_DIGITS;
    report(
        9,
        pass,
        &format!(
            "K̂₁ = {reference:.12e}; stabilized rel err {stable_err:.1e}, naive rel err {naive_err:.1e} ({lost:.2} digits lost, need ≥ {NAIVE_MIN_LOSS_DIGITS})"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_10_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let ks = KernelSet::plate(EvalMode::Stabilized).unwrap();

    let mut vieta = 0.0f64;
    for _ in 0..200 {
        let (c2, c1, c0): (f64, f64, f64) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let z = characteristic_roots_general(c2, c1, c0).unwrap();
        let e1 = z[0] + z[1] + z[2];
        let e2 = z[0] * z[1] + z[0] * z[2] + z[1] * z[2];
        let e3 = z[0] * z[1] * z[2];
        let scale = 1.0 + z.iter().map(|x| x.abs()).fold(0.0, f64::max).powi(3);
        let res = (e1 + c2).abs().max((e2 - c1).abs()).max((e3 + c0).abs()) / scale;
        vieta = vieta.max(res);
    }

    let mut interp = 0.0f64;
    for _ in 0..50 {
        let r = rng.random_range(0.01..5.0);
        for k in Kernel::ALL {
            for m in 0..3u32 {
                let want = if k.index() == m as usize { 1.0 } else { 0.0 };
                let v = ks.eval_kernel_dt(k, m, 0.0, r);
                interp = interp.max((v - Complex::real(want)).abs() / r.powi(2 * (m as i32 - k.index() as i32)).max(1.0));
            }
        }
    }

    let mut linear = 0.0f64;
    for _ in 0..50 {
        let (t, r) = (rng.random_range(0.0..50.0), rng.random_range(0.01..5.0));
        let (a, b) = (random_triple(&mut rng), random_triple(&mut rng));
        let (x, y) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let combo: [Complex; 3] = std::array::from_fn(|i| a[i] * x + b[i] * y);
        let (ua, ta) = ks.solution_hat(t, r, a);
        let (ub, tb) = ks.solution_hat(t, r, b);
        let (uc, tc) = ks.solution_hat(t, r, combo);
        let scale = 1.0 + ua.abs() + ub.abs() + ta.abs() + tb.abs();
        linear = linear.max(((uc - ua * x - ub * y).abs() + (tc - ta * x - tb * y).abs()) / scale);
    }

    let mut refinement = 0.0f64;
    let data = preset_data(Preset::Gaussian);
    for n in 1..=4u32 {
        for t in [1.0, 1e3, 1e6] {
            let mult = |t: f64, r: f64| ks.solution_hat(t, r, [Complex::ONE, Complex::ONE, Complex::ONE]).0;
            let coarse = l2_norm(&NormTask::new(n, mult, data.u0.clone(), Zone::Inner).with_oscillation(ks.roots().a2).with_tol(1e-8), t).unwrap();
            let fine = l2_norm(&NormTask::new(n, mult, data.u0.clone(), Zone::Inner).with_oscillation(ks.roots().a2).with_tol(1e-11), t).unwrap();
            refinement = refinement.max((coarse.norm - fine.norm).abs() / fine.norm);
        }
    }

    let pass = vieta <= 1e-10 && interp <= 1e-12 && linear <= 1e-13 && refinement <= 1e-7;
    report(
        10,
        pass,
        &format!("Vieta {vieta:.1e}, interpolation {interp:.1e}, superposition {linear:.1e}, refinement {refinement:.1e}"),
    );
    assert!(pass);
}
