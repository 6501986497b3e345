use proptest::prelude::*;

use thermoplate::kernels::{EvalMode, Kernel, KernelSet};
use thermoplate::quadrature::{l2_norm, NormTask, RadialData, Zone};
use thermoplate::reduction::{distinct_roots, lagrange_solution, symbol_1d, Thermo1dParams};
use thermoplate::roots::characteristic_roots_general;
use thermoplate::Complex;

fn complex() -> impl Strategy<Value = Complex> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex::new(a, b))
}

fn triple() -> impl Strategy<Value = [Complex; 3]> {
    [complex(), complex(), complex()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn vieta_identities(c2 in -20.0..20.0f64, c1 in -20.0..20.0f64, c0 in -20.0..20.0f64) {
        let z = characteristic_roots_general(c2, c1, c0).unwrap();
        let scale = 1.0 + z.iter().map(|x| x.abs()).fold(0.0, f64::max).powi(3);
        let e1 = z[0] + z[1] + z[2];
        let e2 = z[0] * z[1] + z[0] * z[2] + z[1] * z[2];
        let e3 = z[0] * z[1] * z[2];
        prop_assert!((e1 + c2).abs() <= 1e-10 * scale);
        prop_assert!((e2 - c1).abs() <= 1e-10 * scale);
        prop_assert!((e3 + c0).abs() <= 1e-10 * scale);
    }

    #[test]
    fn kernel_interpolation_at_zero(r in 0.01..5.0f64) {
        let ks = KernelSet::plate(EvalMode::Stabilized).unwrap();
        for k in Kernel::ALL {
            for m in 0..3u32 {
                let want = if k.index() == m as usize { 1.0 } else { 0.0 };
                prop_assert!((ks.eval_kernel_dt(k, m, 0.0, r) - Complex::real(want)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn superposition(t in 0.0..100.0f64, r in 0.01..4.0f64, a in triple(), b in triple(), x in -3.0..3.0f64) {
        let ks = KernelSet::plate(EvalMode::Stabilized).unwrap();
        let combo: [Complex; 3] = std::array::from_fn(|i| a[i] * x + b[i]);
        let (ua, ta) = ks.solution_hat(t, r, a);
        let (ub, tb) = ks.solution_hat(t, r, b);
        let (uc, tc) = ks.solution_hat(t, r, combo);
        let scale = 1.0 + x.abs() * (ua.abs() + ta.abs()) + ub.abs() + tb.abs();
        prop_assert!((uc - ua * x - ub).abs() <= 1e-13 * scale);
        prop_assert!((tc - ta * x - tb).abs() <= 1e-13 * scale);
    }

    #[test]
    fn reduced_lagrange_interpolation(
        alpha in 0.2..3.0f64, kappa in 0.2..3.0f64, g1 in 0.1..2.0f64, g2 in 0.1..2.0f64,
        r in 0.1..3.0f64, data in triple(),
    ) {
        let s = symbol_1d(&Thermo1dParams::new(alpha, kappa, g1, g2).unwrap());
        prop_assume!(distinct_roots(&s, r).is_ok());
        let y = lagrange_solution(&s, 0.0, r, data).unwrap();
        let y0 = s.reduced_data(r, data);
        let scale = 1.0 + y0.iter().map(|z| z.abs()).fold(0.0, f64::max);
        for m in 0..3 {
            prop_assert!((y[m] - y0[m]).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn quadrature_refinement_is_stable(n in 1u32..=5, log_t in 0.0..6.0f64) {
        let ks = KernelSet::plate(EvalMode::Stabilized).unwrap();
        let t = 10f64.powf(log_t);
        let mult = |t: f64, r: f64| ks.eval_kernel(Kernel::K1, t, r);
        let a2 = ks.roots().a2;
        let norm = |tol: f64, r_max: f64| {
            let task = NormTask::new(n, mult, RadialData::constant(1.0), Zone::Inner)
                .with_oscillation(a2)
                .with_r_max(r_max)
                .with_tol(tol);
            l2_norm(&task, t).unwrap().norm
        };
        let coarse = norm(1e-8, 0.1);
        let fine = norm(1e-11, 0.1);
        prop_assert!((coarse - fine).abs() <= 1e-7 * fine);
    }
}
