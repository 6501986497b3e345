//! One function per subcommand, each producing a [`Table`]. Sweep points
//! are evaluated in parallel and collected in input order.

use rayon::prelude::*;

use thermoplate::kernels::{EvalMode, Kernel, KernelSet};
use thermoplate::oracle::{integrate, integrate_thermoelastic_1d, FrequencyODE};
use thermoplate::presets::DataTriple;
use thermoplate::profiles::Profiles;
use thermoplate::rates::{Regime, Sweeper};
use thermoplate::reduction::{lagrange_solution, symbol_1d, Thermo1dParams};
use thermoplate::roots::solve_characteristic_cubic;
use thermoplate::singular_limit::{fit_epsilon_slope, ErrorExperiment, ErrorReport, Order};
use thermoplate::{preset_data, Complex, Preset};

use crate::config::{Experiment, RunConfig};
use crate::error::{CliError, Context};
use crate::format::{g15, Table};

/// Exponents within this distance of the target count as reproduced.
pub const RATE_TOL: f64 = 0.05;

fn rel_err(a: Complex, b: Complex) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / b.abs()
    }
}

fn nonempty(xs: &[f64], what: &str) -> Result<(), CliError> {
    if xs.is_empty() {
        return Err(CliError::Usage(format!("{what} list is empty")));
    }
    Ok(())
}

fn collect_rows(rows: Vec<Result<Vec<Vec<String>>, CliError>>, table: &mut Table) -> Result<(), CliError> {
    for chunk in rows {
        for row in chunk? {
            table.push(row);
        }
    }
    Ok(())
}

fn grid2(ts: &[f64], rs: &[f64]) -> Vec<(f64, f64)> {
    ts.iter().flat_map(|&t| rs.iter().map(move |&r| (t, r))).collect()
}

pub fn roots() -> Result<Table, CliError> {
    let c = solve_characteristic_cubic().context(|| "solving the characteristic cubic".into())?;
    let mut t = Table::new("roots", &["quantity", "value"]);
    let items = [
        ("a0", c.a0),
        ("a1", c.a1),
        ("a2", c.a2),
        ("alpha_plus", c.alpha_plus),
        ("alpha_minus", c.alpha_minus),
        ("mu1", c.mu_real),
        ("mu23_re", c.mu_complex_re),
        ("mu23_im", c.mu_complex_im),
        ("vieta_residual", c.vieta_residual()),
    ];
    for (k, v) in items {
        t.push(vec![k.into(), g15(v)]);
    }
    Ok(t)
}

pub fn kernels(ts: &[f64], rs: &[f64], mode: EvalMode) -> Result<Table, CliError> {
    nonempty(ts, "t")?;
    nonempty(rs, "r")?;
    let ks = KernelSet::plate(mode).context(|| "building kernels".into())?;
    let mut table = Table::new("kernels", &["t", "r", "k0", "k1", "k2"]);
    let rows: Vec<_> = grid2(ts, rs)
        .par_iter()
        .map(|&(t, r)| {
            let mut row = vec![g15(t), g15(r)];
            for k in Kernel::ALL {
                let v = if mode == EvalMode::LagrangeSum {
                    ks.lagrange_sum(k, 0, t, r)
                } else {
                    ks.eval_kernel(k, t, r)
                };
                row.push(g15(v.re));
            }
            Ok(vec![row])
        })
        .collect();
    collect_rows(rows, &mut table)?;
    Ok(table)
}

pub fn profiles(ts: &[f64], rs: &[f64]) -> Result<Table, CliError> {
    nonempty(ts, "t")?;
    nonempty(rs, "r")?;
    let pr = Profiles::plate().context(|| "building profiles".into())?;
    let mut table = Table::new("profiles", &["t", "r", "j0", "j1", "j2", "j3"]);
    let rows: Vec<_> = grid2(ts, rs)
        .par_iter()
        .map(|&(t, r)| {
            let mut row = vec![g15(t), g15(r)];
            for j in 0..4 {
                row.push(g15(pr.eval_j(j, t, r).context(|| format!("J{j} at t={t}, r={r}"))?));
            }
            Ok(vec![row])
        })
        .collect();
    collect_rows(rows, &mut table)?;
    Ok(table)
}

fn sweeper(tol: f64) -> Result<Sweeper, CliError> {
    Ok(Sweeper::plate().context(|| "building the rate sweeper".into())?.with_tol(tol))
}

fn check_dims(dims: &[u32]) -> Result<(), CliError> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(CliError::Usage("dimensions must be a nonempty list of integers ≥ 1".into()));
    }
    Ok(())
}

/// `‖u(t)‖` exponents against `1 − n/4`.
pub fn rates(dims: &[u32], data: &DataTriple, grid: &[f64], tol: f64) -> Result<Table, CliError> {
    check_dims(dims)?;
    let sw = sweeper(tol)?;
    let mut table = Table::new("rates", &["n", "target_exponent", "fitted_exponent", "residual", "verdict"]);
    let rows: Vec<_> = dims
        .par_iter()
        .map(|&n| {
            let [u, _] = sw.solution_rates(n, data, grid).context(|| format!("rate sweep in n = {n}"))?;
            let target = 1.0 - n as f64 / 4.0;
            let residual = u.exponent - target;
            let verdict = if residual.abs() <= RATE_TOL { "pass" } else { "fail" };
            Ok(vec![vec![n.to_string(), g15(target), g15(u.exponent), g15(residual), verdict.into()]])
        })
        .collect();
    collect_rows(rows, &mut table)?;
    Ok(table)
}

/// Dimensions grouped by measured regime (growth, bounded, decay).
pub fn table1(dims: &[u32], grid: &[f64], tol: f64) -> Result<Table, CliError> {
    check_dims(dims)?;
    let sw = sweeper(tol)?;
    let data = preset_data(Preset::ConstantProfile);
    let fits: Vec<Result<(u32, f64), CliError>> = dims
        .par_iter()
        .map(|&n| {
            let [u, _] = sw.solution_rates(n, &data, grid).context(|| format!("rate sweep in n = {n}"))?;
            Ok((n, u.exponent))
        })
        .collect();
    let fits = fits.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(
        "table1",
        &["regime", "dimensions", "fitted_exponents", "theoretical_exponents"],
    );
    for regime in [Regime::Growth, Regime::Bounded, Regime::Decay] {
        let members: Vec<&(u32, f64)> = fits.iter().filter(|(_, e)| Regime::from_exponent(*e) == regime).collect();
        if members.is_empty() {
            continue;
        }
        let join = |f: &dyn Fn(&(u32, f64)) -> String| members.iter().map(|m| f(m)).collect::<Vec<_>>().join(" ");
        table.push(vec![
            regime.to_string(),
            join(&|m| m.0.to_string()),
            join(&|m| g15(m.1)),
            join(&|m| g15(1.0 - m.0 as f64 / 4.0)),
        ]);
    }
    Ok(table)
}

/// Profile-error exponents against `½ − n/4` (u) and `−½ − n/4` (θ).
pub fn profile_error(dims: &[u32], data: &DataTriple, grid: &[f64], tol: f64) -> Result<Table, CliError> {
    check_dims(dims)?;
    let sw = sweeper(tol)?;
    let mut table = Table::new(
        "profile_error",
        &["n", "branch", "target_exponent", "fitted_exponent", "solution_exponent", "improvement"],
    );
    let rows: Vec<_> = dims
        .par_iter()
        .map(|&n| {
            let sol = sw.solution_rates(n, data, grid).context(|| format!("solution sweep in n = {n}"))?;
            let err = sw.profile_error_rates(n, data, grid).context(|| format!("profile-error sweep in n = {n}"))?;
            let q = n as f64 / 4.0;
            let targets = [0.5 - q, -0.5 - q];
            Ok((0..2)
                .map(|b| {
                    vec![
                        n.to_string(),
                        ["u", "theta"][b].into(),
                        g15(targets[b]),
                        g15(err[b].exponent),
                        g15(sol[b].exponent),
                        g15(err[b].exponent - sol[b].exponent),
                    ]
                })
                .collect())
        })
        .collect();
    collect_rows(rows, &mut table)?;
    Ok(table)
}

pub struct SingularLimitRun {
    pub table: Table,
    pub energy_slope: Option<f64>,
    pub l2_slope: Option<f64>,
}

pub fn singular_limit(
    n: u32,
    data: &DataTriple,
    order: Order,
    include_l2: bool,
    epsilons: &[f64],
    t_grid: &[f64],
    tol: f64,
) -> Result<SingularLimitRun, CliError> {
    nonempty(epsilons, "ε")?;
    nonempty(t_grid, "t")?;
    check_dims(&[n])?;
    let order_name = match order {
        Order::First => "first",
        Order::Second => "second",
    };
    let reports: Vec<Result<ErrorReport, CliError>> = epsilons
        .par_iter()
        .map(|&eps| {
            ErrorExperiment::new(eps, n, data, order)
                .with_l2(include_l2)
                .with_tol(tol)
                .with_threads(1)
                .run(t_grid)
                .context(|| format!("{order_name}-order error at ε = {eps}, n = {n}"))
        })
        .collect();
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(
        "singular_limit",
        &["epsilon", "order", "n", "sup_energy", "t_energy", "sup_l2", "t_l2"],
    );
    for r in &reports {
        let (l2, tl2) = r.l2.map(|s| (g15(s.value), g15(s.t_at_sup))).unwrap_or_default();
        table.push(vec![
            g15(r.epsilon),
            order_name.into(),
            n.to_string(),
            g15(r.energy.value),
            g15(r.energy.t_at_sup),
            l2,
            tl2,
        ]);
    }
    let slope = |vals: Vec<f64>| fit_epsilon_slope(epsilons, &vals).ok().map(|f| f.exponent);
    let energy_slope = slope(reports.iter().map(|r| r.energy.value).collect());
    let l2_slope = if include_l2 {
        slope(reports.iter().filter_map(|r| r.l2.map(|s| s.value)).collect())
    } else {
        None
    };
    Ok(SingularLimitRun { table, energy_slope, l2_slope })
}

/// Closed-form solution against the RK4 oracle at ε = 1.
pub fn oracle_compare(ts: &[f64], rs: &[f64], data: &DataTriple) -> Result<Table, CliError> {
    nonempty(ts, "t")?;
    nonempty(rs, "r")?;
    let ks = KernelSet::plate(EvalMode::Stabilized).context(|| "building kernels".into())?;
    let mut table = Table::new(
        "oracle_compare",
        &["t", "r", "u_closed", "u_oracle", "rel_err_u", "theta_closed", "theta_oracle", "rel_err_theta"],
    );
    let rows: Vec<_> = grid2(ts, rs)
        .par_iter()
        .map(|&(t, r)| {
            let d = data.at(r);
            let (u, th) = ks.solution_hat(t, r, d);
            let ode = FrequencyODE::from_data(r, 1.0, d).context(|| format!("oracle at r={r}"))?;
            let y = integrate(&ode, t, 1e-3).context(|| format!("oracle at t={t}, r={r}"))?;
            Ok(vec![vec![
                g15(t),
                g15(r),
                g15(u.re),
                g15(y[0].re),
                g15(rel_err(u, y[0])),
                g15(th.re),
                g15(y[2].re),
                g15(rel_err(th, y[2])),
            ]])
        })
        .collect();
    collect_rows(rows, &mut table)?;
    Ok(table)
}

/// Roots of the reduced 1D cubic and the Lagrange-sum displacement, checked
/// against the RK4 oracle of the coupled system.
pub fn thermo1d(p: &Thermo1dParams, rs: &[f64], ts: &[f64], data: &DataTriple) -> Result<Table, CliError> {
    nonempty(ts, "t")?;
    nonempty(rs, "r")?;
    let symbol = symbol_1d(p);
    let mut table = Table::new(
        "thermo1d",
        &["r", "t", "root1_re", "root1_im", "root2_re", "root2_im", "root3_re", "root3_im", "u_re", "u_im", "oracle_rel_err"],
    );
    let rows: Vec<_> = grid2(rs, ts)
        .par_iter()
        .map(|&(r, t)| {
            let roots = symbol.roots_at(r).context(|| format!("reduced roots at r={r}"))?;
            let d = data.at(r);
            let y = lagrange_solution(&symbol, t, r, d).context(|| format!("Lagrange solution at r={r}, t={t}"))?;
            let o = integrate_thermoelastic_1d(p, r, t, d).context(|| format!("1D oracle at r={r}, t={t}"))?;
            let mut row = vec![g15(r), g15(t)];
            for z in roots {
                row.push(g15(z.re));
                row.push(g15(z.im));
            }
            row.extend([g15(y[0].re), g15(y[0].im), g15(rel_err(y[0], o[0]))]);
            Ok(vec![row])
        })
        .collect();
    collect_rows(rows, &mut table)?;
    Ok(table)
}

/// Executes the experiment described by a run configuration.
pub fn run(cfg: &RunConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let data = preset_data(cfg.preset);
    let grid = cfg.t_grid.points();
    match cfg.experiment {
        Experiment::Rates => rates(&cfg.dims, &data, &grid, cfg.tol),
        Experiment::Table1 => table1(&cfg.dims, &grid, cfg.tol),
        Experiment::ProfileError => profile_error(&cfg.dims, &data, &grid, cfg.tol),
        Experiment::SingularLimit => {
            let mut table: Option<Table> = None;
            for &n in &cfg.dims {
                let t = singular_limit(n, &data, Order::First, false, &cfg.eps_grid.points(), &grid, cfg.tol)?.table;
                match &mut table {
                    None => table = Some(t),
                    Some(acc) => acc.rows.extend(t.rows),
                }
            }
            Ok(table.expect("dims validated nonempty"))
        }
    }
}
