//! Task bodies. Each one appends rows to a table and collects headline numbers.

use std::sync::Arc;

use lieharm::checks::CheckReport;
use lieharm::multiplier::{boundedness_sweep_multi, ensemble_member, log2_slope};
use lieharm::spaces::lp_project;
use lieharm::transform::plancherel_norm;
use lieharm::*;

use crate::config::{CheckOptions, Condition, ExperimentConfig, Task};
use crate::report::{Cell, Table};
use crate::CliError;

/// Headline numbers and tolerance violations of a run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub summary: Vec<(String, f64)>,
    pub violations: Vec<String>,
}

impl Outcome {
    fn judge(&mut self, name: &str, value: f64, limit: Option<f64>) -> Option<bool> {
        let limit = limit?;
        let ok = value <= limit;
        if !ok {
            self.violations.push(format!("{name} = {value:e} exceeds {limit:e}"));
        }
        Some(ok)
    }
}

pub fn columns(task: Task) -> &'static [&'static str] {
    match task {
        Task::Transform => &["group", "lambda", "member", "roundtrip_error", "plancherel_rel_error", "passed"],
        Task::CheckSymbol => &["group", "symbol", "lambda", "condition", "constant", "value", "threshold", "passed"],
        Task::TlNorm => &["group", "lambda", "member", "r", "p", "q", "norm", "value"],
        Task::KernelDecay => &["group", "symbol", "lambda", "level", "c", "z_distance", "integral"],
        Task::BoundSweep => {
            &["group", "symbol", "r", "p", "q", "lambda", "max_ratio", "argmax_member", "seed", "l2_operator_norm"]
        }
        Task::Selftest => &["check", "value", "tolerance", "passed"],
    }
}

pub fn run_task(config: &ExperimentConfig, table: &mut Table, outcome: &mut Outcome) -> Result<(), CliError> {
    match config.task {
        Task::Transform => transform(config, table, outcome),
        Task::CheckSymbol => check_symbol(config, table, outcome),
        Task::TlNorm => tl_norm(config, table, outcome),
        Task::KernelDecay => kernel_decay(config, table, outcome),
        Task::BoundSweep => bound_sweep(config, table, outcome),
        Task::Selftest => selftest(config, table, outcome),
    }
}

fn slice(config: &ExperimentConfig, group: &GroupDescriptor, entry: f64) -> Result<Arc<Slice>, CliError> {
    Ok(Arc::new(enumerate_dual(group, config.cutoff_value(group, entry)?)?))
}

fn oversampled_grid(dual: &Slice, factor: u32) -> Arc<Grid> {
    Arc::new(build_grid(&dual.group(), Bandlimit::from_twice(dual.extent().twice() * factor)))
}

/// Round-trip and Plancherel errors of one function.
fn transform_errors(f: &Coefficients, grid: &Arc<Grid>) -> Result<(f64, f64), CliError> {
    let samples = inverse_on_grid(f, grid)?;
    let back = forward_transform(&samples, f.dual())?;
    let norm = plancherel_norm(f);
    let rel = (samples.l2_norm() - norm).abs() / norm.max(f64::MIN_POSITIVE);
    Ok((back.max_abs_diff(f)?, rel))
}

fn transform(config: &ExperimentConfig, table: &mut Table, outcome: &mut Outcome) -> Result<(), CliError> {
    let group = config.group_descriptor()?;
    let ensemble = config.ensemble.expect("validated");
    let (tol_rt, tol_pl) = (config.tolerance("roundtrip"), config.tolerance("plancherel"));
    let (mut worst_rt, mut worst_pl) = (0.0f64, 0.0f64);
    for &entry in &config.cutoffs {
        let dual = slice(config, &group, entry)?;
        let grid = oversampled_grid(&dual, ensemble.oversample);
        let id = Symbol::identity(&dual);
        for member in 0..ensemble.count {
            let f = ensemble_member(ensemble.kind, &id, config.seed, member)?;
            let (rt, pl) = transform_errors(&f, &grid)?;
            let passed = match (tol_rt, tol_pl) {
                (None, None) => None,
                _ => Some(tol_rt.is_none_or(|t| rt <= t) && tol_pl.is_none_or(|t| pl <= t)),
            };
            table.push(vec![group.name().into(), entry.into(), member.into(), rt.into(), pl.into(), passed.into()]);
            worst_rt = worst_rt.max(rt);
            worst_pl = worst_pl.max(pl);
        }
    }
    outcome.judge("roundtrip", worst_rt, tol_rt);
    outcome.judge("plancherel", worst_pl, tol_pl);
    outcome.summary.push(("max_roundtrip_error".into(), worst_rt));
    outcome.summary.push(("max_plancherel_rel_error".into(), worst_pl));
    Ok(())
}

fn check_symbol(config: &ExperimentConfig, table: &mut Table, outcome: &mut Outcome) -> Result<(), CliError> {
    let group = config.group_descriptor()?;
    let opts = config.check.clone().unwrap_or_default();
    let default_order = group.marcinkiewicz_order() as u32;
    for spec in &config.symbols {
        for &entry in &config.cutoffs {
            let dual = slice(config, &group, entry)?;
            let sigma = spec.build(&dual)?;
            for &condition in &opts.conditions {
                let report = run_check(&sigma, condition, &opts, default_order)?;
                let threshold = config.tolerance(condition.name());
                let name = format!("{}/{}/lambda={entry}", spec.name(), condition.name());
                let passed = outcome.judge(&name, report.headline, threshold);
                let row = |constant: &str, value: f64, threshold: Option<f64>, passed: Option<bool>| -> Vec<Cell> {
                    vec![
                        group.name().into(),
                        spec.name().into(),
                        entry.into(),
                        condition.name().into(),
                        constant.into(),
                        value.into(),
                        threshold.map_or(Cell::Text(String::new()), Cell::Real),
                        passed.into(),
                    ]
                };
                for (constant, value) in &report.constants {
                    table.push(row(constant, *value, None, None));
                }
                if let Some(trusted) = report.trusted_headline {
                    table.push(row("trusted_headline", trusted, None, None));
                }
                table.push(row("headline", report.headline, threshold, passed));
                outcome.summary.push((name, report.headline));
            }
        }
    }
    Ok(())
}

fn run_check(sigma: &Symbol64, condition: Condition, opts: &CheckOptions, order: u32) -> Result<CheckReport<f64>, CliError> {
    Ok(match condition {
        Condition::Marcinkiewicz => check_marcinkiewicz(sigma, opts.order.unwrap_or(order))?,
        Condition::HormanderMihlin => check_hormander_mihlin(sigma, opts.s.unwrap_or(f64::from(order)), &LpPartition)?,
        Condition::WeakMarcinkiewicz => check_weak_marcinkiewicz(sigma, opts.s0)?,
    })
}

fn tl_norm(config: &ExperimentConfig, table: &mut Table, outcome: &mut Outcome) -> Result<(), CliError> {
    let group = config.group_descriptor()?;
    let ensemble = config.ensemble.expect("validated");
    let specs = config.norms.iter().map(|n| n.spec()).collect::<Result<Vec<_>, _>>()?;
    for &entry in &config.cutoffs {
        let dual = slice(config, &group, entry)?;
        let grid = oversampled_grid(&dual, ensemble.oversample);
        let id = Symbol::identity(&dual);
        let mut largest = 0.0f64;
        for member in 0..ensemble.count {
            let f = ensemble_member(ensemble.kind, &id, config.seed, member)?;
            let decomposition = LpDecomposition::new(&f, &LpPartition, &grid)?;
            let base = vec![group.name().into(), entry.into(), member.into()];
            table.push([base.clone(), vec![Cell::from(""), "".into(), "".into(), "l2".into(), plancherel_norm(&f).into()]].concat());
            for spec in &specs {
                let mut push = |kind: &str, value: f64| {
                    let tail = vec![spec.r.into(), spec.p.into(), spec.q.into(), kind.into(), value.into()];
                    table.push([base.clone(), tail].concat());
                };
                let strong = decomposition.tl_norm(spec)?;
                push("strong", strong);
                largest = largest.max(strong);
                if spec.is_weak() {
                    push("weak", decomposition.weak_tl_norm(spec)?);
                }
            }
        }
        outcome.summary.push((format!("max_strong_norm/lambda={entry}"), largest));
    }
    Ok(())
}

/// Translation at distance `d` from the identity along a fixed axis.
fn translation(group: &GroupDescriptor, d: f64) -> Result<Point, CliError> {
    if group.is_su2() {
        if d > std::f64::consts::FRAC_PI_2 {
            return Err(CliError::Config(format!("z_distance {d} exceeds pi/2 on SU(2)")));
        }
        Ok(GroupPoint::su2(0.0, 2.0 * d, 0.0))
    } else {
        let mut coords = vec![0.0; group.dim()];
        coords[0] = d / std::f64::consts::TAU;
        if coords[0] >= 0.5 {
            return Err(CliError::Config(format!("z_distance {d} exceeds pi on a torus")));
        }
        Ok(GroupPoint::torus(&coords)?)
    }
}

fn kernel_decay(config: &ExperimentConfig, table: &mut Table, outcome: &mut Outcome) -> Result<(), CliError> {
    let group = config.group_descriptor()?;
    let opts = config.kernel.clone().expect("validated");
    let spec = config.symbols[0];
    let entry = config.cutoffs[0];
    let dual = slice(config, &group, entry)?;
    let sigma = spec.build(&dual)?;
    let z = translation(&group, opts.z_distance)?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for &level in &opts.levels {
        let kernel = window_kernel(&sigma, &LpPartition, level)?;
        let grid = oversampled_grid(kernel.coeffs.dual(), opts.oversample);
        let integral = kernel_difference_integral(&kernel, &z, opts.c, &grid)?;
        table.push(vec![
            group.name().into(),
            spec.name().into(),
            entry.into(),
            level.into(),
            opts.c.into(),
            opts.z_distance.into(),
            integral.into(),
        ]);
        xs.push(f64::from(level));
        ys.push(integral);
    }
    let slope = log2_slope(&xs, &ys);
    outcome.judge("slope", slope, config.tolerance("slope"));
    outcome.summary.push(("slope".into(), slope));
    Ok(())
}

fn bound_sweep(config: &ExperimentConfig, table: &mut Table, outcome: &mut Outcome) -> Result<(), CliError> {
    let group = config.group_descriptor()?;
    let ensemble = config.ensemble.expect("validated");
    let specs = config.norms.iter().map(|n| n.spec()).collect::<Result<Vec<_>, _>>()?;
    let cutoffs = config.cutoffs.iter().map(|&c| config.cutoff_value(&group, c)).collect::<Result<Vec<_>, _>>()?;
    let l2_excess = config.tolerance("l2_excess");
    for symbol in &config.symbols {
        let l2: Vec<f64> = cutoffs
            .iter()
            .map(|&c| Ok(exact_l2_operator_norm(&symbol.build(&Arc::new(enumerate_dual(&group, c)?))?)))
            .collect::<Result<_, CliError>>()?;
        let sweeps = boundedness_sweep_multi(&group, symbol, &specs, &cutoffs, &ensemble, config.seed)?;
        for sweep in &sweeps {
            let spec = sweep.spec;
            let label = format!("{}/r={},p={},q={}", symbol.name(), spec.r, spec.p, spec.q);
            for ((row, &entry), &norm) in sweep.rows.iter().zip(&config.cutoffs).zip(&l2) {
                table.push(vec![
                    group.name().into(),
                    symbol.name().into(),
                    spec.r.into(),
                    spec.p.into(),
                    spec.q.into(),
                    entry.into(),
                    row.max_ratio.into(),
                    row.argmax_member.into(),
                    config.seed.into(),
                    norm.into(),
                ]);
                // On F⁰₂₂ the ratio can exceed the L² norm by at most √2.
                if spec.r == 0.0 && spec.p == 2.0 && spec.q == 2.0 {
                    let excess = row.max_ratio - std::f64::consts::SQRT_2 * norm;
                    outcome.judge(&format!("{label}/lambda={entry} l2 excess"), excess, l2_excess);
                }
            }
            let ratios: Vec<f64> = sweep.rows.iter().map(|r| r.max_ratio).collect();
            let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
            let variation = if lo > 0.0 { (hi - lo) / lo } else { f64::INFINITY };
            outcome.judge(&format!("{label} variation"), variation, config.tolerance("variation"));
            outcome.summary.push((format!("{label} variation"), variation));
        }
    }
    Ok(())
}

fn selftest(config: &ExperimentConfig, table: &mut Table, outcome: &mut Outcome) -> Result<(), CliError> {
    let group = config.group_descriptor()?;
    let dual = slice(config, &group, config.cutoffs[0])?;
    let grid = oversampled_grid(&dual, 1);
    let id = Symbol::identity(&dual);
    let mut record = |name: &str, value: f64| {
        let tol = config.tolerance(name);
        let passed = outcome.judge(name, value, tol);
        table.push(vec![name.into(), value.into(), tol.map_or(Cell::Text(String::new()), Cell::Real), passed.into()]);
        outcome.summary.push((format!("{name}_residual"), value));
    };

    let (mut rt, mut pl) = (0.0f64, 0.0f64);
    for member in 0..8 {
        let f = ensemble_member(EnsembleKind::GaussianCoefficients, &id, config.seed, member)?;
        let (a, b) = transform_errors(&f, &grid)?;
        rt = rt.max(a);
        pl = pl.max(b);
    }
    record("plancherel", pl);
    record("roundtrip", rt);

    let partition = (0..10_000)
        .map(|i| {
            let lambda = 10f64.powf(6.0 * f64::from(i) / 9_999.0);
            let total: f64 = (0..=LpPartition.max_index(lambda) + 1).map(|l| LpPartition.psi(l, lambda)).sum();
            (total - 1.0).abs()
        })
        .fold(0.0, f64::max);
    record("partition", partition);

    let f = ensemble_member(EnsembleKind::GaussianCoefficients, &id, config.seed, 0)?;
    let mut sum = FourierCoefficients::zeros(&dual);
    for l in 0..=LpPartition.max_index(dual.cutoff()) {
        sum = sum.add(&lp_project(&f, &LpPartition, l))?;
    }
    record("reconstruction", sum.max_abs_diff(&f)?);

    let headline = check_marcinkiewicz(&id, group.marcinkiewicz_order() as u32)?.headline;
    record("identity_symbol", (headline - 1.0).abs());

    let ensemble = EnsembleConfig { kind: EnsembleKind::GaussianCoefficients, count: 4, oversample: 1 };
    let spec = NormSpec::new(0.0, 2.0, 2.0)?;
    let sweep = boundedness_sweep(&group, &SymbolSpec::Identity, &spec, &[dual.cutoff()], &ensemble, config.seed)?;
    record("identity_sweep", (sweep.rows[0].max_ratio - 1.0).abs());
    Ok(())
}
