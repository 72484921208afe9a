//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use lieharm::difference::apply_difference;
use lieharm::multiplier::{boundedness_sweep_multi, ensemble_member, log2_slope};
use lieharm::spaces::lp_project;
use lieharm::transform::plancherel_norm;
use lieharm::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn torus(n: usize) -> GroupDescriptor {
    GroupDescriptor::torus(n).unwrap()
}

fn su2() -> GroupDescriptor {
    GroupDescriptor::su2()
}

fn slice(g: &GroupDescriptor, cutoff: f64) -> Arc<Slice> {
    Arc::new(enumerate_dual(g, cutoff).unwrap())
}

/// Cutoff on `⟨ξ⟩` for a maximal spin `ℓ`.
fn spin(l: f64) -> f64 {
    spin_cutoff((2.0 * l) as u32)
}

/// The test-function ensemble shared by several criteria.
fn test_functions(dual: &Arc<Slice>, seed: u64, count: usize) -> Vec<Coefficients> {
    let id = Symbol::identity(dual);
    let kinds = [EnsembleKind::GaussianCoefficients, EnsembleKind::DirichletKernels, EnsembleKind::TranslatedWindows];
    (0..count)
        .map(|m| {
            let kind = if m < count / 2 { kinds[0] } else { kinds[1 + m % 2] };
            ensemble_member(kind, &id, seed, m).unwrap()
        })
        .collect()
}

fn plancherel_inversion() -> Verdict {
    let start = Instant::now();
    let (mut rt, mut pl) = (0.0f64, 0.0f64);
    for (g, cutoff) in [(torus(1), 256.0), (torus(2), 32.0), (su2(), spin(16.0))] {
        let dual = slice(&g, cutoff);
        let grid = Arc::new(build_grid(&g, dual.extent()));
        for f in test_functions(&dual, 1, 50) {
            let samples = inverse_on_grid(&f, &grid).unwrap();
            rt = rt.max(forward_transform(&samples, &dual).unwrap().max_abs_diff(&f).unwrap());
            let norm = plancherel_norm(&f);
            pl = pl.max((samples.l2_norm() - norm).abs() / norm);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        rt <= 1e-10 && pl <= 1e-10 && secs <= 60.0,
        format!("max round trip {rt:.2e}, max Plancherel rel {pl:.2e}, {secs:.1} s"),
    )
}

fn torus_difference_oracle() -> Verdict {
    let mut worst = 0.0f64;
    for g in [torus(1), torus(2)] {
        let dual = slice(&g, 128.0);
        let n = g.dim();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sigma = Symbol::from_fn(&dual, |_| {
                Matrix::scalar(1, Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            })
            .unwrap();
            for axis in 0..n {
                let mut alpha = vec![0; n];
                alpha[axis] = 1;
                let d = apply_difference(&sigma, &alpha).unwrap();
                let mut shift = vec![0; n];
                shift[axis] = 1;
                for (x, b) in d.valid_entries() {
                    let k = x.label.as_torus().unwrap();
                    let next = sigma.block(&IrrepLabel::Torus(k.shifted(&shift))).unwrap();
                    worst = worst.max(b.max_abs_diff(&next.sub(sigma.block(&x.label).unwrap())));
                }
            }
        }
    }
    verdict(worst <= 1e-12, format!("max entrywise deviation {worst:.2e} over 20 symbols on torus1 and torus2, cutoff 128"))
}

fn partition_of_unity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pou = 0.0f64;
    for _ in 0..10_000 {
        let lambda = 10f64.powf(rng.random_range(0.0..6.0));
        let total: f64 = (0..=LpPartition.max_index(lambda) + 1).map(|l| LpPartition.psi(l, lambda)).sum();
        pou = pou.max((total - 1.0).abs());
    }
    let mut rec = 0.0f64;
    for (g, cutoff) in [(torus(1), 256.0), (torus(2), 32.0), (su2(), spin(16.0))] {
        let dual = slice(&g, cutoff);
        for f in test_functions(&dual, 2, 10) {
            let mut sum = FourierCoefficients::zeros(&dual);
            for l in 0..=LpPartition.max_index(dual.cutoff()) {
                sum = sum.add(&lp_project(&f, &LpPartition, l)).unwrap();
            }
            rec = rec.max(sum.max_abs_diff(&f).unwrap());
        }
    }
    verdict(pou <= 1e-12 && rec <= 1e-11, format!("max |sum psi - 1| {pou:.2e}, max reconstruction {rec:.2e}"))
}

fn f022_vs_l2() -> Verdict {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let spec = NormSpec::new(0.0, 2.0, 2.0).unwrap();
    for (g, cutoff) in [(torus(1), 256.0), (torus(2), 32.0), (su2(), spin(16.0))] {
        let dual = slice(&g, cutoff);
        let grid = Arc::new(build_grid(&g, dual.extent()));
        for f in test_functions(&dual, 4, 40) {
            let ratio = triebel_lizorkin_norm(&f, &spec, &LpPartition, &grid).unwrap() / plancherel_norm(&f);
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    let pass = lo >= std::f64::consts::FRAC_1_SQRT_2 - 1e-6 && hi <= 1.0 + 1e-6;
    verdict(pass, format!("ratio range [{lo:.6}, {hi:.6}] over 120 functions"))
}

fn embedding_monotonicity() -> Verdict {
    let grid_r = [-1.0, 0.0, 1.0];
    let grid_pq = [1.5, 2.0, 4.0];
    let (mut checked, mut failed) = (0usize, 0usize);
    for (g, cutoff) in [(torus(1), 128.0), (su2(), spin(8.0))] {
        let dual = slice(&g, cutoff);
        let grid = Arc::new(build_grid(&g, dual.extent()));
        for f in test_functions(&dual, 5, 100) {
            let d = LpDecomposition::new(&f, &LpPartition, &grid).unwrap();
            let norm = |r: f64, p: f64, q: f64| d.tl_norm(&NormSpec::new(r, p, q).unwrap()).unwrap();
            for &p in &grid_pq {
                for &r in &grid_r {
                    for w in grid_pq.windows(2) {
                        checked += 1;
                        failed += usize::from(norm(r, p, w[1]) > norm(r, p, w[0]) * (1.0 + 1e-12));
                    }
                }
                for &q in &grid_pq {
                    for w in grid_r.windows(2) {
                        checked += 1;
                        failed += usize::from(norm(w[0], p, q) > norm(w[1], p, q) * (1.0 + 1e-12));
                    }
                }
            }
        }
    }
    verdict(failed == 0, format!("{failed} of {checked} q- and r-monotonicity inequalities violated"))
}

fn decay_slope(g: &GroupDescriptor, cutoff: f64, levels: &[u32], z: &Point) -> f64 {
    let dual = slice(g, cutoff);
    let sigma = SymbolSpec::PowerIt { t: 1.0 }.build(&dual).unwrap();
    let mut ys = Vec::new();
    for &l in levels {
        let kernel = window_kernel(&sigma, &LpPartition, l).unwrap();
        let grid = Arc::new(build_grid(g, kernel.coeffs.dual().extent()));
        ys.push(kernel_difference_integral(&kernel, z, 1.0, &grid).unwrap());
    }
    let xs: Vec<f64> = levels.iter().map(|&l| f64::from(l)).collect();
    log2_slope(&xs, &ys)
}

fn kernel_decay() -> Verdict {
    let start = Instant::now();
    let d = 0.05 * std::f64::consts::TAU;
    let t = decay_slope(&torus(1), 512.0, &[2, 3, 4, 5, 6], &GroupPoint::torus(&[0.05]).unwrap());
    let z = GroupPoint::su2(0.0, 2.0 * d, 0.0);
    // The level-5 window reaches ⟨ξ⟩ = 64, so the slice must hold spins up to 64.
    let s = decay_slope(&su2(), spin(64.0), &[2, 3, 4, 5], &z);
    let truncated = decay_slope(&su2(), spin(32.0), &[2, 3, 4, 5], &z);
    let secs = start.elapsed().as_secs_f64();
    verdict(
        t <= -0.2 && s <= -0.2 && secs <= 600.0,
        format!(
            "torus1 slope {t:.3}, su2 slope {s:.3} (l_max 64; {truncated:.3} with the level-5 window cut at l_max 32), {secs:.0} s"
        ),
    )
}

fn checker_coherence() -> Verdict {
    let p5 = SymbolSpec::PowerIt { t: 5.0 };
    let headline = |g: &GroupDescriptor, cutoff: f64, s: SymbolSpec| {
        let sigma = s.build(&slice(g, cutoff)).unwrap();
        check_marcinkiewicz(&sigma, g.marcinkiewicz_order() as u32).unwrap()
    };
    let stable = |a: f64, b: f64| (b - a).abs() <= 0.1 * a;
    let t: Vec<f64> = [64.0, 128.0, 256.0].iter().map(|&c| headline(&torus(1), c, p5).headline).collect();
    let s: Vec<f64> = [8.0, 16.0].iter().map(|&l| headline(&su2(), spin(l), p5).headline).collect();
    let c1 = |c: f64| headline(&torus(1), c, SymbolSpec::Wave).constant("alpha=(1)").unwrap();
    let growth = c1(256.0) / c1(32.0);
    let pass = stable(t[0], t[1]) && stable(t[1], t[2]) && stable(s[0], s[1]) && growth >= 8.0;
    verdict(
        pass,
        format!(
            "power t=5 headlines torus1 {:.4}/{:.4}/{:.4}, su2 {:.4}/{:.4}; wave C_1 growth x{growth:.2}",
            t[0], t[1], t[2], s[0], s[1]
        ),
    )
}

const ALL_KINDS: [EnsembleKind; 5] = [
    EnsembleKind::GaussianCoefficients,
    EnsembleKind::DirichletKernels,
    EnsembleKind::TranslatedWindows,
    EnsembleKind::FocusedWindows,
    EnsembleKind::Directed,
];

fn l2_exactness() -> Verdict {
    let spec = [NormSpec::new(0.0, 2.0, 2.0).unwrap()];
    let symbols = [
        SymbolSpec::PowerIt { t: 5.0 },
        SymbolSpec::Wave,
        SymbolSpec::Window { l: 2 },
        SymbolSpec::DyadicRademacher { seed: 5 },
    ];
    let (mut excess, mut directed_low) = (f64::NEG_INFINITY, f64::INFINITY);
    for (g, cutoffs) in [(torus(1), vec![32.0, 64.0]), (su2(), vec![spin(4.0), spin(8.0)])] {
        for symbol in &symbols {
            let exact: Vec<f64> =
                cutoffs.iter().map(|&c| exact_l2_operator_norm(&symbol.build(&slice(&g, c)).unwrap())).collect();
            for kind in ALL_KINDS {
                let cfg = EnsembleConfig { kind, count: 8, oversample: 1 };
                let sweep = boundedness_sweep_multi(&g, symbol, &spec, &cutoffs, &cfg, 8).unwrap().remove(0);
                for (row, norm) in sweep.rows.iter().zip(&exact) {
                    excess = excess.max(row.max_ratio / std::f64::consts::SQRT_2 - norm);
                    if kind == EnsembleKind::Directed {
                        directed_low = directed_low.min(row.max_ratio / norm);
                    }
                }
            }
        }
    }
    verdict(
        excess <= 1e-9 && directed_low >= 0.8,
        format!("max rescaled ratio minus exact norm {excess:.3e}; directed ensemble reaches {directed_low:.6} of it"),
    )
}

/// Max ratio over the union of the probe ensembles, per norm and cutoff.
fn union_sweep(g: &GroupDescriptor, symbol: &SymbolSpec, specs: &[NormSpec<f64>], cutoffs: &[f64]) -> Vec<Vec<f64>> {
    let mut best = vec![vec![0.0f64; cutoffs.len()]; specs.len()];
    for kind in &ALL_KINDS[..4] {
        let cfg = EnsembleConfig { kind: *kind, count: 12, oversample: 1 };
        for (b, sweep) in best.iter_mut().zip(boundedness_sweep_multi(g, symbol, specs, cutoffs, &cfg, 7).unwrap()) {
            for (v, row) in b.iter_mut().zip(&sweep.rows) {
                *v = v.max(row.max_ratio);
            }
        }
    }
    best
}

fn boundedness_evidence() -> Verdict {
    let mut specs = Vec::new();
    for r in [-1.0, 0.0, 1.0] {
        for p in [1.5, 2.0, 4.0] {
            for q in [1.5, 2.0, 4.0] {
                specs.push(NormSpec::new(r, p, q).unwrap());
            }
        }
    }
    let wave_spec = [NormSpec::new(0.0, 4.0, 2.0).unwrap()];
    let mut pass = true;
    let mut parts = Vec::new();
    for (g, cutoffs) in [(torus(1), vec![64.0, 128.0, 256.0]), (su2(), vec![spin(4.0), spin(8.0), spin(16.0)])] {
        let hm = union_sweep(&g, &SymbolSpec::PowerIt { t: 5.0 }, &specs, &cutoffs);
        let variation = hm
            .iter()
            .map(|r| {
                let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = r.iter().copied().fold(0.0, f64::max);
                (hi - lo) / lo
            })
            .fold(0.0, f64::max);
        let wave = union_sweep(&g, &SymbolSpec::Wave, &wave_spec, &cutoffs).remove(0);
        let increasing = wave.windows(2).all(|w| w[1] > w[0]);
        pass &= variation <= 0.25 && increasing;
        parts.push(format!(
            "{g}: HM variation {:.1}%, wave (0,4,2) {:.4}/{:.4}/{:.4}",
            100.0 * variation,
            wave[0],
            wave[1],
            wave[2]
        ));
    }
    verdict(pass, parts.join("; "))
}

fn run_cli(config: &Path, out: &Path) -> (i32, Vec<u8>, Vec<u8>, String) {
    let status = Command::new(env!("CARGO_BIN_EXE_lieharm"))
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .status()
        .unwrap();
    let report = std::fs::read_dir(out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.file_name().unwrap() != "manifest.json")
        .unwrap();
    let bytes = std::fs::read(&report).unwrap();
    let manifest = std::fs::read(out.join("manifest.json")).unwrap();
    (status.code().unwrap(), bytes, manifest, report.file_name().unwrap().to_string_lossy().into_owned())
}

fn determinism() -> Verdict {
    let configs = [
        r#"{"task":"selftest","group":"torus1","cutoffs":[64],"seed":5}"#,
        r#"{"task":"transform","group":"su2","cutoffs":[4,8],"seed":5,"ensemble":{"kind":"gaussian-coefficients","count":5}}"#,
        r#"{"task":"check-symbol","group":"su2","cutoffs":[4,8],"symbols":[{"type":"power_it","t":5}],
            "check":{"conditions":["marcinkiewicz","hormander_mihlin","weak_marcinkiewicz"]}}"#,
        r#"{"task":"tl-norm","group":"torus2","cutoffs":[16],"seed":9,"norms":[{"r":1,"p":1,"q":2},{"r":0,"p":4,"q":1.5}],
            "ensemble":{"kind":"dirichlet-kernels","count":4}}"#,
        r#"{"task":"kernel-decay","group":"torus1","cutoffs":[256],"symbols":[{"type":"power_it","t":1}],"kernel":{"levels":[2,3,4,5]}}"#,
        r#"{"task":"bound-sweep","group":"su2","cutoffs":[2,4],"seed":13,"symbols":[{"type":"wave"}],
            "norms":[{"r":0,"p":4,"q":2},{"r":0,"p":1,"q":2}],"ensemble":{"kind":"focused-windows","count":4}}"#,
    ];
    let dir = tempfile::tempdir().unwrap();
    let mut differing = Vec::new();
    for (i, text) in configs.iter().enumerate() {
        let config = dir.path().join(format!("c{i}.json"));
        std::fs::write(&config, text).unwrap();
        let out = dir.path().join(format!("out{i}"));
        let first = run_cli(&config, &out);
        let second = run_cli(&config, &out);
        if first != second || first.0 != 0 {
            differing.push(first.3);
        }
    }
    verdict(
        differing.is_empty(),
        format!("{} tasks run twice, reports differing or failing: {differing:?}", configs.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("Plancherel and inversion", plancherel_inversion),
        ("torus difference oracle", torus_difference_oracle),
        ("partition of unity", partition_of_unity),
        ("F^0_22 versus L^2", f022_vs_l2),
        ("embedding monotonicity", embedding_monotonicity),
        ("kernel decay", kernel_decay),
        ("checker coherence", checker_coherence),
        ("L^2 exactness", l2_exactness),
        ("boundedness evidence", boundedness_evidence),
        ("CLI determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == id.to_string()) {
            continue;
        }
        let v = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| verdict(false, "panicked"));
        failures += usize::from(!v.pass);
        println!("criterion {id:>2} {:<26} {}  {}", name, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
