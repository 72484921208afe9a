//! Fourier multipliers `T_σ`, their window kernels, and empirical norm probes.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dual::{enumerate_dual, DualSlice, IrrepLabel};
use crate::error::{Error, Result};
use crate::grid::{build_grid, QuadratureGrid};
use crate::group::{GroupDescriptor, GroupKind, GroupPoint, Su2Element};
use crate::linalg::CMatrix;
use crate::scalar::{Complex, Real};
use crate::spaces::{LpDecomposition, LpPartition, NormSpec};
use crate::symbol::{Symbol, SymbolSpec};
use crate::transform::{inverse_on_grid, translate_left, FourierCoefficients};

/// `(T_σ f)^(ξ) = σ(ξ) f̂(ξ)`.
pub fn apply_multiplier<T: Real>(symbol: &Symbol<T>, coeffs: &FourierCoefficients<T>) -> Result<FourierCoefficients<T>> {
    if !symbol.dual().same_as(coeffs.dual()) {
        return Err(Error::Precondition("symbol and coefficients live on different dual slices".into()));
    }
    let blocks = symbol.blocks().iter().zip(coeffs.blocks()).map(|(s, f)| s.matmul(f)).collect();
    FourierCoefficients::from_blocks(coeffs.dual(), blocks)
}

/// `sup_ξ ‖σ(ξ)‖_op`, the norm of `T_σ` on `L²`.
pub fn exact_l2_operator_norm<T: Real>(symbol: &Symbol<T>) -> T {
    symbol.linf_norm()
}

/// Kernel of `T_σ ψ_ℓ(𝓑)`, stored on the smallest slice that holds its support.
#[derive(Clone, Debug)]
pub struct KernelWindow<T> {
    pub l: u32,
    pub coeffs: FourierCoefficients<T>,
}

/// `κ̂_ℓ(ξ) = σ(ξ) ψ_ℓ(⟨ξ⟩)`.
pub fn window_kernel<T: Real>(symbol: &Symbol<T>, partition: &LpPartition, l: u32) -> Result<KernelWindow<T>> {
    let dual = symbol.dual();
    let reach = T::lit(2.0).powi(l as i32 + 1);
    let sub = Arc::new(enumerate_dual(&dual.group(), reach.min(dual.cutoff()))?);
    let coeffs = FourierCoefficients::from_fn(&sub, |i| {
        let x = &sub.irreps()[i];
        let src = symbol.block(&x.label).expect("sub-slice lies inside the slice");
        src.scale_real(partition.psi(l, x.bracket))
    })?;
    Ok(KernelWindow { l, coeffs })
}

/// `∫_{|x| > 4c|z|} |κ(z⁻¹x) − κ(x)| dx` by quadrature on `grid`, with the
/// translated kernel summed exactly from its coefficients.
pub fn kernel_difference_integral<T: Real>(
    kernel: &KernelWindow<T>,
    z: &GroupPoint<T>,
    c: T,
    grid: &Arc<QuadratureGrid<T>>,
) -> Result<T> {
    let group = kernel.coeffs.dual().group();
    if !(c > T::zero()) {
        return Err(Error::Configuration(format!("domain constant c = {c} must be positive")));
    }
    let radius = T::lit(4.0) * c * z.distance_to_identity();
    if z.distance_to_identity() == T::zero() {
        return Err(Error::Precondition("translation must differ from the identity".into()));
    }
    if radius >= group.diameter() {
        return Ok(T::zero());
    }
    let moved = translate_left(&kernel.coeffs, &z.inverse())?;
    let diff = inverse_on_grid(&moved.sub(&kernel.coeffs)?, grid)?;
    Ok(grid
        .points()
        .zip(grid.weights())
        .zip(diff.samples())
        .filter(|((x, _), _)| x.distance_to_identity() > radius)
        .map(|((_, w), v)| v.norm() * w)
        .sum())
}

/// Random test functions for the boundedness sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    /// Independent complex Gaussian entries scaled by `⟨ξ⟩^{−n/2}`.
    GaussianCoefficients,
    /// `f̂(ξ) = ξ(z)` for `⟨ξ⟩ ≤ R` with random `R` and `z`.
    DirichletKernels,
    /// `f̂(ξ) = ψ_k(⟨ξ⟩) ξ(z)` with random window `k` and point `z`.
    TranslatedWindows,
    /// `f̂(ξ) = σ(ξ)* ψ_k(⟨ξ⟩) ξ(z)`: data that `T_σ` maps onto a translated
    /// window, the focusing probe for dispersive symbols.
    FocusedWindows,
    /// Rank-one data at the irrep where `‖σ(ξ)‖_op` peaks, along its top
    /// right singular vector.
    Directed,
}

impl EnsembleKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::GaussianCoefficients => "gaussian-coefficients",
            Self::DirichletKernels => "dirichlet-kernels",
            Self::TranslatedWindows => "translated-windows",
            Self::FocusedWindows => "focused-windows",
            Self::Directed => "directed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub kind: EnsembleKind,
    pub count: usize,
    /// Grid bandlimit as a multiple of the slice extent.
    #[serde(default = "default_oversample")]
    pub oversample: u32,
}

fn default_oversample() -> u32 {
    1
}

/// Member `index` of the ensemble; streams are independent per member.
pub fn ensemble_member<T: Real>(
    kind: EnsembleKind,
    symbol: &Symbol<T>,
    seed: u64,
    index: usize,
) -> Result<FourierCoefficients<T>> {
    let dual = symbol.dual();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let normal = |rng: &mut ChaCha8Rng| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(re), T::lit(im))
    };
    let half_n = T::from_count(dual.group().dim()) * T::lit(0.5);
    match kind {
        EnsembleKind::GaussianCoefficients => FourierCoefficients::from_fn(dual, |i| {
            let x = &dual.irreps()[i];
            let scale = x.bracket.powf(-half_n);
            CMatrix::from_fn(x.dim, x.dim, |_, _| normal(&mut rng) * scale)
        }),
        EnsembleKind::DirichletKernels => {
            let radius = dual.cutoff().powf(T::lit(rng.random::<f64>()));
            let z = random_point(&dual.group(), &mut rng);
            let base = FourierCoefficients::from_fn(dual, |i| {
                let x = &dual.irreps()[i];
                let v = if x.bracket <= radius { T::one() } else { T::zero() };
                CMatrix::identity(x.dim).scale_real(v)
            })?;
            translate_left(&base, &z)
        }
        EnsembleKind::TranslatedWindows | EnsembleKind::FocusedWindows => {
            let top = LpPartition.max_index(dual.cutoff());
            let k = rng.random_range(0..=top);
            let z = random_point(&dual.group(), &mut rng);
            let base = FourierCoefficients::from_fn(dual, |i| {
                let x = &dual.irreps()[i];
                CMatrix::identity(x.dim).scale_real(LpPartition.psi(k, x.bracket))
            })?;
            let window = translate_left(&base, &z)?;
            if kind == EnsembleKind::TranslatedWindows {
                return Ok(window);
            }
            let blocks = symbol.blocks().iter().zip(window.blocks()).map(|(s, w)| s.adjoint().matmul(w)).collect();
            FourierCoefficients::from_blocks(dual, blocks)
        }
        EnsembleKind::Directed => {
            let pos = peak_position(symbol);
            let (_, v) = symbol.blocks()[pos].top_right_singular_vector();
            let d = dual.irreps()[pos].dim;
            let row: Vec<Complex<T>> = (0..d).map(|_| normal(&mut rng)).collect();
            FourierCoefficients::from_fn(dual, |i| {
                let x = &dual.irreps()[i];
                if i == pos {
                    CMatrix::from_fn(d, d, |r, c| v[r] * row[c])
                } else {
                    CMatrix::zeros(x.dim, x.dim)
                }
            })
        }
    }
}

/// Haar-random point.
pub fn random_point<T: Real, R: Rng>(group: &GroupDescriptor, rng: &mut R) -> GroupPoint<T> {
    match group.kind() {
        GroupKind::Torus(n) => {
            let coords: Vec<T> = (0..n).map(|_| T::lit(rng.random::<f64>())).collect();
            GroupPoint::torus(&coords).expect("supported torus dimension")
        }
        GroupKind::Su2 => {
            // A normalised Gaussian 4-vector is uniform on S³ ≅ SU(2).
            let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let a = Complex::new(T::lit(v[0] / norm), T::lit(v[1] / norm));
            let b = Complex::new(T::lit(v[2] / norm), T::lit(v[3] / norm));
            GroupPoint::from_su2_element(Su2Element { a, b })
        }
    }
}

/// One row of a sweep: the largest ratio over the ensemble at one cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow<T> {
    pub cutoff: T,
    pub max_ratio: T,
    pub argmax_member: usize,
}

/// Empirical lower bounds for `‖T_σ‖` on `F^r_{p,q}` at increasing cutoffs.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundednessSweep<T> {
    pub group: GroupDescriptor,
    pub symbol: String,
    pub spec: NormSpec<T>,
    pub ensemble: EnsembleConfig,
    pub seed: u64,
    pub rows: Vec<SweepRow<T>>,
}

/// `‖T_σ f‖ / ‖f‖` for one norm spec; for `p = 1` the numerator is the weak norm.
fn ratio<T: Real>(tf: &LpDecomposition<T>, f: &LpDecomposition<T>, spec: &NormSpec<T>) -> Result<T> {
    let num = if spec.is_weak() { tf.weak_tl_norm(spec)? } else { tf.tl_norm(spec)? };
    let den = f.tl_norm(spec)?;
    Ok(if den > T::zero() { num / den } else { T::zero() })
}

/// Sweeps several norm specs at once, sharing the Littlewood-Paley pieces of
/// every ensemble member.
pub fn boundedness_sweep_multi<T: Real>(
    group: &GroupDescriptor,
    symbol: &SymbolSpec,
    specs: &[NormSpec<T>],
    cutoffs: &[T],
    ensemble: &EnsembleConfig,
    seed: u64,
) -> Result<Vec<BoundednessSweep<T>>> {
    for spec in specs {
        spec.validate()?;
    }
    if cutoffs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Configuration("sweep cutoffs must be strictly ascending".into()));
    }
    if ensemble.count == 0 || ensemble.oversample == 0 {
        return Err(Error::Configuration("ensemble count and oversample must be positive".into()));
    }
    let partition = LpPartition;
    let mut sweeps: Vec<BoundednessSweep<T>> = specs
        .iter()
        .map(|spec| BoundednessSweep {
            group: *group,
            symbol: symbol.name(),
            spec: *spec,
            ensemble: *ensemble,
            seed,
            rows: Vec::new(),
        })
        .collect();
    for &cutoff in cutoffs {
        let dual: Arc<DualSlice<T>> = Arc::new(enumerate_dual(group, cutoff)?);
        let sigma = symbol.build(&dual)?;
        let extent = dual.extent();
        let grid = Arc::new(build_grid(group, crate::grid::Bandlimit::from_twice(extent.twice() * ensemble.oversample)));
        let mut best: Vec<(T, usize)> = vec![(T::zero(), 0); specs.len()];
        for member in 0..ensemble.count {
            let f = ensemble_member(ensemble.kind, &sigma, seed, member)?;
            let tf = apply_multiplier(&sigma, &f)?;
            let df = LpDecomposition::new(&f, &partition, &grid)?;
            let dtf = LpDecomposition::new(&tf, &partition, &grid)?;
            for (b, spec) in best.iter_mut().zip(specs) {
                let r = ratio(&dtf, &df, spec)?;
                if r > b.0 {
                    *b = (r, member);
                }
            }
        }
        for (sweep, (max_ratio, argmax_member)) in sweeps.iter_mut().zip(best) {
            sweep.rows.push(SweepRow { cutoff, max_ratio, argmax_member });
        }
    }
    Ok(sweeps)
}

pub fn boundedness_sweep<T: Real>(
    group: &GroupDescriptor,
    symbol: &SymbolSpec,
    spec: &NormSpec<T>,
    cutoffs: &[T],
    ensemble: &EnsembleConfig,
    seed: u64,
) -> Result<BoundednessSweep<T>> {
    Ok(boundedness_sweep_multi(group, symbol, std::slice::from_ref(spec), cutoffs, ensemble, seed)?.remove(0))
}

/// Least-squares slope of `log₂ y` against `x`.
pub fn log2_slope<T: Real>(xs: &[T], ys: &[T]) -> T {
    let n = T::from_count(xs.len());
    let ly: Vec<T> = ys.iter().map(|y| y.log2()).collect();
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ly.iter().copied().sum::<T>() / n;
    let num: T = xs.iter().zip(&ly).map(|(x, y)| (*x - mx) * (*y - my)).sum();
    let den: T = xs.iter().map(|x| (*x - mx) * (*x - mx)).sum();
    num / den
}

/// Label of the irrep where `‖σ(ξ)‖_op` peaks.
pub fn peak_irrep<T: Real>(symbol: &Symbol<T>) -> IrrepLabel {
    symbol.dual().irreps()[peak_position(symbol)].label
}

fn peak_position<T: Real>(symbol: &Symbol<T>) -> usize {
    let mut best = (0, T::zero());
    for (p, b) in symbol.blocks().iter().enumerate() {
        let v = b.op_norm();
        if v > best.1 {
            best = (p, v);
        }
    }
    best.0
}
