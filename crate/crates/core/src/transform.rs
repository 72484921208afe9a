//! Matrix-valued Fourier transform on band-limited functions.
//!
//! Conventions:
//! * `f̂(ξ) = ∫ f(x) ξ(x)* dx` and `f(x) = Σ_ξ d_ξ Tr(ξ(x) f̂(ξ))`.
//! * Right convolution `(f ∗ κ)(x) = ∫ f(y) κ(y⁻¹x) dy`, so that
//!   `(f ∗ κ)^(ξ) = κ̂(ξ) f̂(ξ)`.
//!
//! Grid transforms are separable: tori are handled axis by axis, SU(2) by
//! discrete Fourier sums in `γ` and `α` followed by a little-d sum per `β` node.
//! Both are the same quadrature as the direct point-by-irrep sum, reordered.

use std::sync::Arc;

use num_traits::Zero;

use crate::dual::{DualSlice, IrrepLabel};
use crate::error::{Error, Result};
use crate::grid::{GridLayout, QuadratureGrid};
use crate::group::{GroupKind, GroupPoint};
use crate::linalg::CMatrix;
use crate::scalar::{cis, roots_of_unity, Complex, Real};
use crate::wigner::{self, LittleD, MAX_TWICE_SPIN};

/// Per-irrep matrices `f̂(ξ)` on a dual slice.
#[derive(Clone, Debug)]
pub struct FourierCoefficients<T> {
    dual: Arc<DualSlice<T>>,
    blocks: Vec<CMatrix<T>>,
}

impl<T: Real> FourierCoefficients<T> {
    pub fn zeros(dual: &Arc<DualSlice<T>>) -> Self {
        let blocks = dual.irreps().iter().map(|x| CMatrix::zeros(x.dim, x.dim)).collect();
        Self { dual: Arc::clone(dual), blocks }
    }

    /// Blocks must follow the slice order with matching `d_ξ × d_ξ` shapes.
    pub fn from_blocks(dual: &Arc<DualSlice<T>>, blocks: Vec<CMatrix<T>>) -> Result<Self> {
        if blocks.len() != dual.len() {
            return Err(Error::Precondition(format!(
                "{} blocks for a slice of {} irreps",
                blocks.len(),
                dual.len()
            )));
        }
        for (b, x) in blocks.iter().zip(dual.irreps()) {
            if b.rows() != x.dim || b.cols() != x.dim {
                return Err(Error::Precondition(format!(
                    "block for {} has shape {}x{}, expected {}x{}",
                    x.label,
                    b.rows(),
                    b.cols(),
                    x.dim,
                    x.dim
                )));
            }
        }
        Ok(Self { dual: Arc::clone(dual), blocks })
    }

    /// `f̂(ξ) = g(ξ)` for every irrep of the slice.
    pub fn from_fn(dual: &Arc<DualSlice<T>>, mut g: impl FnMut(usize) -> CMatrix<T>) -> Result<Self> {
        let blocks = (0..dual.len()).map(&mut g).collect();
        Self::from_blocks(dual, blocks)
    }

    pub fn dual(&self) -> &Arc<DualSlice<T>> {
        &self.dual
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [CMatrix<T>] {
        &mut self.blocks
    }

    pub fn into_blocks(self) -> Vec<CMatrix<T>> {
        self.blocks
    }

    pub fn block(&self, label: &IrrepLabel) -> Option<&CMatrix<T>> {
        self.dual.position(label).map(|i| &self.blocks[i])
    }

    pub fn block_mut(&mut self, label: &IrrepLabel) -> Option<&mut CMatrix<T>> {
        self.dual.position(label).map(move |i| &mut self.blocks[i])
    }

    fn check_same_slice(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.dual, &other.dual) || self.dual.same_as(&other.dual) {
            Ok(())
        } else {
            Err(Error::Precondition("coefficients live on different dual slices".into()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_slice(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect();
        Ok(Self { dual: Arc::clone(&self.dual), blocks })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_slice(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.sub(b)).collect();
        Ok(Self { dual: Arc::clone(&self.dual), blocks })
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let blocks = self.blocks.iter().map(|a| a.scale(factor)).collect();
        Self { dual: Arc::clone(&self.dual), blocks }
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_same_slice(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(T::zero(), T::max))
    }

    /// Every block is exactly a multiple of the identity (spectral / central data).
    pub fn is_scalar_identity(&self) -> bool {
        self.blocks.iter().all(|b| b.as_scalar_identity().is_some())
    }

    /// Largest violation of the symmetry that characterises real-valued functions:
    /// `f̂(−ξ) = conj f̂(ξ)` on tori and
    /// `conj f̂(ℓ)_{ij} = (−1)^{m_j − m_i} f̂(ℓ)_{i'j'}` on SU(2), where `i'`, `j'`
    /// index `−m_i`, `−m_j`.
    pub fn reality_defect(&self) -> T {
        let mut worst = T::zero();
        for (pos, x) in self.dual.irreps().iter().enumerate() {
            let b = &self.blocks[pos];
            match x.label {
                IrrepLabel::Torus(freq) => {
                    let partner = IrrepLabel::Torus(freq.negated());
                    let other = match self.block(&partner) {
                        Some(o) => o[(0, 0)],
                        None => Complex::zero(),
                    };
                    worst = worst.max((other - b[(0, 0)].conj()).norm());
                }
                IrrepLabel::Spin(_) => {
                    let d = x.dim;
                    for i in 0..d {
                        for j in 0..d {
                            // m_j − m_i = i − j.
                            let sign = if (i + d * 2 - j) % 2 == 0 { T::one() } else { -T::one() };
                            let mirrored = b[(d - 1 - i, d - 1 - j)] * sign;
                            worst = worst.max((b[(i, j)].conj() - mirrored).norm());
                        }
                    }
                }
            }
        }
        worst
    }
}

/// Samples of a function at the points of a quadrature grid.
#[derive(Clone, Debug)]
pub struct GridFunction<T> {
    grid: Arc<QuadratureGrid<T>>,
    samples: Vec<Complex<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(grid: &Arc<QuadratureGrid<T>>, samples: Vec<Complex<T>>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Precondition(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.len()
            )));
        }
        Ok(Self { grid: Arc::clone(grid), samples })
    }

    pub fn from_fn(grid: &Arc<QuadratureGrid<T>>, mut f: impl FnMut(&GroupPoint<T>) -> Complex<T>) -> Self {
        let samples = grid.points().map(|p| f(&p)).collect();
        Self { grid: Arc::clone(grid), samples }
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid<T>> {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex<T>> {
        self.samples
    }

    /// Quadrature of `f`.
    pub fn integral(&self) -> Complex<T> {
        self.samples.iter().zip(self.grid.weights()).map(|(f, w)| f * w).sum()
    }

    /// `⟨f, g⟩ = ∫ f ḡ` on the grid.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        if self.samples.len() != other.samples.len() {
            return Err(Error::Precondition("grid functions on different grids".into()));
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .zip(self.grid.weights())
            .map(|((f, g), w)| f * g.conj() * w)
            .sum())
    }

    pub fn l2_norm(&self) -> T {
        self.samples
            .iter()
            .zip(self.grid.weights())
            .map(|(f, w)| f.norm_sqr() * w)
            .sum::<T>()
            .sqrt()
    }
}

fn check_groups<T: Real>(grid: &QuadratureGrid<T>, dual: &DualSlice<T>) -> Result<()> {
    if grid.group() != dual.group() {
        return Err(Error::Precondition(format!(
            "grid on {} but dual slice on {}",
            grid.group(),
            dual.group()
        )));
    }
    Ok(())
}

/// `f̂(ξ) = Σ_x w(x) f(x) ξ(x)*`, exact for band-limited `f` when the grid
/// bandlimit covers the slice.
pub fn forward_transform<T: Real>(f: &GridFunction<T>, dual: &Arc<DualSlice<T>>) -> Result<FourierCoefficients<T>> {
    let grid = f.grid();
    check_groups(grid, dual)?;
    if grid.bandlimit() < dual.extent() {
        return Err(Error::Precondition(format!(
            "grid bandlimit {} is below the slice extent {}",
            grid.bandlimit().value(),
            dual.extent().value()
        )));
    }
    match &grid.layout {
        GridLayout::Torus { dim, per_axis } => Ok(torus_forward(f.samples(), *dim, *per_axis, dual)),
        GridLayout::Su2 { n_alpha, n_gamma, cos_beta, beta_weights } => {
            su2_forward(f.samples(), *n_alpha, *n_gamma, cos_beta, beta_weights, dual)
        }
    }
}

/// Evaluates the band-limited function at every grid point (any grid of the group).
pub fn inverse_on_grid<T: Real>(coeffs: &FourierCoefficients<T>, grid: &Arc<QuadratureGrid<T>>) -> Result<GridFunction<T>> {
    check_groups(grid, coeffs.dual())?;
    let samples = match &grid.layout {
        GridLayout::Torus { dim, per_axis } => torus_inverse(coeffs, *dim, *per_axis),
        GridLayout::Su2 { n_alpha, n_gamma, cos_beta, .. } => su2_inverse(coeffs, *n_alpha, *n_gamma, cos_beta)?,
    };
    GridFunction::new(grid, samples)
}

/// `f(x) = Σ_ξ d_ξ Tr(ξ(x) f̂(ξ))` at arbitrary points.
pub fn inverse_evaluate<T: Real>(coeffs: &FourierCoefficients<T>, points: &[GroupPoint<T>]) -> Result<Vec<Complex<T>>> {
    let dual = coeffs.dual();
    for p in points {
        if p.group() != dual.group() {
            return Err(Error::Precondition("point outside the coefficients' group".into()));
        }
    }
    match dual.group().kind() {
        GroupKind::Torus(n) => Ok(torus_evaluate(coeffs, n, points)),
        GroupKind::Su2 => su2_evaluate(coeffs, points),
    }
}

/// `(Σ_ξ d_ξ ‖f̂(ξ)‖²_HS)^{1/2}`.
pub fn plancherel_norm<T: Real>(coeffs: &FourierCoefficients<T>) -> T {
    coeffs
        .dual()
        .irreps()
        .iter()
        .zip(coeffs.blocks())
        .map(|(x, b)| T::from_count(x.dim) * b.hs_norm_sqr())
        .sum::<T>()
        .sqrt()
}

/// `⟨f, g⟩ = Σ_ξ d_ξ Tr(f̂(ξ) ĝ(ξ)*)`.
pub fn plancherel_inner<T: Real>(f: &FourierCoefficients<T>, g: &FourierCoefficients<T>) -> Result<Complex<T>> {
    f.check_same_slice(g)?;
    Ok(f.dual()
        .irreps()
        .iter()
        .zip(f.blocks().iter().zip(g.blocks()))
        .map(|(x, (a, b))| {
            let s: Complex<T> = a.as_slice().iter().zip(b.as_slice()).map(|(p, q)| p * q.conj()).sum();
            s * T::from_count(x.dim)
        })
        .sum())
}

/// Right convolution `f ∗ g`: `(f ∗ g)^(ξ) = ĝ(ξ) f̂(ξ)`.
pub fn convolve<T: Real>(f: &FourierCoefficients<T>, g: &FourierCoefficients<T>) -> Result<FourierCoefficients<T>> {
    f.check_same_slice(g)?;
    let blocks = f.blocks().iter().zip(g.blocks()).map(|(a, b)| b.matmul(a)).collect();
    FourierCoefficients::from_blocks(f.dual(), blocks)
}

/// Coefficients of `x ↦ f(z x)`, namely `f̂(ξ) ξ(z)`.
pub fn translate_left<T: Real>(coeffs: &FourierCoefficients<T>, z: &GroupPoint<T>) -> Result<FourierCoefficients<T>> {
    let dual = coeffs.dual();
    let group = dual.group();
    let mut blocks = Vec::with_capacity(dual.len());
    let little_d = match (group.kind(), z) {
        (GroupKind::Su2, GroupPoint::Su2(e)) => Some((LittleD::from_beta(e.beta, dual.max_twice_spin().unwrap_or(0)), *e)),
        _ => None,
    };
    for (x, b) in dual.irreps().iter().zip(coeffs.blocks()) {
        let rep = match (&little_d, x.label) {
            (Some((d, e)), IrrepLabel::Spin(k)) => wigner::wigner_from_little_d(k, d.block(k), e.alpha, e.gamma),
            _ => crate::dual::evaluate_irrep(&group, &x.label, z)?,
        };
        blocks.push(b.matmul(&rep));
    }
    FourierCoefficients::from_blocks(dual, blocks)
}

// ---------------------------------------------------------------------------
// Torus

/// Dense frequency box `[-E, E]^n` for the slice, row-major with the last axis fastest.
struct TorusBox {
    extent: i32,
}

impl TorusBox {
    fn side(&self) -> usize {
        (2 * self.extent + 1) as usize
    }

    fn flat(&self, k: &[i32]) -> usize {
        k.iter().fold(0usize, |acc, &c| acc * self.side() + (c + self.extent) as usize)
    }
}

/// Applies `out[.., o, ..] = Σ_i kernel[o][i] · data[.., i, ..]` along `axis`.
fn transform_axis<T: Real>(
    data: &[Complex<T>],
    shape: &[usize],
    axis: usize,
    kernel: &[Complex<T>],
    out_len: usize,
) -> (Vec<Complex<T>>, Vec<usize>) {
    let in_len = shape[axis];
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![Complex::zero(); outer * out_len * inner];
    for o in 0..outer {
        for r in 0..out_len {
            let krow = &kernel[r * in_len..(r + 1) * in_len];
            let dst = &mut out[(o * out_len + r) * inner..(o * out_len + r + 1) * inner];
            for (i, kv) in krow.iter().enumerate() {
                if kv.is_zero() {
                    continue;
                }
                let src = &data[(o * in_len + i) * inner..(o * in_len + i + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d = *d + kv * s;
                }
            }
        }
    }
    let mut new_shape = shape.to_vec();
    new_shape[axis] = out_len;
    (out, new_shape)
}

fn torus_forward<T: Real>(samples: &[Complex<T>], dim: usize, per_axis: usize, dual: &Arc<DualSlice<T>>) -> FourierCoefficients<T> {
    let extent = dual.extent().ceil_integer() as i32;
    let bx = TorusBox { extent };
    let side = bx.side();
    let roots = roots_of_unity::<T>(per_axis);
    let inv_n = T::one() / T::from_count(per_axis);
    // kernel[r][t] = e^{-2πi ξ t / N} / N with ξ = r − E.
    let kernel: Vec<Complex<T>> = (0..side)
        .flat_map(|r| {
            let xi = r as i64 - extent as i64;
            let roots = &roots;
            (0..per_axis).map(move |t| {
                let idx = (-xi * t as i64).rem_euclid(per_axis as i64) as usize;
                roots[idx] * inv_n
            })
        })
        .collect();
    let mut data = samples.to_vec();
    let mut shape = vec![per_axis; dim];
    for axis in 0..dim {
        let (d, s) = transform_axis(&data, &shape, axis, &kernel, side);
        data = d;
        shape = s;
    }
    let blocks = dual
        .irreps()
        .iter()
        .map(|x| {
            let k = x.label.as_torus().expect("torus label").components();
            CMatrix::scalar(1, data[bx.flat(k)])
        })
        .collect();
    FourierCoefficients { dual: Arc::clone(dual), blocks }
}

fn torus_inverse<T: Real>(coeffs: &FourierCoefficients<T>, dim: usize, per_axis: usize) -> Vec<Complex<T>> {
    let dual = coeffs.dual();
    let extent = dual.extent().ceil_integer() as i32;
    let bx = TorusBox { extent };
    let side = bx.side();
    let mut data = vec![Complex::zero(); side.pow(dim as u32)];
    for (x, b) in dual.irreps().iter().zip(coeffs.blocks()) {
        let k = x.label.as_torus().expect("torus label").components();
        data[bx.flat(k)] = b[(0, 0)];
    }
    let roots = roots_of_unity::<T>(per_axis);
    // kernel[t][r] = e^{2πi ξ t / N}.
    let kernel: Vec<Complex<T>> = (0..per_axis)
        .flat_map(|t| {
            let roots = &roots;
            (0..side).map(move |r| {
                let xi = r as i64 - extent as i64;
                roots[(xi * t as i64).rem_euclid(per_axis as i64) as usize]
            })
        })
        .collect();
    let mut shape = vec![side; dim];
    for axis in 0..dim {
        let (d, s) = transform_axis(&data, &shape, axis, &kernel, per_axis);
        data = d;
        shape = s;
    }
    data
}

fn torus_evaluate<T: Real>(coeffs: &FourierCoefficients<T>, dim: usize, points: &[GroupPoint<T>]) -> Vec<Complex<T>> {
    let dual = coeffs.dual();
    let extent = dual.extent().ceil_integer() as i32;
    let side = (2 * extent + 1) as usize;
    let entries: Vec<(&[i32], Complex<T>)> = dual
        .irreps()
        .iter()
        .zip(coeffs.blocks())
        .map(|(x, b)| (x.label.as_torus().unwrap().components(), b[(0, 0)]))
        .collect();
    let mut powers = vec![Complex::zero(); dim * side];
    points
        .iter()
        .map(|p| {
            let coords = p.as_torus().expect("torus point").coords();
            for (axis, &c) in coords.iter().enumerate() {
                let row = &mut powers[axis * side..(axis + 1) * side];
                row[extent as usize] = Complex::new(T::one(), T::zero());
                for k in 1..=extent as usize {
                    // Direct phases keep the error independent of k.
                    let e = cis(T::TAU() * T::from_count(k) * c);
                    row[extent as usize + k] = e;
                    row[extent as usize - k] = e.conj();
                }
            }
            entries
                .iter()
                .map(|(k, v)| {
                    let mut phase = *v;
                    for (axis, &c) in k.iter().enumerate() {
                        phase = phase * powers[axis * side + (c + extent) as usize];
                    }
                    phase
                })
                .sum()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// SU(2)

/// Index of `2m ∈ [-L2, L2]` in a frequency axis of length `2·L2 + 1`.
#[inline]
fn m_index(twice_m: i64, l2: i64) -> usize {
    (twice_m + l2) as usize
}

fn su2_forward<T: Real>(
    samples: &[Complex<T>],
    n_alpha: usize,
    n_gamma: usize,
    cos_beta: &[T],
    beta_weights: &[T],
    dual: &Arc<DualSlice<T>>,
) -> Result<FourierCoefficients<T>> {
    let l2 = dual.max_twice_spin().unwrap_or(0);
    if l2 > MAX_TWICE_SPIN {
        return Err(Error::OutOfValidatedRange { spin: f64::from(l2) / 2.0, max: f64::from(MAX_TWICE_SPIN) / 2.0 });
    }
    let l2i = i64::from(l2);
    let kdim = 2 * l2 as usize + 1;
    let roots_g = roots_of_unity::<T>(n_gamma);
    let roots_a = roots_of_unity::<T>(2 * n_alpha);
    let inv_g = T::one() / T::from_count(n_gamma);
    let inv_a = T::one() / T::from_count(n_alpha);
    // γ kernel: e^{i m γ_t} = e^{2πi (2m) t / Nγ}, scaled by 1/Nγ.
    let kern_g: Vec<Complex<T>> = (0..kdim)
        .flat_map(|mi| {
            let tm = mi as i64 - l2i;
            let r = &roots_g;
            (0..n_gamma).map(move |t| r[(tm * t as i64).rem_euclid(n_gamma as i64) as usize] * inv_g)
        })
        .collect();
    // α kernel: e^{i m' α_s} = e^{2πi (2m') s / (2Nα)}, scaled by 1/Nα.
    let kern_a: Vec<Complex<T>> = (0..kdim)
        .flat_map(|mi| {
            let tm = mi as i64 - l2i;
            let r = &roots_a;
            (0..n_alpha).map(move |s| r[(tm * s as i64).rem_euclid(2 * n_alpha as i64) as usize] * inv_a)
        })
        .collect();
    let mut blocks: Vec<CMatrix<T>> = dual.irreps().iter().map(|x| CMatrix::zeros(x.dim, x.dim)).collect();
    let spins: Vec<(usize, u32)> = dual
        .irreps()
        .iter()
        .enumerate()
        .map(|(i, x)| (i, x.label.twice_spin().expect("spin label")))
        .collect();
    let plane = n_alpha * n_gamma;
    let mut g_buf = vec![Complex::zero(); n_alpha * kdim];
    let mut f_buf = vec![Complex::zero(); kdim * kdim];
    for (ib, (&x, &wb)) in cos_beta.iter().zip(beta_weights).enumerate() {
        let slab = &samples[ib * plane..(ib + 1) * plane];
        // G[s][m] = (1/Nγ) Σ_t f(s,t) e^{i m γ_t}
        for s in 0..n_alpha {
            let row = &slab[s * n_gamma..(s + 1) * n_gamma];
            for mi in 0..kdim {
                let k = &kern_g[mi * n_gamma..(mi + 1) * n_gamma];
                g_buf[s * kdim + mi] = row.iter().zip(k).map(|(a, b)| a * b).sum();
            }
        }
        // F[m'][m] = (1/Nα) Σ_s G[s][m] e^{i m' α_s}, only for matching parity.
        for mpi in 0..kdim {
            let k = &kern_a[mpi * n_alpha..(mpi + 1) * n_alpha];
            for mi in 0..kdim {
                if (mpi + mi) % 2 == 1 {
                    continue;
                }
                let mut acc = Complex::zero();
                for s in 0..n_alpha {
                    acc = acc + k[s] * g_buf[s * kdim + mi];
                }
                f_buf[mpi * kdim + mi] = acc;
            }
        }
        let ld = LittleD::from_cos_beta(x, l2);
        for &(pos, k) in &spins {
            let d = ld.block(k);
            let dim = k as usize + 1;
            let blk = blocks[pos].as_mut_slice();
            for i in 0..dim {
                let mi = m_index(i64::from(k) - 2 * i as i64, l2i);
                for j in 0..dim {
                    let mj = m_index(i64::from(k) - 2 * j as i64, l2i);
                    blk[i * dim + j] = blk[i * dim + j] + f_buf[mj * kdim + mi] * (wb * d[j * dim + i]);
                }
            }
        }
    }
    Ok(FourierCoefficients { dual: Arc::clone(dual), blocks })
}

fn su2_inverse<T: Real>(coeffs: &FourierCoefficients<T>, n_alpha: usize, n_gamma: usize, cos_beta: &[T]) -> Result<Vec<Complex<T>>> {
    let dual = coeffs.dual();
    let l2 = dual.max_twice_spin().unwrap_or(0);
    if l2 > MAX_TWICE_SPIN {
        return Err(Error::OutOfValidatedRange { spin: f64::from(l2) / 2.0, max: f64::from(MAX_TWICE_SPIN) / 2.0 });
    }
    let l2i = i64::from(l2);
    let kdim = 2 * l2 as usize + 1;
    let roots_g = roots_of_unity::<T>(n_gamma);
    let roots_a = roots_of_unity::<T>(2 * n_alpha);
    // e^{-i m' α_s}
    let kern_a: Vec<Complex<T>> = (0..n_alpha)
        .flat_map(|s| {
            let r = &roots_a;
            (0..kdim).map(move |mi| {
                let tm = mi as i64 - l2i;
                r[(-tm * s as i64).rem_euclid(2 * n_alpha as i64) as usize]
            })
        })
        .collect();
    // e^{-i m γ_t}
    let kern_g: Vec<Complex<T>> = (0..n_gamma)
        .flat_map(|t| {
            let r = &roots_g;
            (0..kdim).map(move |mi| {
                let tm = mi as i64 - l2i;
                r[(-tm * t as i64).rem_euclid(n_gamma as i64) as usize]
            })
        })
        .collect();
    let spins: Vec<(usize, u32)> = dual
        .irreps()
        .iter()
        .enumerate()
        .map(|(i, x)| (i, x.label.twice_spin().expect("spin label")))
        .collect();
    let plane = n_alpha * n_gamma;
    let mut out = vec![Complex::<T>::zero(); cos_beta.len() * plane];
    let mut h_buf = vec![Complex::<T>::zero(); kdim * kdim];
    let mut p_buf = vec![Complex::<T>::zero(); n_alpha * kdim];
    for (ib, &x) in cos_beta.iter().enumerate() {
        h_buf.iter_mut().for_each(|v| *v = Complex::zero());
        let ld = LittleD::from_cos_beta(x, l2);
        // H[m'][m] = Σ_ℓ d_ℓ d^ℓ_{m'm} f̂(ℓ)_{m, m'}
        for &(pos, k) in &spins {
            let d = ld.block(k);
            let dim = k as usize + 1;
            let dimf = T::from_count(dim);
            let blk = coeffs.blocks()[pos].as_slice();
            for ip in 0..dim {
                let mpi = m_index(i64::from(k) - 2 * ip as i64, l2i);
                for i in 0..dim {
                    let mi = m_index(i64::from(k) - 2 * i as i64, l2i);
                    h_buf[mpi * kdim + mi] = h_buf[mpi * kdim + mi] + blk[i * dim + ip] * (dimf * d[ip * dim + i]);
                }
            }
        }
        // P[s][m] = Σ_{m'} e^{-i m' α_s} H[m'][m]
        for s in 0..n_alpha {
            let k = &kern_a[s * kdim..(s + 1) * kdim];
            for mi in 0..kdim {
                let mut acc = Complex::<T>::zero();
                let mut mpi = mi % 2;
                while mpi < kdim {
                    acc = acc + k[mpi] * h_buf[mpi * kdim + mi];
                    mpi += 2;
                }
                p_buf[s * kdim + mi] = acc;
            }
        }
        // f[s][t] = Σ_m e^{-i m γ_t} P[s][m]
        let slab = &mut out[ib * plane..(ib + 1) * plane];
        for s in 0..n_alpha {
            let prow = &p_buf[s * kdim..(s + 1) * kdim];
            for t in 0..n_gamma {
                let k = &kern_g[t * kdim..(t + 1) * kdim];
                slab[s * n_gamma + t] = prow.iter().zip(k).map(|(a, b)| a * b).sum();
            }
        }
    }
    Ok(out)
}

fn su2_evaluate<T: Real>(coeffs: &FourierCoefficients<T>, points: &[GroupPoint<T>]) -> Result<Vec<Complex<T>>> {
    let dual = coeffs.dual();
    let l2 = dual.max_twice_spin().unwrap_or(0);
    if l2 > MAX_TWICE_SPIN {
        return Err(Error::OutOfValidatedRange { spin: f64::from(l2) / 2.0, max: f64::from(MAX_TWICE_SPIN) / 2.0 });
    }
    let spins: Vec<u32> = dual.irreps().iter().map(|x| x.label.twice_spin().unwrap()).collect();
    if coeffs.is_scalar_identity() {
        // Σ_ℓ d_ℓ c_ℓ χ_ℓ(x): characters only depend on the rotation angle.
        let scal: Vec<Complex<T>> = coeffs.blocks().iter().map(|b| b.as_scalar_identity().unwrap()).collect();
        return Ok(points
            .iter()
            .map(|p| {
                let u = p.su2_element().unwrap();
                let ch = wigner::characters(u.a.re.max(-T::one()).min(T::one()), l2);
                spins
                    .iter()
                    .zip(&scal)
                    .map(|(&k, c)| c * (T::from_count(k as usize + 1) * ch[k as usize]))
                    .sum()
            })
            .collect());
    }
    Ok(points
        .iter()
        .map(|p| {
            let e = p.as_euler().unwrap();
            let ld = LittleD::from_beta(e.beta, l2);
            let mut total = Complex::zero();
            for (&k, b) in spins.iter().zip(coeffs.blocks()) {
                let rep = wigner::wigner_from_little_d(k, ld.block(k), e.alpha, e.gamma);
                let dim = k as usize + 1;
                let mut tr = Complex::zero();
                for i in 0..dim {
                    for j in 0..dim {
                        tr = tr + rep[(i, j)] * b[(j, i)];
                    }
                }
                total = total + tr * T::from_count(dim);
            }
            total
        })
        .collect())
}
