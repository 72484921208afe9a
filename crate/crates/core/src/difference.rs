//! Difference operators on the dual and the dual Sobolev norm.
//!
//! A difference operator is `Δ_q σ = (q f)^` where `σ = f̂` and `q` vanishes at
//! the identity. The first-order generators are
//!
//! * torus: `q_j(x) = e^{−2πi x_j} − 1`, so `Δ_j σ(ξ) = σ(ξ + e_j) − σ(ξ)`;
//! * SU(2): `q_{ij}(x) = U(x)_{ij} − δ_{ij}` for the fundamental matrix `U`,
//!   ordered `(0,0), (0,1), (1,0), (1,1)`.
//!
//! Multi-indices count how often each generator is applied. The product
//! `q^α f` is formed on a grid fine enough for the transform back to be exact.

use std::sync::Arc;

use num_traits::Zero;

use crate::dual::IrrepLabel;
use crate::error::{Error, Result};
use crate::grid::{build_grid, Bandlimit, GridLayout, QuadratureGrid};
use crate::group::{GroupDescriptor, GroupKind, GroupPoint};
use crate::scalar::{roots_of_unity, Complex, Real};
use crate::symbol::Symbol;
use crate::transform::{forward_transform, inverse_on_grid, GridFunction};
use crate::wigner::half_angle_from_cos;

/// Number of first-order generators: `n` on `𝕋ⁿ`, four on SU(2).
pub fn generator_count(group: &GroupDescriptor) -> usize {
    match group.kind() {
        GroupKind::Torus(n) => n,
        GroupKind::Su2 => 4,
    }
}

/// Values of every generator at a point.
pub fn evaluate_generators<T: Real>(x: &GroupPoint<T>) -> Vec<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    match x {
        GroupPoint::Torus(p) => p
            .coords()
            .iter()
            .map(|&c| Complex::new((T::TAU() * c).cos(), -(T::TAU() * c).sin()) - one)
            .collect(),
        GroupPoint::Su2(_) => {
            let u = x.su2_element().expect("su2 point").matrix();
            vec![u[0][0] - one, u[0][1], u[1][0], u[1][1] - one]
        }
    }
}

/// All multi-indices of the given order over `count` generators, in
/// lexicographically descending order.
pub fn multi_indices(count: usize, order: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, count: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == count {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=left).rev() {
            prefix.push(a);
            rec(prefix, count, left - a, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if count > 0 {
        rec(&mut Vec::with_capacity(count), count, order, &mut out);
    }
    out
}

pub fn order_of(alpha: &[u32]) -> u32 {
    alpha.iter().sum()
}

/// Smallest working cutoff for which every irrep with `⟨ξ⟩ ≤ output_cutoff`
/// stays trusted after a difference of the given order.
pub fn required_cutoff<T: Real>(group: &GroupDescriptor, order: u32, output_cutoff: T) -> T {
    let ord = T::from_count(order as usize);
    let lam2 = (output_cutoff * output_cutoff - T::one()).max(T::zero());
    if group.is_su2() {
        let spin = ((T::one() + T::lit(4.0) * lam2).sqrt() - T::one()) * T::lit(0.5);
        let l = spin + ord * T::lit(0.5);
        (T::one() + l * (l + T::one())).sqrt()
    } else {
        let r = lam2.sqrt() + ord;
        (T::one() + r * r).sqrt()
    }
}

/// Applies differences of one symbol for many multi-indices, reusing the
/// symbol's samples on a common grid.
#[derive(Debug)]
pub struct DifferenceEngine<T> {
    symbol: Symbol<T>,
    grid: Arc<QuadratureGrid<T>>,
    samples: Vec<Complex<T>>,
    max_order: u32,
}

impl<T: Real> DifferenceEngine<T> {
    pub fn new(symbol: &Symbol<T>, max_order: u32) -> Result<Self> {
        let dual = symbol.dual();
        let extent = dual.extent();
        let bandlimit = match dual.group().kind() {
            GroupKind::Torus(_) => Bandlimit::integer(extent.ceil_integer() + max_order),
            GroupKind::Su2 => extent.plus_twice(max_order),
        };
        let grid = Arc::new(build_grid(&dual.group(), bandlimit));
        let samples = inverse_on_grid(symbol.as_coefficients(), &grid)?.into_samples();
        Ok(Self { symbol: symbol.clone(), grid, samples, max_order })
    }

    pub fn symbol(&self) -> &Symbol<T> {
        &self.symbol
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// `Δ^α σ`, trusted on irreps whose coupled neighbours are trusted inputs.
    pub fn apply(&self, alpha: &[u32]) -> Result<Symbol<T>> {
        let dual = self.symbol.dual();
        let group = dual.group();
        if alpha.len() != generator_count(&group) {
            return Err(Error::Precondition(format!(
                "multi-index of length {} for {} generators",
                alpha.len(),
                generator_count(&group)
            )));
        }
        let order = order_of(alpha);
        if order > self.max_order {
            return Err(Error::Precondition(format!(
                "order {order} exceeds the engine's maximum {}",
                self.max_order
            )));
        }
        let valid = output_validity(&self.symbol, alpha);
        if !valid.iter().any(|&v| v) {
            return Err(Error::InsufficientMargin {
                required: required_cutoff(&group, order, T::one()).as_f64(),
                available: dual.cutoff().as_f64(),
            });
        }
        if order == 0 {
            return Ok(self.symbol.clone());
        }
        let product = multiply_by_generators(&self.grid, &self.samples, alpha);
        let coeffs = forward_transform(&GridFunction::new(&self.grid, product)?, dual)?;
        Symbol::with_validity(coeffs, valid)
    }
}

/// `Δ^α σ` for a single multi-index.
pub fn apply_difference<T: Real>(symbol: &Symbol<T>, alpha: &[u32]) -> Result<Symbol<T>> {
    DifferenceEngine::new(symbol, order_of(alpha))?.apply(alpha)
}

fn output_validity<T: Real>(symbol: &Symbol<T>, alpha: &[u32]) -> Vec<bool> {
    let dual = symbol.dual();
    let trusted = |label: &IrrepLabel| dual.position(label).is_some_and(|p| symbol.is_valid(p));
    dual.irreps()
        .iter()
        .map(|x| match x.label {
            IrrepLabel::Torus(freq) => {
                // Every shift 0 ≤ δ ≤ α must land on a trusted irrep.
                let total: usize = alpha.iter().map(|&a| a as usize + 1).product();
                (0..total).all(|mut flat| {
                    let mut delta = [0i32; 3];
                    for (d, &a) in delta.iter_mut().zip(alpha) {
                        let side = a as usize + 1;
                        *d = (flat % side) as i32;
                        flat /= side;
                    }
                    trusted(&IrrepLabel::Torus(freq.shifted(&delta[..alpha.len()])))
                })
            }
            IrrepLabel::Spin(k) => {
                let reach = order_of(alpha);
                let lo = k.saturating_sub(reach);
                (lo..=k + reach).all(|kk| trusted(&IrrepLabel::Spin(kk)))
            }
        })
        .collect()
}

/// Per-axis factors from which the generators are assembled at grid points.
enum GeneratorTables<T> {
    Torus {
        dim: usize,
        per_axis: usize,
        /// `e^{−2πi t/N}`.
        phase: Vec<Complex<T>>,
    },
    Su2 {
        n_alpha: usize,
        n_gamma: usize,
        /// `e^{−iα_s/2}`.
        half_alpha: Vec<Complex<T>>,
        /// `e^{−iγ_t/2}`.
        half_gamma: Vec<Complex<T>>,
        /// `(cos β/2, sin β/2)` per node.
        half_beta: Vec<(T, T)>,
    },
}

impl<T: Real> GeneratorTables<T> {
    fn new(grid: &QuadratureGrid<T>) -> Self {
        match &grid.layout {
            GridLayout::Torus { dim, per_axis } => {
                let roots = roots_of_unity::<T>(*per_axis);
                let phase = (0..*per_axis).map(|t| roots[(per_axis - t) % per_axis]).collect();
                Self::Torus { dim: *dim, per_axis: *per_axis, phase }
            }
            GridLayout::Su2 { n_alpha, n_gamma, cos_beta, .. } => {
                let ra = roots_of_unity::<T>(2 * n_alpha);
                let rg = roots_of_unity::<T>(*n_gamma);
                Self::Su2 {
                    n_alpha: *n_alpha,
                    n_gamma: *n_gamma,
                    half_alpha: (0..*n_alpha).map(|s| ra[(2 * n_alpha - s) % (2 * n_alpha)]).collect(),
                    half_gamma: (0..*n_gamma).map(|t| rg[(n_gamma - t) % n_gamma]).collect(),
                    half_beta: cos_beta.iter().map(|&x| half_angle_from_cos(x)).collect(),
                }
            }
        }
    }

    /// Generator values at grid point `i`, written into `out`.
    fn at(&self, i: usize, out: &mut [Complex<T>]) {
        let one = Complex::new(T::one(), T::zero());
        match self {
            Self::Torus { dim, per_axis, phase } => {
                let mut rest = i;
                for axis in (0..*dim).rev() {
                    out[axis] = phase[rest % per_axis] - one;
                    rest /= per_axis;
                }
            }
            Self::Su2 { n_alpha, n_gamma, half_alpha, half_gamma, half_beta } => {
                let ig = i % n_gamma;
                let ia = (i / n_gamma) % n_alpha;
                let ib = i / (n_gamma * n_alpha);
                let (c, s) = half_beta[ib];
                let a = half_alpha[ia] * half_gamma[ig] * c;
                let b = half_alpha[ia].conj() * half_gamma[ig] * s;
                out[0] = a - one;
                out[1] = -b.conj();
                out[2] = b;
                out[3] = a.conj() - one;
            }
        }
    }

    /// `q₁(x)²` at grid point `i`.
    fn q1_sqr(&self, i: usize, scratch: &mut [Complex<T>]) -> T {
        self.at(i, scratch);
        match self {
            Self::Torus { dim, .. } => scratch[..*dim].iter().map(|z| z.norm_sqr()).sum(),
            Self::Su2 { .. } => scratch.iter().map(|z| z.norm_sqr()).sum::<T>() * T::lit(0.5),
        }
    }
}

fn multiply_by_generators<T: Real>(grid: &QuadratureGrid<T>, samples: &[Complex<T>], alpha: &[u32]) -> Vec<Complex<T>> {
    let tables = GeneratorTables::new(grid);
    let mut q = vec![Complex::zero(); 4];
    samples
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            tables.at(i, &mut q);
            let mut v = f;
            for (qj, &a) in q.iter().zip(alpha) {
                for _ in 0..a {
                    v = v * qj;
                }
            }
            v
        })
        .collect()
}

/// `‖q₁^s f‖_{L²(G)}` with `f̂ = σ`. The integrand `q₁^{2s}|f|²` is band-limited
/// for integer `s`, and the grid is chosen to integrate it exactly then.
pub fn dual_sobolev_norm<T: Real>(symbol: &Symbol<T>, s: T) -> Result<T> {
    if !(s >= T::zero()) || !s.is_finite() {
        return Err(Error::Configuration(format!("Sobolev order {s} must be finite and >= 0")));
    }
    let dual = symbol.dual();
    let extra = s.ceil().to_u32().unwrap_or(0);
    let extent = dual.extent();
    let bandlimit = match dual.group().kind() {
        GroupKind::Torus(_) => Bandlimit::integer(extent.ceil_integer() + extra),
        GroupKind::Su2 => extent.plus_twice(2 * extra),
    };
    let grid = Arc::new(build_grid(&dual.group(), bandlimit));
    weighted_l2(&grid, symbol, s)
}

fn weighted_l2<T: Real>(grid: &Arc<QuadratureGrid<T>>, symbol: &Symbol<T>, s: T) -> Result<T> {
    let f = inverse_on_grid(symbol.as_coefficients(), grid)?;
    let tables = GeneratorTables::new(grid);
    let mut scratch = vec![Complex::zero(); 4];
    let total: T = f
        .samples()
        .iter()
        .zip(grid.weights())
        .enumerate()
        .map(|(i, (v, w))| {
            let weight = if s == T::zero() { T::one() } else { tables.q1_sqr(i, &mut scratch).powf(s) };
            weight * v.norm_sqr() * w
        })
        .sum();
    Ok(total.sqrt())
}
