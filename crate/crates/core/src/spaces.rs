//! Littlewood-Paley partition and the Lebesgue and Triebel-Lizorkin norms.
//!
//! The partition is built from the smooth transition
//! `φ(λ) = h(2 − λ) / (h(2 − λ) + h(λ − 1))`, `h(t) = e^{−1/t}` for `t > 0`,
//! which is `1` for `λ ≤ 1` and `0` for `λ ≥ 2`. Then `η(λ) = φ(λ) − φ(2λ)`,
//! `ψ₀ = φ` and `ψ_ℓ(λ) = η(2^{−ℓ} λ)`, so every partial sum telescopes:
//! `Σ_{ℓ ≤ L} ψ_ℓ(λ) = φ(2^{−L} λ)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::QuadratureGrid;
use crate::scalar::Real;
use crate::transform::{inverse_on_grid, FourierCoefficients, GridFunction};

fn h<T: Real>(t: T) -> T {
    if t > T::zero() {
        (-t.recip()).exp()
    } else {
        T::zero()
    }
}

/// The dyadic partition `η`, `ψ₀, ψ₁, …`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LpPartition;

impl LpPartition {
    pub fn new() -> Self {
        Self
    }

    /// Smooth transition from 1 (`λ ≤ 1`) to 0 (`λ ≥ 2`).
    pub fn phi<T: Real>(&self, lambda: T) -> T {
        if lambda <= T::one() {
            return T::one();
        }
        let two = T::lit(2.0);
        if lambda >= two {
            return T::zero();
        }
        let a = h(two - lambda);
        a / (a + h(lambda - T::one()))
    }

    /// Bump supported in `(1/2, 2)`.
    pub fn eta<T: Real>(&self, lambda: T) -> T {
        self.phi(lambda) - self.phi(lambda + lambda)
    }

    /// `ψ₀ = φ`, `ψ_ℓ(λ) = η(2^{−ℓ} λ)` for `ℓ ≥ 1`.
    pub fn psi<T: Real>(&self, l: u32, lambda: T) -> T {
        if l == 0 {
            self.phi(lambda)
        } else {
            self.eta(lambda * T::lit(0.5).powi(l as i32))
        }
    }

    /// Largest window index that can be nonzero below the cutoff:
    /// `⌈log₂ Λ⌉ + 1`.
    pub fn max_index<T: Real>(&self, cutoff: T) -> u32 {
        let c = cutoff.max(T::one()).log2().ceil().to_u32().unwrap_or(0);
        c + 1
    }
}

/// Smoothness `r`, integrability `p` and summability `q` of a Triebel-Lizorkin norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormSpec<T> {
    pub r: T,
    pub p: T,
    pub q: T,
}

impl<T: Real> NormSpec<T> {
    /// `p ∈ [1, ∞)` (the value 1 selects the weak norm), `q ∈ (1, ∞)`, `r` finite.
    pub fn new(r: T, p: T, q: T) -> Result<Self> {
        let spec = Self { r, p, q };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.r.is_finite() {
            return Err(Error::Configuration(format!("smoothness r = {} must be finite", self.r)));
        }
        if !(self.p >= T::one()) || !self.p.is_finite() {
            return Err(Error::Configuration(format!("integrability p = {} must lie in [1, inf)", self.p)));
        }
        if !(self.q > T::one()) || !self.q.is_finite() {
            return Err(Error::Configuration(format!("summability q = {} must lie in (1, inf)", self.q)));
        }
        Ok(())
    }

    pub fn is_weak(&self) -> bool {
        self.p == T::one()
    }
}

/// `ψ_ℓ(𝓑) f`: every block scaled by `ψ_ℓ(⟨ξ⟩)`.
pub fn lp_project<T: Real>(coeffs: &FourierCoefficients<T>, partition: &LpPartition, l: u32) -> FourierCoefficients<T> {
    let mut out = coeffs.clone();
    let dual = Arc::clone(coeffs.dual());
    for (x, b) in dual.irreps().iter().zip(out.blocks_mut()) {
        *b = b.scale_real(partition.psi(l, x.bracket));
    }
    out
}

/// `(Σ w |f|^p)^{1/p}`, or the largest sample for `p = ∞`.
pub fn lebesgue_norm<T: Real>(f: &GridFunction<T>, p: T) -> Result<T> {
    if !(p >= T::one()) {
        return Err(Error::Configuration(format!("Lebesgue exponent {p} must be >= 1")));
    }
    let mags = f.samples().iter().map(|z| z.norm());
    if p.is_infinite() {
        return Ok(mags.fold(T::zero(), T::max));
    }
    Ok(weighted_power_norm(mags, f.grid().weights(), p))
}

fn weighted_power_norm<T: Real>(values: impl Iterator<Item = T>, weights: impl Iterator<Item = T>, p: T) -> T {
    if p == T::one() {
        return values.zip(weights).map(|(v, w)| v * w).sum();
    }
    if p == T::lit(2.0) {
        return values.zip(weights).map(|(v, w)| v * v * w).sum::<T>().sqrt();
    }
    values.zip(weights).map(|(v, w)| v.powf(p) * w).sum::<T>().powf(p.recip())
}

/// Magnitudes `|ψ_ℓ(𝓑) f(x)|` on a grid for every window that meets the slice.
/// One decomposition serves every `(r, p, q)`.
#[derive(Clone, Debug)]
pub struct LpDecomposition<T> {
    grid: Arc<QuadratureGrid<T>>,
    /// `(ℓ, |ψ_ℓ(𝓑) f|)` for the nonzero windows.
    pieces: Vec<(u32, Vec<T>)>,
}

impl<T: Real> LpDecomposition<T> {
    pub fn new(coeffs: &FourierCoefficients<T>, partition: &LpPartition, grid: &Arc<QuadratureGrid<T>>) -> Result<Self> {
        let dual = coeffs.dual();
        if grid.bandlimit() < dual.extent() {
            return Err(Error::Precondition(format!(
                "grid bandlimit {} does not resolve the slice extent {}",
                grid.bandlimit().value(),
                dual.extent().value()
            )));
        }
        let mut pieces = Vec::new();
        for l in 0..=partition.max_index(dual.cutoff()) {
            let active = dual.irreps().iter().any(|x| partition.psi(l, x.bracket) != T::zero());
            if !active {
                continue;
            }
            let piece = inverse_on_grid(&lp_project(coeffs, partition, l), grid)?;
            pieces.push((l, piece.samples().iter().map(|z| z.norm()).collect()));
        }
        Ok(Self { grid: Arc::clone(grid), pieces })
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid<T>> {
        &self.grid
    }

    /// Window indices with a nonzero piece.
    pub fn windows(&self) -> impl Iterator<Item = u32> + '_ {
        self.pieces.iter().map(|(l, _)| *l)
    }

    /// Pointwise `(Σ_ℓ 2^{ℓrq} |ψ_ℓ(𝓑) f(x)|^q)^{1/q}`.
    pub fn aggregate(&self, r: T, q: T) -> Vec<T> {
        let mut acc = vec![T::zero(); self.grid.len()];
        for (l, mags) in &self.pieces {
            let weight = (T::from_count(*l as usize) * r).exp2();
            for (a, &m) in acc.iter_mut().zip(mags) {
                *a = *a + (weight * m).powf(q);
            }
        }
        let inv_q = q.recip();
        acc.into_iter().map(|a| a.powf(inv_q)).collect()
    }

    /// `‖f‖_{F^r_{p,q}}`.
    pub fn tl_norm(&self, spec: &NormSpec<T>) -> Result<T> {
        spec.validate()?;
        let g = self.aggregate(spec.r, spec.q);
        Ok(weighted_power_norm(g.into_iter(), self.grid.weights(), spec.p))
    }

    /// `sup_t t·|{x : g(x) > t}|` over the sampled levels of the aggregate `g`.
    pub fn weak_tl_norm(&self, spec: &NormSpec<T>) -> Result<T> {
        spec.validate()?;
        if !spec.is_weak() {
            return Err(Error::Configuration(format!("weak norm requires p = 1, got {}", spec.p)));
        }
        let g = self.aggregate(spec.r, spec.q);
        Ok(weak_level_sup(&g, &self.grid.weights().collect::<Vec<_>>()))
    }
}

/// `max_i g_i · μ{g ≥ g_i}`: the supremum of `t·μ{g > t}` as `t` approaches each
/// attained value from below.
pub fn weak_level_sup<T: Real>(values: &[T], weights: &[T]) -> T {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = T::zero();
    let mut mass = T::zero();
    let mut i = 0;
    while i < order.len() {
        let level = values[order[i]];
        while i < order.len() && values[order[i]] == level {
            mass = mass + weights[order[i]];
            i += 1;
        }
        best = best.max(level * mass);
    }
    best
}

/// `‖f‖_{F^r_{p,q}}` evaluated on `grid`.
pub fn triebel_lizorkin_norm<T: Real>(
    coeffs: &FourierCoefficients<T>,
    spec: &NormSpec<T>,
    partition: &LpPartition,
    grid: &Arc<QuadratureGrid<T>>,
) -> Result<T> {
    spec.validate()?;
    LpDecomposition::new(coeffs, partition, grid)?.tl_norm(spec)
}

/// Weak `F^r_{1,q}` norm evaluated on `grid`.
pub fn weak_tl_norm<T: Real>(
    coeffs: &FourierCoefficients<T>,
    spec: &NormSpec<T>,
    partition: &LpPartition,
    grid: &Arc<QuadratureGrid<T>>,
) -> Result<T> {
    spec.validate()?;
    LpDecomposition::new(coeffs, partition, grid)?.weak_tl_norm(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{enumerate_dual, spin_cutoff};
    use crate::grid::{build_grid, Bandlimit};
    use crate::group::GroupDescriptor;
    use crate::linalg::CMatrix;
    use crate::scalar::Complex;

    const P: LpPartition = LpPartition;

    #[test]
    fn partition_of_unity_at_sample_points() {
        for lambda in [1.0f64, 3.7, 100.0] {
            let s: f64 = (0..=10).map(|l| P.psi(l, lambda)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn support_and_low_piece() {
        assert_eq!(P.eta(0.49f64), 0.0);
        assert_eq!(P.eta(2.01f64), 0.0);
        assert_eq!(P.psi(0, 0.5f64), 1.0);
        assert_eq!(P.psi(0, 2.5f64), 0.0);
        assert!((0..200).all(|i| {
            let v = P.eta(0.5f64 + 1.5 * i as f64 / 200.0);
            (0.0..=1.0).contains(&v)
        }));
    }

    #[test]
    fn projection_window_two_keeps_open_interval() {
        let g = GroupDescriptor::torus(1).unwrap();
        let dual = Arc::new(enumerate_dual(&g, 12.0f64).unwrap());
        let ones = FourierCoefficients::from_fn(&dual, |_| CMatrix::identity(1)).unwrap();
        let proj = lp_project(&ones, &P, 2);
        for (x, b) in dual.irreps().iter().zip(proj.blocks()) {
            let kept = b[(0, 0)].norm() > 0.0;
            assert_eq!(kept, x.bracket > 2.0 && x.bracket < 8.0, "{}", x.label);
        }
    }

    #[test]
    fn l1_norm_of_shifted_mode() {
        let g = GroupDescriptor::torus(1).unwrap();
        let grid = Arc::new(build_grid(&g, Bandlimit::integer(4000)));
        let f = GridFunction::from_fn(&grid, |p| {
            let x: f64 = p.as_torus().unwrap().coords()[0];
            Complex::new((std::f64::consts::TAU * x).cos() + 1.0, (std::f64::consts::TAU * x).sin())
        });
        let v = lebesgue_norm(&f, 1.0).unwrap();
        assert!((v - 4.0 / std::f64::consts::PI).abs() < 1e-6);
        let one = GridFunction::from_fn(&grid, |_| Complex::new(1.0, 0.0));
        for p in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            assert!((lebesgue_norm(&one, p).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weak_norm_of_constant() {
        let w = vec![0.25f64; 4];
        assert!((weak_level_sup(&[3.0, 3.0, 3.0, 3.0], &w) - 3.0).abs() < 1e-15);
        assert_eq!(weak_level_sup(&[0.0; 4], &w), 0.0);
        assert!((weak_level_sup(&[4.0, 1.0, 1.0, 1.0], &w) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_window_function_has_lp_norm() {
        let g = GroupDescriptor::su2();
        let dual = Arc::new(enumerate_dual(&g, spin_cutoff::<f64>(12)).unwrap());
        // Only ψ₀ is nonzero at ⟨ξ⟩ = 1, and it equals 1 there.
        let f = FourierCoefficients::from_fn(&dual, |i| {
            let x = &dual.irreps()[i];
            if x.is_trivial() { CMatrix::scalar(1, Complex::new(2.5, 0.0)) } else { CMatrix::zeros(x.dim, x.dim) }
        })
        .unwrap();
        let grid = Arc::new(build_grid(&g, dual.extent()));
        let spec = NormSpec::new(0.7, 3.0, 2.0).unwrap();
        assert!((triebel_lizorkin_norm(&f, &spec, &P, &grid).unwrap() - 2.5).abs() < 1e-10);
    }

    #[test]
    fn norm_spec_ranges() {
        assert!(NormSpec::new(0.0, 0.5, 2.0).is_err());
        assert!(NormSpec::new(0.0, 2.0, 1.0).is_err());
        assert!(NormSpec::new(f64::NAN, 2.0, 2.0).is_err());
        assert!(NormSpec::new(0.0, 1.0, 2.0).unwrap().is_weak());
    }
}
