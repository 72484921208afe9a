//! Quadrature grids that integrate band-limited functions exactly.
//!
//! A grid of bandlimit `B` integrates every function whose irrep content stays
//! within label `2B` exactly; in particular the product of two matrix
//! coefficients of irreps with labels at most `B`.
//!
//! * Torus: `2B + 1` equispaced points per axis, equal weights.
//! * SU(2): `4B + 2` equispaced angles in `α ∈ [0, 2π)` and in `γ ∈ [0, 4π)`,
//!   `2B + 1` Gauss-Legendre nodes in `cos β`; the GL weights carry the
//!   `sin β dβ` part of the Haar density.

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupKind, GroupPoint};
use crate::scalar::Real;

/// Largest irrep label a grid resolves: `max_j |ξ_j|` on a torus, the spin
/// `ℓ` on SU(2). Stored doubled so half-integer spins are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bandlimit(u32);

impl Bandlimit {
    /// Integer bandlimit (torus frequency or integer spin).
    pub fn integer(n: u32) -> Self {
        Self(2 * n)
    }

    /// Bandlimit `k/2`.
    pub fn from_twice(k: u32) -> Self {
        Self(k)
    }

    #[inline]
    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Smallest integer bandlimit at or above this one.
    pub fn ceil_integer(self) -> u32 {
        self.0.div_ceil(2)
    }

    pub fn max(self, other: Self) -> Self {
        Self(self.0.max(other.0))
    }

    pub fn plus_twice(self, k: u32) -> Self {
        Self(self.0 + k)
    }
}

#[derive(Clone, Debug)]
pub(crate) enum GridLayout<T> {
    Torus {
        dim: usize,
        per_axis: usize,
    },
    Su2 {
        n_alpha: usize,
        n_gamma: usize,
        /// Nodes `x = cos β`, descending.
        cos_beta: Vec<T>,
        /// GL weights normalised to sum 1.
        beta_weights: Vec<T>,
    },
}

#[derive(Clone, Debug)]
pub struct QuadratureGrid<T> {
    group: GroupDescriptor,
    bandlimit: Bandlimit,
    pub(crate) layout: GridLayout<T>,
}

impl<T: Real> QuadratureGrid<T> {
    pub fn group(&self) -> GroupDescriptor {
        self.group
    }

    pub fn bandlimit(&self) -> Bandlimit {
        self.bandlimit
    }

    pub fn len(&self) -> usize {
        match &self.layout {
            GridLayout::Torus { dim, per_axis } => per_axis.pow(*dim as u32),
            GridLayout::Su2 { n_alpha, n_gamma, cos_beta, .. } => n_alpha * n_gamma * cos_beta.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Torus grids: points per coordinate axis.
    pub fn points_per_axis(&self) -> Option<usize> {
        match &self.layout {
            GridLayout::Torus { per_axis, .. } => Some(*per_axis),
            GridLayout::Su2 { .. } => None,
        }
    }

    /// SU(2) grids: `(n_alpha, n_beta, n_gamma)`.
    pub fn euler_shape(&self) -> Option<(usize, usize, usize)> {
        match &self.layout {
            GridLayout::Su2 { n_alpha, n_gamma, cos_beta, .. } => Some((*n_alpha, cos_beta.len(), *n_gamma)),
            GridLayout::Torus { .. } => None,
        }
    }

    /// Grid point `i`. Torus points are ordered lexicographically with the last
    /// axis fastest; SU(2) points with `β` slowest, then `α`, then `γ`.
    pub fn point(&self, i: usize) -> GroupPoint<T> {
        match &self.layout {
            GridLayout::Torus { dim, per_axis } => {
                let mut coords = [T::zero(); 3];
                let mut rest = i;
                for axis in (0..*dim).rev() {
                    let k = rest % per_axis;
                    rest /= per_axis;
                    coords[axis] = T::from_count(k) / T::from_count(*per_axis);
                }
                GroupPoint::torus(&coords[..*dim]).expect("valid torus dimension")
            }
            GridLayout::Su2 { n_alpha, n_gamma, cos_beta, .. } => {
                let ig = i % n_gamma;
                let ia = (i / n_gamma) % n_alpha;
                let ib = i / (n_gamma * n_alpha);
                let alpha = T::TAU() * T::from_count(ia) / T::from_count(*n_alpha);
                let gamma = T::lit(2.0) * T::TAU() * T::from_count(ig) / T::from_count(*n_gamma);
                let beta = cos_beta[ib].max(-T::one()).min(T::one()).acos();
                GroupPoint::su2(alpha, beta, gamma)
            }
        }
    }

    pub fn weight(&self, i: usize) -> T {
        match &self.layout {
            GridLayout::Torus { .. } => T::one() / T::from_count(self.len()),
            GridLayout::Su2 { n_alpha, n_gamma, beta_weights, .. } => {
                let ib = i / (n_gamma * n_alpha);
                beta_weights[ib] / T::from_count(n_alpha * n_gamma)
            }
        }
    }

    pub fn points(&self) -> impl Iterator<Item = GroupPoint<T>> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    pub fn weights(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len()).map(move |i| self.weight(i))
    }
}

/// Builds the exactness grid of the given bandlimit. Torus bandlimits are
/// rounded up to an integer.
pub fn build_grid<T: Real>(group: &GroupDescriptor, bandlimit: Bandlimit) -> QuadratureGrid<T> {
    match group.kind() {
        GroupKind::Torus(dim) => {
            let b = bandlimit.ceil_integer();
            QuadratureGrid {
                group: *group,
                bandlimit: Bandlimit::integer(b),
                layout: GridLayout::Torus { dim, per_axis: 2 * b as usize + 1 },
            }
        }
        GroupKind::Su2 => {
            let twice = bandlimit.twice() as usize;
            let n_angle = 2 * twice + 2;
            let n_beta = twice + 1;
            let (cos_beta, gl_weights) = gauss_legendre::<T>(n_beta);
            let total: T = gl_weights.iter().copied().sum();
            let beta_weights = gl_weights.iter().map(|&w| w / total).collect();
            QuadratureGrid {
                group: *group,
                bandlimit,
                layout: GridLayout::Su2 { n_alpha: n_angle, n_gamma: n_angle, cos_beta, beta_weights },
            }
        }
    }
}

/// Like [`build_grid`], but rejects a request the caller expects to be integer
/// on a torus.
pub fn build_grid_checked<T: Real>(group: &GroupDescriptor, bandlimit: Bandlimit) -> Result<QuadratureGrid<T>> {
    if !group.is_su2() && bandlimit.twice() % 2 == 1 {
        return Err(Error::Configuration("torus bandlimit must be an integer".into()));
    }
    Ok(build_grid(group, bandlimit))
}

/// Gauss-Legendre nodes (descending) and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let nf = T::from_count(n);
    for i in 0..n {
        let mut x = (T::PI() * (T::from_count(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, pm1) = legendre_pair(n, x);
            dp = nf * (x * p - pm1) / (x * x - T::one());
            let dx = p / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                let (p, pm1) = legendre_pair(n, x);
                dp = nf * (x * p - pm1) / (x * x - T::one());
                break;
            }
        }
        nodes.push(x);
        weights.push(T::lit(2.0) / ((T::one() - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre_pair<T: Real>(n: usize, x: T) -> (T, T) {
    if n == 0 {
        return (T::one(), T::zero());
    }
    let (mut p0, mut p1) = (T::one(), x);
    for k in 2..=n {
        let kf = T::from_count(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_grid_counts_and_weights() {
        let g = GroupDescriptor::torus(1).unwrap();
        let grid = build_grid::<f64>(&g, Bandlimit::integer(4));
        assert_eq!(grid.len(), 9);
        assert!(grid.weights().all(|w| (w - 1.0 / 9.0).abs() < 1e-17));
        let total: f64 = grid.weights().sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn su2_weights_sum_to_one() {
        let grid = build_grid::<f64>(&GroupDescriptor::su2(), Bandlimit::from_twice(5));
        assert_eq!(grid.euler_shape(), Some((12, 6, 12)));
        let total: f64 = grid.weights().sum();
        assert!((total - 1.0).abs() < 1e-13);
        assert!(grid.weights().all(|w| w > 0.0));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre::<f64>(7);
        for deg in 0..=13 {
            let num: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((num - exact).abs() < 1e-14, "degree {deg}: {num} vs {exact}");
        }
    }

    #[test]
    fn odd_torus_bandlimit_rejected_by_checked_builder() {
        let g = GroupDescriptor::torus(2).unwrap();
        assert!(build_grid_checked::<f64>(&g, Bandlimit::from_twice(3)).is_err());
        assert_eq!(build_grid::<f64>(&g, Bandlimit::from_twice(3)).points_per_axis(), Some(5));
    }
}
