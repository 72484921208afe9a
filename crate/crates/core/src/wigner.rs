//! Wigner little-d matrices and SU(2) characters.
//!
//! The little-d matrices are built spin by spin, coupling `d^{j-1/2}` with the
//! spin-1/2 matrix through the stretched Clebsch-Gordan coefficients. Every
//! step is a convex-type combination of bounded terms, so the recursion stays
//! accurate for all spins used here without factorials.
//!
//! Index convention: row/column `i` of a spin-`j` block carries `m = j - i`.

use crate::linalg::CMatrix;
use crate::scalar::{cis, Real};

/// Largest doubled spin with validated Wigner matrices (`ℓ ≤ 64`).
pub const MAX_TWICE_SPIN: u32 = 128;

/// `d^j(β)` for every `2j = 0..=twice_max`.
#[derive(Clone, Debug)]
pub struct LittleD<T> {
    blocks: Vec<Vec<T>>,
}

impl<T: Real> LittleD<T> {
    /// From `c = cos(β/2)`, `s = sin(β/2)`.
    pub fn from_half_angle(c: T, s: T, twice_max: u32) -> Self {
        let kmax = twice_max as usize;
        let roots: Vec<T> = (0..=kmax + 1).map(|k| T::from_count(k).sqrt()).collect();
        let mut blocks: Vec<Vec<T>> = Vec::with_capacity(kmax + 1);
        blocks.push(vec![T::one()]);
        for k in 1..=kmax {
            let prev = &blocks[k - 1];
            let pw = k; // width of the previous block
            let inv = T::one() / T::from_count(k);
            let mut cur = vec![T::zero(); (k + 1) * (k + 1)];
            for ip in 0..=k {
                for i in 0..=k {
                    let mut acc = T::zero();
                    if ip < k && i < k {
                        acc = acc + roots[k - ip] * roots[k - i] * c * prev[ip * pw + i];
                    }
                    if ip < k && i >= 1 {
                        acc = acc - roots[k - ip] * roots[i] * s * prev[ip * pw + i - 1];
                    }
                    if ip >= 1 && i < k {
                        acc = acc + roots[ip] * roots[k - i] * s * prev[(ip - 1) * pw + i];
                    }
                    if ip >= 1 && i >= 1 {
                        acc = acc + roots[ip] * roots[i] * c * prev[(ip - 1) * pw + i - 1];
                    }
                    cur[ip * (k + 1) + i] = acc * inv;
                }
            }
            blocks.push(cur);
        }
        Self { blocks }
    }

    /// From `x = cos β`.
    pub fn from_cos_beta(x: T, twice_max: u32) -> Self {
        let (c, s) = half_angle_from_cos(x);
        Self::from_half_angle(c, s, twice_max)
    }

    pub fn from_beta(beta: T, twice_max: u32) -> Self {
        let (s, c) = (beta * T::lit(0.5)).sin_cos();
        Self::from_half_angle(c, s, twice_max)
    }

    pub fn twice_max(&self) -> u32 {
        (self.blocks.len() - 1) as u32
    }

    /// Row-major `(2j+1)²` entries of `d^j`.
    #[inline]
    pub fn block(&self, twice: u32) -> &[T] {
        &self.blocks[twice as usize]
    }
}

/// `(cos(β/2), sin(β/2))` from `cos β`.
#[inline]
pub fn half_angle_from_cos<T: Real>(x: T) -> (T, T) {
    let half = T::lit(0.5);
    let c = ((T::one() + x) * half).max(T::zero()).sqrt();
    let s = ((T::one() - x) * half).max(T::zero()).sqrt();
    (c, s)
}

/// Full Wigner matrix `D^j_{m'm} = e^{-im'α} d^j_{m'm}(β) e^{-imγ}`.
pub fn wigner_matrix<T: Real>(twice: u32, alpha: T, beta: T, gamma: T) -> CMatrix<T> {
    let d = LittleD::from_beta(beta, twice);
    wigner_from_little_d(twice, d.block(twice), alpha, gamma)
}

pub(crate) fn wigner_from_little_d<T: Real>(twice: u32, d: &[T], alpha: T, gamma: T) -> CMatrix<T> {
    let dim = twice as usize + 1;
    let half = T::lit(0.5);
    // m = j − i, so 2m = twice − 2i.
    let m_of = |i: usize| (T::from_count(twice as usize) - T::lit(2.0) * T::from_count(i)) * half;
    let pa: Vec<_> = (0..dim).map(|i| cis(-m_of(i) * alpha)).collect();
    let pg: Vec<_> = (0..dim).map(|i| cis(-m_of(i) * gamma)).collect();
    CMatrix::from_fn(dim, dim, |ip, i| pa[ip] * pg[i] * d[ip * dim + i])
}

/// Characters `χ_j(θ) = sin((2j+1)θ)/sin θ = U_{2j}(cos θ)` for `2j = 0..=twice_max`.
pub fn characters<T: Real>(cos_theta: T, twice_max: u32) -> Vec<T> {
    let mut out = Vec::with_capacity(twice_max as usize + 1);
    let two_x = cos_theta + cos_theta;
    let (mut u0, mut u1) = (T::one(), two_x);
    out.push(u0);
    for _ in 1..=twice_max {
        out.push(u1);
        let u2 = two_x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    out
}
