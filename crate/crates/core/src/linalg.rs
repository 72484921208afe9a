//! Small dense complex matrices: the per-irrep blocks of coefficients and symbols.

use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::scalar::{Complex, Real};

/// Row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Complex::one())
    }

    /// `value · I_n`.
    pub fn scalar(n: usize, value: Complex<T>) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = value;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries; `None` if the length does not match.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Self { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o = *o + a * *b;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let data = self.data.iter().map(|a| a * factor).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        let data = self.data.iter().map(|a| a * factor).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Squared Hilbert-Schmidt (Frobenius) norm.
    pub fn hs_norm_sqr(&self) -> T {
        self.data.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn hs_norm(&self) -> T {
        self.hs_norm_sqr().sqrt()
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|a| a.norm()).fold(T::zero(), T::max)
    }

    /// If the matrix is exactly `c · I`, returns `c`.
    pub fn as_scalar_identity(&self) -> Option<Complex<T>> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.data[0];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.data[i * self.cols + j];
                let ok = if i == j { v == c } else { v.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<T> {
        self.jacobi_svd(false).0
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> T {
        if self.rows == 1 && self.cols == 1 {
            return self.data[0].norm();
        }
        self.singular_values().first().copied().unwrap_or_else(T::zero)
    }

    /// Trace norm `Tr|M|`: the sum of the singular values.
    pub fn nuclear_norm(&self) -> T {
        if self.rows == 1 && self.cols == 1 {
            return self.data[0].norm();
        }
        self.singular_values().into_iter().sum()
    }

    /// Largest singular value with its right singular vector `v` (so `‖Mv‖ = σ₁`).
    pub fn top_right_singular_vector(&self) -> (T, Vec<Complex<T>>) {
        let (values, vectors) = self.jacobi_svd(true);
        let v = vectors.expect("vectors requested");
        (values[0], v.into_iter().next().unwrap_or_default())
    }

    /// One-sided (Hestenes) Jacobi SVD on the columns. Returns singular values in
    /// descending order and, optionally, the matching right singular vectors.
    fn jacobi_svd(&self, want_vectors: bool) -> (Vec<T>, Option<Vec<Vec<Complex<T>>>>) {
        let (m, n) = (self.rows, self.cols);
        if n == 0 || m == 0 {
            return (Vec::new(), want_vectors.then(Vec::new));
        }
        // Column-major working copy.
        let mut cols: Vec<Vec<Complex<T>>> =
            (0..n).map(|j| (0..m).map(|i| self[(i, j)]).collect()).collect();
        let mut v: Vec<Vec<Complex<T>>> = if want_vectors {
            (0..n)
                .map(|j| (0..n).map(|i| if i == j { Complex::one() } else { Complex::zero() }).collect())
                .collect()
        } else {
            Vec::new()
        };
        let eps = T::epsilon();
        let tiny = T::min_positive_value();
        for _sweep in 0..80 {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let alpha: T = cols[p].iter().map(|a| a.norm_sqr()).sum();
                    let beta: T = cols[q].iter().map(|a| a.norm_sqr()).sum();
                    let gamma: Complex<T> = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                    let g = gamma.norm();
                    if g <= eps * (alpha * beta).sqrt() || g <= tiny {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma / g;
                    let zeta = (beta - alpha) / (g + g);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = c * t;
                    let (lo, hi) = cols.split_at_mut(q);
                    let (cp, cq) = (&mut lo[p], &mut hi[0]);
                    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
                        let (x, y) = (*a, *b);
                        *a = x * c - y * phase.conj() * s;
                        *b = x * phase * s + y * c;
                    }
                    if want_vectors {
                        let (lo, hi) = v.split_at_mut(q);
                        let (vp, vq) = (&mut lo[p], &mut hi[0]);
                        for (a, b) in vp.iter_mut().zip(vq.iter_mut()) {
                            let (x, y) = (*a, *b);
                            *a = x * c - y * phase.conj() * s;
                            *b = x * phase * s + y * c;
                        }
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let norms: Vec<T> = cols
            .iter()
            .map(|c| c.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt())
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap_or(std::cmp::Ordering::Equal));
        let k = m.min(n);
        let values: Vec<T> = order.iter().take(k).map(|&j| norms[j]).collect();
        let vectors = want_vectors.then(|| order.iter().take(k).map(|&j| v[j].clone()).collect());
        (values, vectors)
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}
