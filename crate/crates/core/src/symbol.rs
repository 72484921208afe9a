//! Symbols `σ(ξ)` on a dual slice and the named scalar profiles.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dual::{DualSlice, IrrepIndex, IrrepLabel};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{cis, Complex, Real};
use crate::spaces::LpPartition;
use crate::transform::FourierCoefficients;

/// Per-irrep matrices `σ(ξ)` together with the irreps on which they are trusted.
///
/// Symbols built from a profile are valid everywhere; difference operators
/// clear the flag on irreps whose neighbours fall outside the slice.
#[derive(Clone, Debug)]
pub struct Symbol<T> {
    coeffs: FourierCoefficients<T>,
    valid: Vec<bool>,
}

impl<T: Real> Symbol<T> {
    pub fn new(coeffs: FourierCoefficients<T>) -> Self {
        let valid = vec![true; coeffs.blocks().len()];
        Self { coeffs, valid }
    }

    pub fn with_validity(coeffs: FourierCoefficients<T>, valid: Vec<bool>) -> Result<Self> {
        if valid.len() != coeffs.blocks().len() {
            return Err(Error::Precondition("validity mask does not match the slice".into()));
        }
        Ok(Self { coeffs, valid })
    }

    pub fn from_fn(dual: &Arc<DualSlice<T>>, g: impl FnMut(usize) -> CMatrix<T>) -> Result<Self> {
        FourierCoefficients::from_fn(dual, g).map(Self::new)
    }

    pub fn identity(dual: &Arc<DualSlice<T>>) -> Self {
        build_spectral_symbol(|_| Complex::new(T::one(), T::zero()), dual)
    }

    pub fn dual(&self) -> &Arc<DualSlice<T>> {
        self.coeffs.dual()
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        self.coeffs.blocks()
    }

    pub fn block(&self, label: &IrrepLabel) -> Option<&CMatrix<T>> {
        self.coeffs.block(label)
    }

    pub fn validity(&self) -> &[bool] {
        &self.valid
    }

    pub fn is_valid(&self, position: usize) -> bool {
        self.valid[position]
    }

    /// `(irrep, σ(ξ))` over the trusted irreps.
    pub fn valid_entries(&self) -> impl Iterator<Item = (&IrrepIndex<T>, &CMatrix<T>)> + '_ {
        self.dual()
            .irreps()
            .iter()
            .zip(self.blocks())
            .zip(&self.valid)
            .filter(|(_, &v)| v)
            .map(|(pair, _)| pair)
    }

    /// The symbol read as Fourier coefficients of its kernel.
    pub fn as_coefficients(&self) -> &FourierCoefficients<T> {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> FourierCoefficients<T> {
        self.coeffs
    }

    /// `sup_ξ ‖σ(ξ)‖_op` over trusted irreps.
    pub fn linf_norm(&self) -> T {
        self.valid_entries().map(|(_, b)| b.op_norm()).fold(T::zero(), T::max)
    }

    /// Pointwise product `σ(ξ) τ(ξ)`, trusted where both factors are.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !self.dual().same_as(other.dual()) {
            return Err(Error::Precondition("symbols live on different dual slices".into()));
        }
        let blocks = self.blocks().iter().zip(other.blocks()).map(|(a, b)| a.matmul(b)).collect();
        let valid = self.valid.iter().zip(&other.valid).map(|(a, b)| *a && *b).collect();
        Ok(Self { coeffs: FourierCoefficients::from_blocks(self.dual(), blocks)?, valid })
    }

    /// `σ(ξ) · g(⟨ξ⟩)`.
    pub fn scale_by_profile(&self, mut g: impl FnMut(T) -> T) -> Self {
        let mut coeffs = self.coeffs.clone();
        let dual = Arc::clone(self.dual());
        for (x, b) in dual.irreps().iter().zip(coeffs.blocks_mut()) {
            *b = b.scale_real(g(x.bracket));
        }
        Self { coeffs, valid: self.valid.clone() }
    }
}

/// `σ(ξ) = g(⟨ξ⟩) I_{d_ξ}`.
pub fn build_spectral_symbol<T: Real>(mut g: impl FnMut(T) -> Complex<T>, dual: &Arc<DualSlice<T>>) -> Symbol<T> {
    Symbol::from_fn(dual, |i| {
        let x = &dual.irreps()[i];
        CMatrix::scalar(x.dim, g(x.bracket))
    })
    .expect("spectral blocks match the slice")
}

/// Named symbol profiles accepted in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    /// `⟨ξ⟩^{it}`.
    PowerIt { t: f64 },
    /// `e^{i⟨ξ⟩}`.
    Wave,
    /// `sign(ξ₁)` on a torus.
    Sign,
    /// `ψ_ℓ(⟨ξ⟩)`.
    Window { l: u32 },
    /// A seeded random sign on each dyadic block `2^{j−1} ≤ ⟨ξ⟩ < 2^j`.
    DyadicRademacher { seed: u64 },
    Identity,
}

impl SymbolSpec {
    /// Short stable name for reports.
    pub fn name(&self) -> String {
        match self {
            Self::PowerIt { t } => format!("power_it(t={t})"),
            Self::Wave => "wave".into(),
            Self::Sign => "sign".into(),
            Self::Window { l } => format!("window(l={l})"),
            Self::DyadicRademacher { seed } => format!("dyadic_rademacher(seed={seed})"),
            Self::Identity => "identity".into(),
        }
    }

    pub fn build<T: Real>(&self, dual: &Arc<DualSlice<T>>) -> Result<Symbol<T>> {
        let one = Complex::new(T::one(), T::zero());
        Ok(match *self {
            Self::PowerIt { t } => {
                let t = T::lit(t);
                build_spectral_symbol(|b: T| cis(t * b.ln()), dual)
            }
            Self::Wave => build_spectral_symbol(cis, dual),
            Self::Identity => build_spectral_symbol(|_| one, dual),
            Self::Window { l } => build_spectral_symbol(|b| one * LpPartition.psi(l, b), dual),
            Self::Sign => {
                if dual.group().is_su2() {
                    return Err(Error::Configuration("the sign symbol is defined on tori only".into()));
                }
                Symbol::from_fn(dual, |i| {
                    let k = dual.irreps()[i].label.as_torus().expect("torus label").components()[0];
                    CMatrix::scalar(1, one * T::lit(f64::from(k.signum())))
                })?
            }
            Self::DyadicRademacher { seed } => {
                let blocks = dyadic_block(dual.cutoff()) as usize + 1;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let signs: Vec<T> = (0..=blocks).map(|_| if rng.random::<bool>() { T::one() } else { -T::one() }).collect();
                build_spectral_symbol(|b| one * signs[dyadic_block(b) as usize], dual)
            }
        })
    }
}

/// The `j ≥ 1` with `2^{j−1} ≤ λ < 2^j`.
pub fn dyadic_block<T: Real>(lambda: T) -> u32 {
    let mut j = lambda.log2().floor().to_u32().unwrap_or(0) + 1;
    // Guard against log2 rounding at exact powers of two.
    let pow = |j: u32| T::lit(2.0).powi(j as i32);
    while j > 1 && lambda < pow(j - 1) {
        j -= 1;
    }
    while lambda >= pow(j) {
        j += 1;
    }
    j
}
