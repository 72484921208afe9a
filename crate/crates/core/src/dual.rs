//! Truncations of the unitary dual and evaluation of the representations.
//!
//! Laplacian normalisation: `λ_ξ = |ξ|²` on `𝕋ⁿ` and `λ_ℓ = ℓ(ℓ+1)` on SU(2);
//! the Bessel-potential eigenvalue is `⟨ξ⟩ = √(1 + λ_ξ)`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::grid::Bandlimit;
use crate::group::{GroupDescriptor, GroupKind, GroupPoint};
use crate::linalg::CMatrix;
use crate::scalar::{cis, Real};
use crate::wigner::{self, MAX_TWICE_SPIN};

/// Integer frequency vector of a torus character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusFreq {
    dim: u8,
    k: [i32; 3],
}

impl TorusFreq {
    pub fn new(k: &[i32]) -> Result<Self> {
        if k.is_empty() || k.len() > 3 {
            return Err(Error::Configuration(format!("torus frequency of length {}", k.len())));
        }
        let mut arr = [0; 3];
        arr[..k.len()].copy_from_slice(k);
        Ok(Self { dim: k.len() as u8, k: arr })
    }

    pub fn components(&self) -> &[i32] {
        &self.k[..self.dim as usize]
    }

    pub fn norm_sqr(&self) -> i64 {
        self.components().iter().map(|&c| i64::from(c) * i64::from(c)).sum()
    }

    pub fn shifted(&self, delta: &[i32]) -> Self {
        let mut out = *self;
        for (dst, d) in out.k.iter_mut().zip(delta) {
            *dst += d;
        }
        out
    }

    pub fn negated(&self) -> Self {
        let mut out = *self;
        for c in out.k.iter_mut() {
            *c = -*c;
        }
        out
    }
}

/// Label of an equivalence class of irreps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrrepLabel {
    Torus(TorusFreq),
    /// Spin `ℓ = twice/2`.
    Spin(u32),
}

impl IrrepLabel {
    pub fn spin(twice: u32) -> Self {
        Self::Spin(twice)
    }

    pub fn torus(k: &[i32]) -> Result<Self> {
        TorusFreq::new(k).map(Self::Torus)
    }

    pub fn as_torus(&self) -> Option<&TorusFreq> {
        match self {
            Self::Torus(t) => Some(t),
            Self::Spin(_) => None,
        }
    }

    pub fn twice_spin(&self) -> Option<u32> {
        match self {
            Self::Spin(k) => Some(*k),
            Self::Torus(_) => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Torus(_) => 1,
            Self::Spin(k) => *k as usize + 1,
        }
    }

    /// Laplacian eigenvalue `λ_ξ`.
    pub fn laplacian<T: Real>(&self) -> T {
        match self {
            Self::Torus(t) => T::from_i64(t.norm_sqr()).expect("frequency fits"),
            Self::Spin(k) => {
                let l = T::from_count(*k as usize) * T::lit(0.5);
                l * (l + T::one())
            }
        }
    }

    /// Bessel-potential eigenvalue `⟨ξ⟩`.
    pub fn bracket<T: Real>(&self) -> T {
        (T::one() + self.laplacian::<T>()).sqrt()
    }

    /// The label magnitude a grid must resolve for this irrep.
    pub fn extent(&self) -> Bandlimit {
        match self {
            Self::Torus(t) => {
                Bandlimit::integer(t.components().iter().map(|c| c.unsigned_abs()).max().unwrap_or(0))
            }
            Self::Spin(k) => Bandlimit::from_twice(*k),
        }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Torus(t) => {
                let parts: Vec<String> = t.components().iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            Self::Spin(k) if k % 2 == 0 => write!(f, "spin {}", k / 2),
            Self::Spin(k) => write!(f, "spin {k}/2"),
        }
    }
}

/// One irrep class with its dimension and eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IrrepIndex<T> {
    pub label: IrrepLabel,
    pub dim: usize,
    /// `⟨ξ⟩ ≥ 1`.
    pub bracket: T,
    /// `λ_ξ ≥ 0`.
    pub laplacian: T,
}

impl<T: Real> IrrepIndex<T> {
    pub fn new(label: IrrepLabel) -> Self {
        Self {
            label,
            dim: label.dim(),
            bracket: label.bracket(),
            laplacian: label.laplacian(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self.label {
            IrrepLabel::Torus(t) => t.norm_sqr() == 0,
            IrrepLabel::Spin(k) => k == 0,
        }
    }
}

/// All irreps with `⟨ξ⟩ ≤ Λ`, sorted by `⟨ξ⟩` and then by label.
#[derive(Clone, Debug)]
pub struct DualSlice<T> {
    group: GroupDescriptor,
    cutoff: T,
    irreps: Vec<IrrepIndex<T>>,
    lookup: HashMap<IrrepLabel, usize>,
}

impl<T: Real> DualSlice<T> {
    pub fn group(&self) -> GroupDescriptor {
        self.group
    }

    /// The cutoff `Λ`.
    pub fn cutoff(&self) -> T {
        self.cutoff
    }

    pub fn irreps(&self) -> &[IrrepIndex<T>] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn position(&self, label: &IrrepLabel) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    pub fn contains(&self, label: &IrrepLabel) -> bool {
        self.lookup.contains_key(label)
    }

    pub fn trivial_position(&self) -> usize {
        self.irreps.iter().position(|x| x.is_trivial()).expect("slice contains the trivial irrep")
    }

    /// Largest label magnitude in the slice.
    pub fn extent(&self) -> Bandlimit {
        self.irreps.iter().map(|x| x.label.extent()).max().unwrap_or_default()
    }

    /// Largest doubled spin present (SU(2) slices).
    pub fn max_twice_spin(&self) -> Option<u32> {
        self.irreps.iter().filter_map(|x| x.label.twice_spin()).max()
    }

    /// Largest Euclidean frequency radius present (torus slices).
    pub fn max_torus_radius(&self) -> Option<T> {
        self.irreps
            .iter()
            .filter_map(|x| x.label.as_torus())
            .map(|t| T::from_i64(t.norm_sqr()).unwrap().sqrt())
            .fold(None, |acc: Option<T>, r| Some(acc.map_or(r, |a| a.max(r))))
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.group == other.group && self.irreps.len() == other.irreps.len()
            && self.irreps.iter().zip(&other.irreps).all(|(a, b)| a.label == b.label)
    }
}

fn within_cutoff<T: Real>(laplacian: T, cutoff: T) -> bool {
    T::one() + laplacian <= cutoff * cutoff * (T::one() + T::lit(8.0) * T::epsilon())
}

/// Every irrep with `⟨ξ⟩ ≤ Λ`.
pub fn enumerate_dual<T: Real>(group: &GroupDescriptor, cutoff: T) -> Result<DualSlice<T>> {
    if !(cutoff >= T::one()) || !cutoff.is_finite() {
        return Err(Error::Configuration(format!("dual cutoff {cutoff} must be finite and >= 1")));
    }
    let mut irreps: Vec<IrrepIndex<T>> = Vec::new();
    match group.kind() {
        GroupKind::Torus(n) => {
            let radius = (cutoff * cutoff - T::one()).max(T::zero()).sqrt();
            let kmax = (radius + T::lit(1e-9)).floor().to_i64().unwrap_or(0) as i32;
            let span = (2 * kmax + 1) as usize;
            let total = span.pow(n as u32);
            for flat in 0..total {
                let mut rest = flat;
                let mut k = [0i32; 3];
                for c in k.iter_mut().take(n) {
                    *c = (rest % span) as i32 - kmax;
                    rest /= span;
                }
                let label = IrrepLabel::torus(&k[..n])?;
                if within_cutoff(label.laplacian::<T>(), cutoff) {
                    irreps.push(IrrepIndex::new(label));
                }
            }
        }
        GroupKind::Su2 => {
            let mut twice = 0u32;
            loop {
                let label = IrrepLabel::Spin(twice);
                if !within_cutoff(label.laplacian::<T>(), cutoff) {
                    break;
                }
                irreps.push(IrrepIndex::new(label));
                twice += 1;
            }
        }
    }
    irreps.sort_by(|a, b| {
        a.laplacian
            .partial_cmp(&b.laplacian)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.label.cmp(&b.label))
    });
    let lookup = irreps.iter().enumerate().map(|(i, x)| (x.label, i)).collect();
    Ok(DualSlice { group: *group, cutoff, irreps, lookup })
}

/// The cutoff `Λ = ⟨ℓ⟩` that keeps exactly the spins up to `twice/2`.
pub fn spin_cutoff<T: Real>(twice: u32) -> T {
    IrrepLabel::Spin(twice).bracket()
}

/// Representation matrix `ξ(x)`.
pub fn evaluate_irrep<T: Real>(group: &GroupDescriptor, label: &IrrepLabel, x: &GroupPoint<T>) -> Result<CMatrix<T>> {
    match (group.kind(), label, x) {
        (GroupKind::Torus(n), IrrepLabel::Torus(freq), GroupPoint::Torus(p)) if freq.dim as usize == n && p.coords().len() == n => {
            let phase: T = freq
                .components()
                .iter()
                .zip(p.coords())
                .map(|(&k, &c)| T::from_i32(k).unwrap() * c)
                .sum();
            Ok(CMatrix::scalar(1, cis(T::TAU() * phase)))
        }
        (GroupKind::Su2, IrrepLabel::Spin(twice), GroupPoint::Su2(e)) => {
            if *twice > MAX_TWICE_SPIN {
                return Err(Error::OutOfValidatedRange {
                    spin: f64::from(*twice) / 2.0,
                    max: f64::from(MAX_TWICE_SPIN) / 2.0,
                });
            }
            Ok(wigner::wigner_matrix(*twice, e.alpha, e.beta, e.gamma))
        }
        _ => Err(Error::Precondition(format!("irrep {label} and point do not belong to {group}"))),
    }
}
