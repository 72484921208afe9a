//! The concrete compact groups: tori `𝕋ⁿ` (n ≤ 3) and `SU(2)`.
//!
//! Torus points are stored as coordinates in `[0, 1)`. SU(2) points are stored
//! as Euler angles `(α, β, γ)` of `U = e^{-iασ₃/2} e^{-iβσ₂/2} e^{-iγσ₃/2}` with
//! `α ∈ [0, 2π)`, `β ∈ [0, π]`, `γ ∈ [0, 4π)`, which covers SU(2) exactly once.
//! At the gimbal angles `β ∈ {0, π}` only one combination of `α` and `γ` is
//! determined; the canonical form puts it in `α` and sets `γ = 0`, except that
//! `γ = 2π` is used when the combination lies in `[2π, 4π)` and cannot be
//! carried by `α` alone.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// Largest torus dimension the library supports.
pub const MAX_TORUS_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupFamily {
    Torus,
    Su2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Torus(usize),
    Su2,
}

/// Which group, its dimension, and the Haar normalisation (always total mass 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    kind: GroupKind,
}

impl GroupDescriptor {
    pub fn torus(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_TORUS_DIM {
            return Err(Error::Configuration(format!(
                "torus dimension {n} unsupported (1..={MAX_TORUS_DIM})"
            )));
        }
        Ok(Self { kind: GroupKind::Torus(n) })
    }

    pub fn su2() -> Self {
        Self { kind: GroupKind::Su2 }
    }

    #[inline]
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    /// Manifold dimension `n`.
    #[inline]
    pub fn dim(&self) -> usize {
        match self.kind {
            GroupKind::Torus(n) => n,
            GroupKind::Su2 => 3,
        }
    }

    #[inline]
    pub fn is_su2(&self) -> bool {
        matches!(self.kind, GroupKind::Su2)
    }

    /// Total Haar mass.
    pub fn haar_mass(&self) -> f64 {
        1.0
    }

    /// Largest value of the geodesic distance `|x|` to the identity.
    pub fn diameter<T: Real>(&self) -> T {
        match self.kind {
            GroupKind::Torus(n) => T::PI() * T::from_count(n).sqrt(),
            GroupKind::Su2 => T::PI(),
        }
    }

    /// `⌊n/2⌋ + 1`, the difference order in the Marcinkiewicz condition.
    pub fn marcinkiewicz_order(&self) -> usize {
        self.dim() / 2 + 1
    }

    pub fn identity<T: Real>(&self) -> GroupPoint<T> {
        match self.kind {
            GroupKind::Torus(n) => GroupPoint::Torus(TorusPoint { n, x: [T::zero(); 3] }),
            GroupKind::Su2 => GroupPoint::Su2(EulerAngles {
                alpha: T::zero(),
                beta: T::zero(),
                gamma: T::zero(),
            }),
        }
    }

    /// Short stable name used in reports and files: `torus1`, `torus2`, `torus3`, `su2`.
    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "su2" => Ok(Self::su2()),
            other => match other.strip_prefix("torus").and_then(|n| n.parse::<usize>().ok()) {
                Some(n) => Self::torus(n),
                None => Err(Error::Configuration(format!("unknown group name `{name}`"))),
            },
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Torus(n) => write!(f, "torus{n}"),
            GroupKind::Su2 => write!(f, "su2"),
        }
    }
}

/// Builds a descriptor; `n` is ignored for SU(2).
pub fn make_group(family: GroupFamily, n: usize) -> Result<GroupDescriptor> {
    match family {
        GroupFamily::Torus => GroupDescriptor::torus(n),
        GroupFamily::Su2 => Ok(GroupDescriptor::su2()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint<T> {
    n: usize,
    x: [T; 3],
}

impl<T: Real> TorusPoint<T> {
    pub fn coords(&self) -> &[T] {
        &self.x[..self.n]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

/// A group element in canonical coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroupPoint<T> {
    Torus(TorusPoint<T>),
    Su2(EulerAngles<T>),
}

/// Reduces `x` into `[0, period)`.
fn reduce<T: Real>(x: T, period: T) -> T {
    let mut r = x - period * (x / period).floor();
    if r >= period {
        r = r - period;
    }
    if r < T::zero() {
        r = T::zero();
    }
    r
}

impl<T: Real> GroupPoint<T> {
    /// Torus point from arbitrary real coordinates (reduced mod 1).
    pub fn torus(coords: &[T]) -> Result<Self> {
        let n = coords.len();
        if n == 0 || n > MAX_TORUS_DIM {
            return Err(Error::Configuration(format!("torus dimension {n} unsupported")));
        }
        let mut x = [T::zero(); 3];
        for (dst, &c) in x.iter_mut().zip(coords) {
            *dst = reduce(c, T::one());
        }
        Ok(Self::Torus(TorusPoint { n, x }))
    }

    /// SU(2) point from arbitrary Euler angles, brought to canonical form.
    pub fn su2(alpha: T, beta: T, gamma: T) -> Self {
        Self::from_su2_element(Su2Element::from_euler(alpha, beta, gamma))
    }

    pub fn from_su2_element(u: Su2Element<T>) -> Self {
        Self::Su2(u.to_euler())
    }

    pub fn group(&self) -> GroupDescriptor {
        match self {
            Self::Torus(p) => GroupDescriptor { kind: GroupKind::Torus(p.n) },
            Self::Su2(_) => GroupDescriptor::su2(),
        }
    }

    pub fn as_torus(&self) -> Option<&TorusPoint<T>> {
        match self {
            Self::Torus(p) => Some(p),
            Self::Su2(_) => None,
        }
    }

    pub fn as_euler(&self) -> Option<&EulerAngles<T>> {
        match self {
            Self::Su2(e) => Some(e),
            Self::Torus(_) => None,
        }
    }

    /// Fundamental-representation element of an SU(2) point.
    pub fn su2_element(&self) -> Option<Su2Element<T>> {
        self.as_euler().map(|e| Su2Element::from_euler(e.alpha, e.beta, e.gamma))
    }

    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        match (self, rhs) {
            (Self::Torus(a), Self::Torus(b)) if a.n == b.n => {
                let mut x = [T::zero(); 3];
                for i in 0..a.n {
                    x[i] = reduce(a.x[i] + b.x[i], T::one());
                }
                Ok(Self::Torus(TorusPoint { n: a.n, x }))
            }
            (Self::Su2(_), Self::Su2(_)) => {
                let u = self.su2_element().unwrap().mul(&rhs.su2_element().unwrap());
                Ok(Self::from_su2_element(u))
            }
            _ => Err(Error::Precondition("points belong to different groups".into())),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::Torus(a) => {
                let mut x = [T::zero(); 3];
                for i in 0..a.n {
                    x[i] = reduce(-a.x[i], T::one());
                }
                Self::Torus(TorusPoint { n: a.n, x })
            }
            Self::Su2(_) => Self::from_su2_element(self.su2_element().unwrap().inverse()),
        }
    }

    /// Geodesic distance to the identity: `2π·dist(x, ℤⁿ)` on tori, the rotation
    /// half-angle `θ = arccos(Tr₂(x)/2)` on SU(2).
    pub fn distance_to_identity(&self) -> T {
        match self {
            Self::Torus(p) => {
                let s: T = p
                    .coords()
                    .iter()
                    .map(|&c| {
                        let d = c.min(T::one() - c);
                        d * d
                    })
                    .sum();
                T::TAU() * s.sqrt()
            }
            Self::Su2(_) => self.su2_element().unwrap().half_angle(),
        }
    }

    /// `(|x|, ρ²(x), q₁(x))`.
    pub fn geometric_weights(&self) -> (T, T, T) {
        match self {
            Self::Torus(p) => {
                let q2: T = p
                    .coords()
                    .iter()
                    .map(|&c| {
                        let s = (T::PI() * c).sin();
                        T::lit(4.0) * s * s
                    })
                    .sum();
                // Ad is trivial on an abelian group, so ρ² = n − n = 0.
                (self.distance_to_identity(), T::zero(), q2.sqrt())
            }
            Self::Su2(_) => {
                let u = self.su2_element().unwrap();
                let sin_sq = u.a.im * u.a.im + u.b.norm_sqr();
                let rho_sq = T::lit(4.0) * sin_sq;
                (u.half_angle(), rho_sq, u.q1())
            }
        }
    }

    /// `q₁(x)`, the first-order weight vanishing only at the identity.
    pub fn q1(&self) -> T {
        self.geometric_weights().2
    }
}

/// `[[a, -b̄], [b, ā]]` with `|a|² + |b|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Element<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
}

impl<T: Real> Su2Element<T> {
    pub fn identity() -> Self {
        Self {
            a: Complex::new(T::one(), T::zero()),
            b: Complex::new(T::zero(), T::zero()),
        }
    }

    pub fn from_euler(alpha: T, beta: T, gamma: T) -> Self {
        let half = T::lit(0.5);
        let (s, c) = (beta * half).sin_cos();
        let a = Complex::from_polar(c, -(alpha + gamma) * half);
        let b = Complex::from_polar(s, (alpha - gamma) * half);
        Self { a, b }
    }

    /// Row-major 2×2 matrix.
    pub fn matrix(&self) -> [[Complex<T>; 2]; 2] {
        [[self.a, -self.b.conj()], [self.b, self.a.conj()]]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            a: self.a * rhs.a - self.b.conj() * rhs.b,
            b: self.b * rhs.a + self.a.conj() * rhs.b,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.a.conj(), b: -self.b }
    }

    /// Fundamental-representation trace `Tr₂ = 2 Re a`.
    pub fn trace(&self) -> T {
        self.a.re + self.a.re
    }

    /// `θ ∈ [0, π]` with `Tr₂ = 2 cos θ`.
    pub fn half_angle(&self) -> T {
        let sin = (self.a.im * self.a.im + self.b.norm_sqr()).sqrt();
        sin.atan2(self.a.re)
    }

    /// `√(2 − Tr₂) = 2 sin(θ/2)`, evaluated without cancellation near the identity.
    pub fn q1(&self) -> T {
        let d = T::one() - self.a.re;
        (d * d + self.a.im * self.a.im + self.b.norm_sqr()).sqrt()
    }

    /// Canonical Euler angles.
    pub fn to_euler(&self) -> EulerAngles<T> {
        let two_pi = T::TAU();
        let four_pi = two_pi + two_pi;
        let norm = (self.a.norm_sqr() + self.b.norm_sqr()).sqrt();
        let (a, b) = (self.a / norm, self.b / norm);
        let (ra, rb) = (a.norm(), b.norm());
        let beta = T::lit(2.0) * rb.atan2(ra);
        let eps = T::epsilon();
        if rb <= eps {
            // β = 0: only α + γ = −2 arg a (mod 4π) is determined.
            let total = reduce(T::lit(-2.0) * a.arg(), four_pi);
            return split_gimbal(T::zero(), total, two_pi);
        }
        if ra <= eps {
            // β = π: only α − γ = 2 arg b (mod 4π) is determined.
            let diff = reduce(T::lit(2.0) * b.arg(), four_pi);
            return split_gimbal(T::PI(), diff, two_pi);
        }
        let (pa, pb) = (a.arg(), b.arg());
        let mut alpha = pb - pa;
        let mut gamma = -pa - pb;
        // (α − 2πk, γ + 2πk) names the same element, so move α into [0, 2π).
        let k = (alpha / two_pi).floor();
        alpha = alpha - k * two_pi;
        gamma = gamma + k * two_pi;
        if alpha >= two_pi {
            alpha = alpha - two_pi;
            gamma = gamma + two_pi;
        }
        if alpha < T::zero() {
            alpha = alpha + two_pi;
            gamma = gamma - two_pi;
        }
        EulerAngles {
            alpha,
            beta: beta.min(T::PI()),
            gamma: reduce(gamma, four_pi),
        }
    }
}

/// `combo ∈ [0, 4π)` is `α + γ` (β = 0) or `α − γ` (β = π); since `2π ≡ −2π`
/// modulo 4π the same split works for both.
fn split_gimbal<T: Real>(beta: T, combo: T, two_pi: T) -> EulerAngles<T> {
    if combo < two_pi {
        EulerAngles { alpha: combo, beta, gamma: T::zero() }
    } else {
        let alpha = (combo - two_pi).max(T::zero());
        EulerAngles { alpha, beta, gamma: two_pi }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_group_examples() {
        assert_eq!(make_group(GroupFamily::Torus, 1).unwrap().dim(), 1);
        assert_eq!(make_group(GroupFamily::Su2, 7).unwrap().dim(), 3);
        assert!(matches!(make_group(GroupFamily::Torus, 5), Err(Error::Configuration(_))));
        assert!(make_group(GroupFamily::Torus, 0).is_err());
    }

    #[test]
    fn names_round_trip() {
        for g in [GroupDescriptor::torus(1).unwrap(), GroupDescriptor::torus(3).unwrap(), GroupDescriptor::su2()] {
            assert_eq!(GroupDescriptor::from_name(&g.name()).unwrap(), g);
        }
        assert!(GroupDescriptor::from_name("so3").is_err());
    }

    #[test]
    fn torus_addition_mod_one() {
        let x = GroupPoint::torus(&[0.3f64]).unwrap();
        let y = GroupPoint::torus(&[0.9f64]).unwrap();
        let z = x.multiply(&y).unwrap();
        assert!((z.as_torus().unwrap().coords()[0] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn identity_weights_vanish() {
        for g in [GroupDescriptor::torus(2).unwrap(), GroupDescriptor::su2()] {
            let e = g.identity::<f64>();
            assert_eq!(e.geometric_weights(), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn su2_quarter_turn_weights() {
        // θ = π/2 ⇔ Re a = 0; take α = π, β = γ = 0 so a = e^{-iπ/2}.
        let x = GroupPoint::su2(std::f64::consts::PI, 0.0, 0.0);
        let (dist, rho_sq, q1) = x.geometric_weights();
        assert!((dist - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((rho_sq - 4.0).abs() < 1e-14);
        assert!((q1 - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn torus_half_point_weights() {
        let x = GroupPoint::torus(&[0.5f64]).unwrap();
        let (dist, rho_sq, q1) = x.geometric_weights();
        assert!((dist - std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(rho_sq, 0.0);
        assert!((q1 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gimbal_points_are_canonical() {
        // β = 0 with total rotation 3π needs γ = 2π.
        let u = Su2Element::from_euler(3.0 * std::f64::consts::PI, 0.0, 0.0);
        let e = u.to_euler();
        assert_eq!(e.beta, 0.0);
        assert!((e.alpha - std::f64::consts::PI).abs() < 1e-14);
        assert!((e.gamma - 2.0 * std::f64::consts::PI).abs() < 1e-14);
        let back = Su2Element::from_euler(e.alpha, e.beta, e.gamma);
        assert!((back.a - u.a).norm() < 1e-14 && (back.b - u.b).norm() < 1e-14);

        let v = Su2Element::from_euler(0.7, std::f64::consts::PI, 0.2);
        let e = v.to_euler();
        assert_eq!(e.gamma, 0.0);
        let back = Su2Element::from_euler(e.alpha, e.beta, e.gamma);
        assert!((back.a - v.a).norm() < 1e-14 && (back.b - v.b).norm() < 1e-14);
    }

    #[test]
    fn minus_identity_is_representable() {
        let m = Su2Element { a: Complex::new(-1.0f64, 0.0), b: Complex::new(0.0, 0.0) };
        let p = GroupPoint::from_su2_element(m);
        let back = p.su2_element().unwrap();
        assert!((back.a - m.a).norm() < 1e-15);
        assert!((p.distance_to_identity() - std::f64::consts::PI).abs() < 1e-15);
    }
}
