//! Checkers for the Marcinkiewicz, Hörmander-Mihlin and weak Marcinkiewicz
//! conditions on a symbol.

use std::sync::Arc;

use crate::difference::{dual_sobolev_norm, generator_count, multi_indices, DifferenceEngine};
use crate::dual::{enumerate_dual, IrrepLabel};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spaces::LpPartition;
use crate::symbol::{dyadic_block, Symbol};

/// Constants measured by one checker.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport<T> {
    pub condition: String,
    /// Named constants, e.g. one per multi-index or per window.
    pub constants: Vec<(String, T)>,
    /// Maximum of the reported constants.
    pub headline: T,
    /// Irrep at which the headline is attained, when it is attained at one irrep.
    pub worst: Option<IrrepLabel>,
    /// Headline restricted to windows that fit below the cutoff.
    pub trusted_headline: Option<T>,
    pub cutoff: T,
    /// Difference order the check needs beyond each reported irrep.
    pub margin: u32,
    pub threshold: Option<T>,
    pub passed: Option<bool>,
}

impl<T: Real> CheckReport<T> {
    fn new(condition: &str, cutoff: T, margin: u32) -> Self {
        Self {
            condition: condition.to_owned(),
            constants: Vec::new(),
            headline: T::zero(),
            worst: None,
            trusted_headline: None,
            cutoff,
            margin,
            threshold: None,
            passed: None,
        }
    }

    /// Marks the report as passing when the headline is at most `threshold`.
    pub fn with_threshold(mut self, threshold: T) -> Self {
        self.threshold = Some(threshold);
        self.passed = Some(self.headline <= threshold);
        self
    }

    pub fn constant(&self, name: &str) -> Option<T> {
        self.constants.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

/// Report name of a multi-index, e.g. `alpha=(1,0)`.
pub fn alpha_name(alpha: &[u32]) -> String {
    let parts: Vec<String> = alpha.iter().map(|a| a.to_string()).collect();
    format!("alpha=({})", parts.join(","))
}

/// `C_α = sup_ξ ‖𝔻^α σ(ξ)‖_op ⟨ξ⟩^{|α|}` for every `|α| ≤ order`, the supremum
/// taken over trusted irreps.
pub fn check_marcinkiewicz<T: Real>(symbol: &Symbol<T>, order: u32) -> Result<CheckReport<T>> {
    let dual = symbol.dual();
    let group = dual.group();
    let engine = DifferenceEngine::new(symbol, order)?;
    let mut report = CheckReport::new("marcinkiewicz", dual.cutoff(), order);
    let mut best = (T::zero(), None);
    for k in 0..=order {
        for alpha in multi_indices(generator_count(&group), k) {
            let d = engine.apply(&alpha)?;
            let mut c = T::zero();
            let mut at = None;
            for (x, b) in d.valid_entries() {
                let v = b.op_norm() * x.bracket.powi(k as i32);
                if at.is_none() || v > c {
                    c = v;
                    at = Some(x.label);
                }
            }
            if best.1.is_none() || c > best.0 {
                best = (c, at);
            }
            report.constants.push((alpha_name(&alpha), c));
        }
    }
    report.headline = best.0;
    report.worst = best.1;
    Ok(report)
}

/// `‖σ‖_{L∞} + sup_r r^{s−n/2} ‖σ·η(⟨ξ⟩/r)‖_{L̇²_s}` over `r = 2^{j/2}`,
/// `0 ≤ j ≤ 2 log₂ Λ`. Windows reaching past the cutoff are truncated; the
/// trusted headline leaves them out.
pub fn check_hormander_mihlin<T: Real>(symbol: &Symbol<T>, s: T, partition: &LpPartition) -> Result<CheckReport<T>> {
    let dual = symbol.dual();
    let group = dual.group();
    let half_n = T::from_count(group.dim()) * T::lit(0.5);
    if !(s > half_n) {
        return Err(Error::Precondition(format!("Sobolev order {s} must exceed n/2 = {half_n}")));
    }
    let cutoff = dual.cutoff();
    let linf = symbol.linf_norm();
    let mut report = CheckReport::new("hormander_mihlin", cutoff, s.ceil().to_u32().unwrap_or(0));
    report.constants.push(("linf".into(), linf));
    let jmax = (T::lit(2.0) * cutoff.log2()).floor().to_u32().unwrap_or(0);
    let (mut sup, mut trusted) = (T::zero(), T::zero());
    for j in 0..=jmax {
        let r = (T::from_count(j as usize) * T::lit(0.5)).exp2();
        let reach = r + r;
        let sub = Arc::new(enumerate_dual(&group, reach.min(cutoff))?);
        let windowed = Symbol::from_fn(&sub, |i| {
            let x = &sub.irreps()[i];
            let src = symbol.block(&x.label).expect("sub-slice lies inside the slice");
            src.scale_real(partition.eta(x.bracket / r))
        })?;
        let v = r.powf(s - half_n) * dual_sobolev_norm(&windowed, s)?;
        report.constants.push((format!("r=2^({j}/2)"), v));
        sup = sup.max(v);
        if reach <= cutoff {
            trusted = trusted.max(v);
        }
    }
    report.headline = linf + sup;
    report.trusted_headline = Some(linf + trusted);
    Ok(report)
}

/// Per dyadic block `2^{j−1} ≤ ⟨ξ⟩ < 2^j`:
/// `2^{−j(n−s₀)} Σ_{|α|=s₀} Σ_{ξ in block} d_ξ ‖Δ^α σ(ξ)‖_{S¹}`, with `S¹` the
/// nuclear norm. Only blocks that lie below the cutoff and are fully trusted
/// are reported.
pub fn check_weak_marcinkiewicz<T: Real>(symbol: &Symbol<T>, s0: u32) -> Result<CheckReport<T>> {
    let dual = symbol.dual();
    let group = dual.group();
    let n = group.dim() as u32;
    if s0 > n {
        return Err(Error::Precondition(format!("order s0 = {s0} must not exceed n = {n}")));
    }
    let engine = DifferenceEngine::new(symbol, s0)?;
    let diffs: Vec<Symbol<T>> = multi_indices(generator_count(&group), s0)
        .iter()
        .map(|a| engine.apply(a))
        .collect::<Result<_>>()?;
    let cutoff = dual.cutoff();
    let blocks = dyadic_block(cutoff);
    let mut report = CheckReport::new("weak_marcinkiewicz", cutoff, s0);
    let mut best: Option<T> = None;
    for j in 1..=blocks {
        let upper = T::lit(2.0).powi(j as i32);
        if upper > cutoff {
            break;
        }
        let members: Vec<usize> = (0..dual.len()).filter(|&p| dyadic_block(dual.irreps()[p].bracket) == j).collect();
        if members.is_empty() || !members.iter().all(|&p| diffs.iter().all(|d| d.is_valid(p))) {
            continue;
        }
        let lhs: T = diffs
            .iter()
            .map(|d| {
                members
                    .iter()
                    .map(|&p| T::from_count(dual.irreps()[p].dim) * d.blocks()[p].nuclear_norm())
                    .sum::<T>()
            })
            .sum();
        let c = lhs * T::lit(2.0).powi(-((j * (n - s0)) as i32));
        report.constants.push((format!("j={j}"), c));
        best = Some(best.map_or(c, |b| b.max(c)));
    }
    report.headline = best.ok_or_else(|| Error::InsufficientMargin {
        required: crate::difference::required_cutoff(&group, s0, T::lit(2.0)).as_f64(),
        available: cutoff.as_f64(),
    })?;
    Ok(report)
}

/// Operator norms `‖σ(ξ)‖_op` per trusted irrep, for reports.
pub fn pointwise_op_norms<T: Real>(symbol: &Symbol<T>) -> Vec<(IrrepLabel, T)> {
    symbol.valid_entries().map(|(x, b)| (x.label, b.op_norm())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{spin_cutoff, DualSlice};
    use crate::group::GroupDescriptor;
    use crate::symbol::SymbolSpec;

    fn circle(cutoff: f64) -> Arc<DualSlice<f64>> {
        Arc::new(enumerate_dual(&GroupDescriptor::torus(1).unwrap(), cutoff).unwrap())
    }

    #[test]
    fn identity_symbol_marcinkiewicz() {
        for dual in [circle(30.0), Arc::new(enumerate_dual(&GroupDescriptor::su2(), spin_cutoff(8)).unwrap())] {
            let order = dual.group().marcinkiewicz_order() as u32;
            let r = check_marcinkiewicz(&Symbol::identity(&dual), order).unwrap();
            assert_eq!(r.headline, 1.0);
            let zero = vec![0; generator_count(&dual.group())];
            assert_eq!(r.constant(&alpha_name(&zero)), Some(1.0));
            for (name, v) in &r.constants {
                if name != &alpha_name(&zero) {
                    assert!(*v < 1e-10, "{name}: {v}");
                }
            }
        }
    }

    #[test]
    fn wave_symbol_constant_tracks_cutoff() {
        let small = check_marcinkiewicz(&SymbolSpec::Wave.build(&circle(32.0)).unwrap(), 1).unwrap();
        let large = check_marcinkiewicz(&SymbolSpec::Wave.build(&circle(128.0)).unwrap(), 1).unwrap();
        let c1 = |r: &CheckReport<f64>| r.constant("alpha=(1)").unwrap();
        assert!(c1(&large) > 3.0 * c1(&small));
    }

    #[test]
    fn hormander_mihlin_rejects_low_order() {
        let s = Symbol::identity(&circle(8.0));
        assert!(matches!(check_hormander_mihlin(&s, 0.5, &LpPartition), Err(Error::Precondition(_))));
    }

    #[test]
    fn hormander_mihlin_of_zero_symbol() {
        let dual = circle(16.0);
        let s = Symbol::identity(&dual).scale_by_profile(|_| 0.0);
        let r = check_hormander_mihlin(&s, 1.0, &LpPartition).unwrap();
        assert_eq!(r.headline, 0.0);
    }

    #[test]
    fn window_symbol_hm_is_cutoff_independent() {
        let value = |cutoff: f64| {
            let s = SymbolSpec::Window { l: 3 }.build(&circle(cutoff)).unwrap();
            check_hormander_mihlin(&s, 1.0, &LpPartition).unwrap().headline
        };
        let (a, b) = (value(32.0), value(64.0));
        assert!((a - b).abs() <= 0.01 * a, "{a} vs {b}");
    }

    #[test]
    fn weak_marcinkiewicz_of_sign() {
        let s = SymbolSpec::Sign.build(&circle(64.0)).unwrap();
        let r = check_weak_marcinkiewicz(&s, 1).unwrap();
        assert!((r.constant("j=1").unwrap() - 2.0).abs() < 1e-12);
        for (name, v) in &r.constants[1..] {
            assert!(v.abs() < 1e-12, "{name}: {v}");
        }
        assert!((r.headline - 2.0).abs() < 1e-12);
        let id = check_weak_marcinkiewicz(&Symbol::identity(&circle(64.0)), 1).unwrap();
        assert!(id.headline < 1e-12);
    }

    #[test]
    fn threshold_sets_pass_flag() {
        let r = check_marcinkiewicz(&Symbol::identity(&circle(8.0)), 1).unwrap();
        assert_eq!(r.clone().with_threshold(2.0).passed, Some(true));
        assert_eq!(r.with_threshold(0.5).passed, Some(false));
    }
}
