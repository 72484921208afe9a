//! JSON files for coefficients and symbols.
//!
//! ```json
//! { "group": "su2", "lambda": 2.0, "role": "symbol",
//!   "entries": [ { "label": 0.5, "matrix": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]] } ] }
//! ```
//!
//! Torus labels are integer arrays, SU(2) labels are spins. Matrices are
//! row-major lists of `[re, im]` pairs. Floats are written with shortest
//! round-trip formatting, so reading a written file reproduces every bit.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dual::{enumerate_dual, DualSlice, IrrepLabel};
use crate::error::{Error, Result};
use crate::group::GroupDescriptor;
use crate::linalg::CMatrix;
use crate::scalar::{Complex, Real};
use crate::transform::FourierCoefficients;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRepr {
    group: String,
    lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    role: Option<String>,
    entries: Vec<EntryRepr>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRepr {
    label: LabelRepr,
    matrix: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum LabelRepr {
    Torus(Vec<i32>),
    Spin(f64),
}

/// Serialises coefficients; `role` is `Some("symbol")` for symbol files.
pub fn coefficients_to_json<T: Real>(coeffs: &FourierCoefficients<T>, role: Option<&str>) -> String {
    let dual = coeffs.dual();
    let entries = dual
        .irreps()
        .iter()
        .zip(coeffs.blocks())
        .map(|(x, b)| EntryRepr {
            label: match x.label {
                IrrepLabel::Torus(t) => LabelRepr::Torus(t.components().to_vec()),
                IrrepLabel::Spin(k) => LabelRepr::Spin(f64::from(k) / 2.0),
            },
            matrix: b.as_slice().iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect(),
        })
        .collect();
    let repr = FileRepr {
        group: dual.group().name(),
        lambda: dual.cutoff().as_f64(),
        role: role.map(str::to_owned),
        entries,
    };
    serde_json::to_string(&repr).expect("coefficient data serialises")
}

/// Parses a coefficient file. Irreps of the slice without an entry are zero.
pub fn coefficients_from_json<T: Real>(text: &str) -> Result<(FourierCoefficients<T>, Option<String>)> {
    let repr: FileRepr = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let group = GroupDescriptor::from_name(&repr.group).map_err(|e| Error::Format(e.to_string()))?;
    let dual: Arc<DualSlice<T>> = Arc::new(enumerate_dual(&group, T::lit(repr.lambda))?);
    let mut coeffs = FourierCoefficients::zeros(&dual);
    for entry in repr.entries {
        let label = match entry.label {
            LabelRepr::Torus(k) => IrrepLabel::torus(&k).map_err(|e| Error::Format(e.to_string()))?,
            LabelRepr::Spin(l) => {
                let twice = 2.0 * l;
                if !(twice >= 0.0) || twice.fract() != 0.0 || twice > f64::from(u32::MAX) {
                    return Err(Error::Format(format!("spin {l} is not a nonnegative half-integer")));
                }
                IrrepLabel::Spin(twice as u32)
            }
        };
        let dim = label.dim();
        let block = coeffs
            .block_mut(&label)
            .ok_or_else(|| Error::Format(format!("label {label} is outside the slice")))?;
        let data: Vec<Complex<T>> = entry.matrix.iter().map(|[re, im]| Complex::new(T::lit(*re), T::lit(*im))).collect();
        *block = CMatrix::from_row_major(dim, dim, data)
            .ok_or_else(|| Error::Format(format!("matrix for {label} must have {} entries", dim * dim)))?;
    }
    Ok((coeffs, repr.role))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::spin_cutoff;

    #[test]
    fn bit_exact_round_trip() {
        for g in [GroupDescriptor::su2(), GroupDescriptor::torus(2).unwrap()] {
            let cutoff = if g.is_su2() { spin_cutoff::<f64>(5) } else { 4.3 };
            let dual = Arc::new(enumerate_dual(&g, cutoff).unwrap());
            let c = FourierCoefficients::from_fn(&dual, |i| {
                let d = dual.irreps()[i].dim;
                CMatrix::from_fn(d, d, |r, s| Complex::new((i as f64 + 0.1).sqrt() / 3.0, -1e-300 * (r + s) as f64))
            })
            .unwrap();
            let text = coefficients_to_json(&c, Some("symbol"));
            let (back, role) = coefficients_from_json::<f64>(&text).unwrap();
            assert_eq!(role.as_deref(), Some("symbol"));
            for (a, b) in c.blocks().iter().zip(back.blocks()) {
                assert_eq!(a, b);
            }
            assert_eq!(coefficients_to_json(&back, Some("symbol")), text);
        }
    }

    #[test]
    fn rejects_bad_shapes_and_labels() {
        let bad = r#"{"group":"su2","lambda":2.0,"entries":[{"label":0.5,"matrix":[[1,0]]}]}"#;
        assert!(matches!(coefficients_from_json::<f64>(bad), Err(Error::Format(_))));
        let outside = r#"{"group":"torus1","lambda":2.0,"entries":[{"label":[7],"matrix":[[1,0]]}]}"#;
        assert!(matches!(coefficients_from_json::<f64>(outside), Err(Error::Format(_))));
        let unknown = r#"{"group":"su2","lambda":2.0,"entries":[],"extra":1}"#;
        assert!(coefficients_from_json::<f64>(unknown).is_err());
    }
}
