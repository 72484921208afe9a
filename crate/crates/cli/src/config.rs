//! Experiment configuration files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lieharm::{spin_cutoff, EnsembleConfig, GroupDescriptor, NormSpec, SymbolSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Transform,
    CheckSymbol,
    TlNorm,
    KernelDecay,
    BoundSweep,
    Selftest,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Transform => "transform",
            Self::CheckSymbol => "check-symbol",
            Self::TlNorm => "tl-norm",
            Self::KernelDecay => "kernel-decay",
            Self::BoundSweep => "bound-sweep",
            Self::Selftest => "selftest",
        }
    }

    /// Tolerance names the task understands, with their defaults.
    pub fn tolerances(&self) -> &'static [(&'static str, Option<f64>)] {
        match self {
            Self::Transform => &[("roundtrip", Some(1e-10)), ("plancherel", Some(1e-10))],
            Self::CheckSymbol => &[("marcinkiewicz", None), ("hormander_mihlin", None), ("weak_marcinkiewicz", None)],
            Self::TlNorm => &[],
            Self::KernelDecay => &[("slope", None)],
            Self::BoundSweep => &[("variation", None), ("l2_excess", None)],
            Self::Selftest => &[
                ("plancherel", Some(1e-10)),
                ("roundtrip", Some(1e-10)),
                ("partition", Some(1e-12)),
                ("reconstruction", Some(1e-11)),
                ("identity_symbol", Some(1e-12)),
                ("identity_sweep", Some(1e-9)),
            ],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormEntry {
    pub r: f64,
    pub p: f64,
    pub q: f64,
}

impl NormEntry {
    pub fn spec(&self) -> Result<NormSpec<f64>, CliError> {
        Ok(NormSpec::new(self.r, self.p, self.q)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Marcinkiewicz,
    HormanderMihlin,
    WeakMarcinkiewicz,
}

impl Condition {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Marcinkiewicz => "marcinkiewicz",
            Self::HormanderMihlin => "hormander_mihlin",
            Self::WeakMarcinkiewicz => "weak_marcinkiewicz",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckOptions {
    #[serde(default = "default_conditions")]
    pub conditions: Vec<Condition>,
    /// Marcinkiewicz order; defaults to `⌊n/2⌋ + 1`.
    #[serde(default)]
    pub order: Option<u32>,
    /// Sobolev order of the Hörmander-Mihlin check; defaults to `⌊n/2⌋ + 1`.
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default = "default_s0")]
    pub s0: u32,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { conditions: default_conditions(), order: None, s: None, s0: default_s0() }
    }
}

fn default_conditions() -> Vec<Condition> {
    vec![Condition::Marcinkiewicz]
}

fn default_s0() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelOptions {
    pub levels: Vec<u32>,
    #[serde(default = "default_c")]
    pub c: f64,
    /// Distance `|z|` of the translation from the identity.
    #[serde(default = "default_z_distance")]
    pub z_distance: f64,
    /// Integration grid bandlimit as a multiple of each kernel's extent.
    #[serde(default = "default_kernel_oversample")]
    pub oversample: u32,
}

fn default_c() -> f64 {
    1.0
}

fn default_z_distance() -> f64 {
    0.05 * std::f64::consts::TAU
}

fn default_kernel_oversample() -> u32 {
    2
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// One experiment. On SU(2) the entries of `cutoffs` are maximal spins
/// `ℓ_max` (multiples of 1/2); on tori they bound `⟨ξ⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    pub group: String,
    pub cutoffs: Vec<f64>,
    #[serde(default)]
    pub symbols: Vec<SymbolSpec>,
    #[serde(default)]
    pub norms: Vec<NormEntry>,
    #[serde(default)]
    pub ensemble: Option<EnsembleConfig>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub check: Option<CheckOptions>,
    #[serde(default)]
    pub kernel: Option<KernelOptions>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Structural checks that need no computation.
    pub fn validate(&self) -> Result<(), CliError> {
        let group = self.group_descriptor()?;
        if self.cutoffs.is_empty() {
            return Err(CliError::Config("`cutoffs` must not be empty".into()));
        }
        for &c in &self.cutoffs {
            self.cutoff_value(&group, c)?;
        }
        if self.cutoffs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config("`cutoffs` must be strictly ascending".into()));
        }
        for norm in &self.norms {
            norm.spec()?;
        }
        let known = self.task.tolerances();
        for name in self.tolerances.keys() {
            if !known.iter().any(|(k, _)| k == name) {
                return Err(CliError::Config(format!("task {} has no tolerance `{name}`", self.task.name())));
            }
        }
        let needs = |what: bool, msg: &str| if what { Ok(()) } else { Err(CliError::Config(msg.into())) };
        match self.task {
            Task::Transform | Task::TlNorm => needs(self.ensemble.is_some(), "task needs an `ensemble`")?,
            Task::CheckSymbol => needs(!self.symbols.is_empty(), "task needs at least one symbol")?,
            Task::KernelDecay => {
                needs(self.symbols.len() == 1, "kernel-decay needs exactly one symbol")?;
                needs(self.cutoffs.len() == 1, "kernel-decay needs exactly one cutoff")?;
                let k = self.kernel.as_ref().ok_or_else(|| CliError::Config("kernel-decay needs `kernel`".into()))?;
                needs(k.levels.len() >= 2, "kernel-decay needs at least two levels")?;
                needs(k.c > 0.0 && k.z_distance > 0.0 && k.oversample > 0, "kernel options must be positive")?;
            }
            Task::BoundSweep => {
                needs(!self.symbols.is_empty(), "task needs at least one symbol")?;
                needs(!self.norms.is_empty(), "task needs at least one norm")?;
                needs(self.ensemble.is_some(), "task needs an `ensemble`")?;
            }
            Task::Selftest => {}
        }
        if matches!(self.task, Task::TlNorm) {
            needs(!self.norms.is_empty(), "task needs at least one norm")?;
        }
        if let Some(e) = &self.ensemble {
            needs(e.count > 0 && e.oversample > 0, "ensemble count and oversample must be positive")?;
        }
        Ok(())
    }

    pub fn group_descriptor(&self) -> Result<GroupDescriptor, CliError> {
        Ok(GroupDescriptor::from_name(&self.group)?)
    }

    /// Library cutoff `Λ` on `⟨ξ⟩` for one configured entry.
    pub fn cutoff_value(&self, group: &GroupDescriptor, entry: f64) -> Result<f64, CliError> {
        if !(entry.is_finite() && entry >= 0.0) {
            return Err(CliError::Config(format!("cutoff {entry} must be finite and nonnegative")));
        }
        if group.is_su2() {
            let twice = 2.0 * entry;
            if twice.fract() != 0.0 {
                return Err(CliError::Config(format!("SU(2) cutoff {entry} is not a multiple of 1/2")));
            }
            Ok(spin_cutoff(twice as u32))
        } else if entry < 1.0 {
            Err(CliError::Config(format!("torus cutoff {entry} is below 1")))
        } else {
            Ok(entry)
        }
    }

    /// Configured tolerance, falling back to the task default.
    pub fn tolerance(&self, name: &str) -> Option<f64> {
        self.tolerances.get(name).copied().or_else(|| {
            self.task.tolerances().iter().find(|(k, _)| *k == name).and_then(|(_, v)| *v)
        })
    }

    /// `--tol NAME=VALUE`.
    pub fn override_tolerance(&mut self, arg: &str) -> Result<(), CliError> {
        let (name, value) = arg
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("tolerance `{arg}` is not NAME=VALUE")))?;
        let value: f64 = value.parse().map_err(|_| CliError::Config(format!("tolerance value `{value}`")))?;
        self.tolerances.insert(name.to_owned(), value);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"task":"selftest","group":"torus1","cutoffs":[64]}"#;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = ExperimentConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.output, PathBuf::from("out"));
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.tolerance("plancherel"), Some(1e-10));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"task":"selftest","group":"torus1","cutoffs":[64],"colour":1}"#;
        assert!(matches!(ExperimentConfig::parse(text), Err(CliError::Config(_))));
    }

    #[test]
    fn su2_cutoffs_are_half_integer_spins() {
        let c = ExperimentConfig::parse(r#"{"task":"selftest","group":"su2","cutoffs":[2.5]}"#).unwrap();
        let g = c.group_descriptor().unwrap();
        assert_eq!(c.cutoff_value(&g, 2.5).unwrap(), spin_cutoff::<f64>(5));
        assert!(ExperimentConfig::parse(r#"{"task":"selftest","group":"su2","cutoffs":[2.3]}"#).is_err());
    }

    #[test]
    fn tolerance_overrides() {
        let mut c = ExperimentConfig::parse(MINIMAL).unwrap();
        c.override_tolerance("plancherel=1e-6").unwrap();
        assert_eq!(c.tolerance("plancherel"), Some(1e-6));
        assert!(c.override_tolerance("plancherel").is_err());
        c.override_tolerance("nonsense=1").unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn task_requirements() {
        let text = r#"{"task":"bound-sweep","group":"torus1","cutoffs":[16,32],"symbols":[{"type":"wave"}]}"#;
        assert!(ExperimentConfig::parse(text).is_err());
        assert!(ExperimentConfig::parse(r#"{"task":"selftest","group":"torus1","cutoffs":[32,16]}"#).is_err());
    }
}
