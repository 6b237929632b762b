//! Run configuration, orchestration and CSV/JSON export.
//!
//! A run reads one JSON [`RunConfig`], executes an optimizer (or evaluates a
//! fixed LAA/RAA formation) and writes `front.csv`, `progress.csv`,
//! `paths.csv`, an optional `pattern.csv`, and finally `manifest.json`.
//! Angles in config files are degrees.

mod compare;
mod export;
mod run;

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::em::{BaselineKind, EmError};
use crate::moea::{Algorithm, MoeaError, OptimizerSettings};
use crate::scenarios::{RelayScenario, ScenarioError, TwoWayScenario};

pub use compare::{compare, ComparisonRow, ComparisonTable};
pub use export::{read_front, FrontRow, FrontSolution, FRONT_FILE, MANIFEST_FILE, PATHS_FILE, PATTERN_FILE, PROGRESS_FILE};
pub use run::{export_pattern, pattern_for_row, run, RunManifest};

/// Environment variable naming the directory relative output paths resolve against.
pub const OUTPUT_ROOT_ENV: &str = "UAVSEC_OUTPUT_ROOT";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse { source_name: String, line: usize, column: usize, message: String },
    #[error("{source_name}: invalid configuration\n  {}", join_fields(.errors))]
    Validation { source_name: String, errors: Vec<FieldError> },
    #[error("no config file or preset named {0:?}")]
    NotFound(String),
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    File { context: String, source: std::io::Error },
    #[error("{context}: {message}")]
    Format { context: String, message: String },
    #[error("manifests describe different scenarios: {0}")]
    ScenarioMismatch(String),
    #[error("{context}: {source}")]
    Scenario { context: String, source: ScenarioError },
    #[error("{context}: {source}")]
    Optimizer { context: String, source: MoeaError },
    #[error("{context}: {source}")]
    Analysis { context: String, source: AnalysisError },
}

fn join_fields(errors: &[FieldError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n  ")
}

impl IoError {
    /// True for problems with the user's input rather than the run itself.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            IoError::Parse { .. } | IoError::Validation { .. } | IoError::NotFound(_) | IoError::Usage(_)
        )
    }

    /// Process exit status: 2 for configuration errors, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.is_config_error() {
            2
        } else {
            3
        }
    }

    pub(crate) fn file(context: impl Into<String>, source: std::io::Error) -> Self {
        IoError::File { context: context.into(), source }
    }

    pub(crate) fn format(context: impl Into<String>, message: impl Into<String>) -> Self {
        IoError::Format { context: context.into(), message: message.into() }
    }
}

impl From<EmError> for IoError {
    fn from(e: EmError) -> Self {
        IoError::Scenario { context: "array".into(), source: e.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScenarioConfig {
    Relay(RelayScenario),
    Twoway(TwoWayScenario),
}

impl ScenarioConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ScenarioConfig::Relay(_) => "relay",
            ScenarioConfig::Twoway(_) => "twoway",
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        match self {
            ScenarioConfig::Relay(s) => s.validate(),
            ScenarioConfig::Twoway(s) => s.validate(),
        }
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        sha256_json(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunAlgorithm {
    Imodaom,
    Emoalo,
    Mopso,
    Random,
    Laa,
    Raa,
}

impl RunAlgorithm {
    pub fn optimizer(self) -> Option<Algorithm> {
        match self {
            RunAlgorithm::Imodaom => Some(Algorithm::Imodaom),
            RunAlgorithm::Emoalo => Some(Algorithm::Emoalo),
            RunAlgorithm::Mopso => Some(Algorithm::Mopso),
            RunAlgorithm::Random => Some(Algorithm::Random),
            RunAlgorithm::Laa | RunAlgorithm::Raa => None,
        }
    }

    pub fn baseline(self) -> Option<BaselineKind> {
        match self {
            RunAlgorithm::Laa => Some(BaselineKind::Laa),
            RunAlgorithm::Raa => Some(BaselineKind::Raa),
            _ => None,
        }
    }
}

impl fmt::Display for RunAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunAlgorithm::Imodaom => "imodaom",
            RunAlgorithm::Emoalo => "emoalo",
            RunAlgorithm::Mopso => "mopso",
            RunAlgorithm::Random => "random",
            RunAlgorithm::Laa => "laa",
            RunAlgorithm::Raa => "raa",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PatternExport {
    pub grid_deg: f64,
    /// Front row to export; defaults to the row with the highest secrecy.
    pub row: Option<usize>,
}

impl Default for PatternExport {
    fn default() -> Self {
        Self { grid_deg: 1.0, row: None }
    }
}

fn default_spacing() -> f64 {
    0.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub algorithm: RunAlgorithm,
    /// Required for optimizer runs.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
    /// Element spacing of the LAA/RAA formations.
    #[serde(default = "default_spacing")]
    pub baseline_spacing_m: f64,
    /// Relative paths resolve against the output root.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub pattern: Option<PatternExport>,
}

impl RunConfig {
    pub fn new(scenario: ScenarioConfig, algorithm: RunAlgorithm, seed: Option<u64>) -> Self {
        Self {
            scenario,
            algorithm,
            seed,
            optimizer: OptimizerSettings::default(),
            baseline_spacing_m: default_spacing(),
            output_dir: None,
            pattern: None,
        }
    }

    pub fn validate(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        let mut push = |path: &str, message: String| errors.push(FieldError { path: path.into(), message });
        if self.algorithm.optimizer().is_some() {
            if self.seed.is_none() {
                push("seed", format!("required for {} runs", self.algorithm));
            }
            if let Err(e) = self.optimizer.validate() {
                push("optimizer", e.to_string());
            }
        }
        if let Err(e) = self.scenario.validate() {
            push("scenario", e.to_string());
        }
        if !(self.baseline_spacing_m > 0.0 && self.baseline_spacing_m.is_finite()) {
            push("baseline_spacing_m", format!("must be positive, got {}", self.baseline_spacing_m));
        }
        if let Some(p) = &self.pattern {
            if !(p.grid_deg > 0.0 && p.grid_deg <= 90.0) {
                push("pattern.grid_deg", format!("must lie in (0, 90], got {}", p.grid_deg));
            }
        }
        errors
    }

    pub fn hash(&self) -> String {
        sha256_json(self)
    }

    /// Output directory name used when `output_dir` is unset.
    pub fn default_output_dir(&self) -> PathBuf {
        match self.seed {
            Some(seed) if self.algorithm.optimizer().is_some() => {
                format!("{}-{}-seed{seed}", self.scenario.kind(), self.algorithm).into()
            }
            _ => format!("{}-{}", self.scenario.kind(), self.algorithm).into(),
        }
    }

    /// Directory the run writes into.
    pub fn resolve_output_dir(&self, root: &Path) -> PathBuf {
        let dir = self.output_dir.clone().unwrap_or_else(|| self.default_output_dir());
        if dir.is_absolute() {
            dir
        } else {
            root.join(dir)
        }
    }
}

fn sha256_json<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("config types always serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Shipped presets, addressable by name on the command line.
pub const PRESETS: [(&str, &str); 4] = [
    ("relay_default", include_str!("../../../../configs/relay_default.json")),
    ("twoway_default", include_str!("../../../../configs/twoway_default.json")),
    ("tiny_relay", include_str!("../../../../configs/tiny_relay.json")),
    ("tiny_twoway", include_str!("../../../../configs/tiny_twoway.json")),
];

/// Output root from the environment, else the working directory.
pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

/// Parses and validates config text. A run manifest is accepted too, in
/// which case its recorded config is used.
pub fn parse_config(text: &str, source_name: &str) -> Result<RunConfig, IoError> {
    let parse_err = |e: serde_json::Error| IoError::Parse {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e),
    };
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    let config: RunConfig = if value.get("config_hash").is_some() {
        let inner = value.get("config").cloned().unwrap_or(serde_json::Value::Null);
        serde_json::from_value(inner).map_err(|e| IoError::Validation {
            source_name: source_name.to_string(),
            errors: vec![FieldError { path: "config".into(), message: e.to_string() }],
        })?
    } else {
        serde_json::from_str(text).map_err(parse_err)?
    };
    let errors = config.validate();
    if errors.is_empty() {
        Ok(config)
    } else {
        Err(IoError::Validation { source_name: source_name.to_string(), errors })
    }
}

fn strip_position(e: &serde_json::Error) -> String {
    let full = e.to_string();
    let suffix = format!(" at line {} column {}", e.line(), e.column());
    full.strip_suffix(&suffix).unwrap_or(&full).to_string()
}

pub fn load_config(path: &Path) -> Result<RunConfig, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => IoError::NotFound(path.display().to_string()),
        _ => IoError::file(format!("reading {}", path.display()), e),
    })?;
    parse_config(&text, &path.display().to_string())
}

/// A config file path, or the name of a shipped preset.
pub fn resolve_config(arg: &str) -> Result<RunConfig, IoError> {
    let path = Path::new(arg);
    if path.exists() {
        return load_config(path);
    }
    match PRESETS.iter().find(|(name, _)| *name == arg) {
        Some((name, text)) => parse_config(text, name),
        None => Err(IoError::NotFound(arg.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{relay_default, tiny_relay, tiny_twoway, twoway_default};

    #[test]
    fn presets_match_builtin_scenarios() {
        let expect = [
            ScenarioConfig::Relay(relay_default()),
            ScenarioConfig::Twoway(twoway_default()),
            ScenarioConfig::Relay(tiny_relay()),
            ScenarioConfig::Twoway(tiny_twoway()),
        ];
        for ((name, _), scenario) in PRESETS.iter().zip(expect) {
            let c = resolve_config(name).unwrap();
            assert_eq!(c.scenario, scenario, "{name}");
            assert!(c.seed.is_some());
        }
    }

    #[test]
    fn missing_seed_is_a_validation_error() {
        let mut c = RunConfig::new(ScenarioConfig::Relay(tiny_relay()), RunAlgorithm::Imodaom, None);
        let errors = c.validate();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].path, "seed");
        c.algorithm = RunAlgorithm::Laa;
        assert!(c.validate().is_empty());
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_config("{\n  \"algorithm\": \"imodaom\",\n  oops\n}", "x.json").unwrap_err();
        match err {
            IoError::Parse { line, column, .. } => assert_eq!((line, column), (3, 3)),
            other => panic!("unexpected {other}"),
        }
        assert_eq!(parse_config("[", "x").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn validation_lists_field_paths() {
        let mut c = RunConfig::new(ScenarioConfig::Twoway(tiny_twoway()), RunAlgorithm::Emoalo, Some(1));
        c.optimizer.population = 0;
        c.baseline_spacing_m = -1.0;
        c.pattern = Some(PatternExport { grid_deg: 0.0, row: None });
        let text = serde_json::to_string(&c).unwrap();
        match parse_config(&text, "cfg").unwrap_err() {
            IoError::Validation { errors, .. } => {
                let paths: Vec<_> = errors.iter().map(|e| e.path.as_str()).collect();
                assert_eq!(paths, ["optimizer", "baseline_spacing_m", "pattern.grid_deg"]);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut v = serde_json::to_value(RunConfig::new(
            ScenarioConfig::Relay(tiny_relay()),
            RunAlgorithm::Random,
            Some(3),
        ))
        .unwrap();
        v["sead"] = 4.into();
        assert!(matches!(parse_config(&v.to_string(), "c"), Err(IoError::Parse { .. })));
    }

    #[test]
    fn unknown_preset() {
        let e = resolve_config("no_such_preset").unwrap_err();
        assert!(matches!(e, IoError::NotFound(_)));
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn default_output_dirs() {
        let c = RunConfig::new(ScenarioConfig::Relay(tiny_relay()), RunAlgorithm::Mopso, Some(9));
        assert_eq!(c.default_output_dir(), PathBuf::from("relay-mopso-seed9"));
        let b = RunConfig::new(ScenarioConfig::Twoway(tiny_twoway()), RunAlgorithm::Raa, Some(9));
        assert_eq!(b.default_output_dir(), PathBuf::from("twoway-raa"));
        assert_eq!(b.resolve_output_dir(Path::new("/out")), PathBuf::from("/out/twoway-raa"));
    }
}
