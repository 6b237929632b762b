use std::path::{Path, PathBuf};

use serde::Serialize;

use super::export::{read_front, FRONT_FILE};
use super::run::RunManifest;
use super::{IoError, RunAlgorithm};
use crate::analysis::{front_metrics, shared_reference, FrontMetrics};

/// Margin of the shared reference point, as a fraction of each objective's range.
const REFERENCE_MARGIN: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub run: String,
    pub algorithm: RunAlgorithm,
    pub seed: Option<u64>,
    pub metrics: FrontMetrics,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub reference: Vec<f64>,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("run,algorithm,seed,cardinality,hypervolume,spread,excluded\n");
        for r in &self.rows {
            let m = &r.metrics;
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.run,
                r.algorithm,
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
                m.cardinality,
                m.hypervolume,
                m.spread.map(|s| s.to_string()).unwrap_or_default(),
                m.excluded,
            ));
        }
        out
    }
}

fn manifest_path(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join(super::MANIFEST_FILE)
    } else {
        p.to_path_buf()
    }
}

/// Metrics of several runs of one scenario under a common reference point.
/// Accepts manifest files or the run directories holding them.
pub fn compare(manifests: &[PathBuf]) -> Result<ComparisonTable, IoError> {
    if manifests.len() < 2 {
        return Err(IoError::Usage(format!("compare needs at least 2 manifests, got {}", manifests.len())));
    }
    let mut runs = Vec::with_capacity(manifests.len());
    for p in manifests {
        let path = manifest_path(p);
        let name = path.display().to_string();
        let text = std::fs::read_to_string(&path).map_err(|e| IoError::file(format!("reading {name}"), e))?;
        let m: RunManifest = serde_json::from_str(&text).map_err(|e| IoError::format(&name, e.to_string()))?;
        if m.config.scenario.hash() != m.scenario_hash {
            return Err(IoError::format(&name, "recorded scenario does not match its hash"));
        }
        let dir = path.parent().unwrap_or(Path::new("."));
        let front = read_front(&dir.join(FRONT_FILE), &m.config.scenario)?;
        let points: Vec<Vec<f64>> = front.iter().map(|r| r.objectives.to_vec()).collect();
        runs.push((p.display().to_string(), m, points));
    }
    let first = &runs[0].1.scenario_hash;
    if let Some((name, _, _)) = runs.iter().find(|(_, m, _)| &m.scenario_hash != first) {
        return Err(IoError::ScenarioMismatch(format!("{} differs from {}", name, runs[0].0)));
    }
    let fronts: Vec<&[Vec<f64>]> = runs.iter().map(|(_, _, f)| f.as_slice()).collect();
    let analysis_err = |source| IoError::Analysis { context: "compare".into(), source };
    let reference = shared_reference(&fronts, REFERENCE_MARGIN).map_err(analysis_err)?;
    let rows = runs
        .iter()
        .map(|(name, m, front)| {
            Ok(ComparisonRow {
                run: name.clone(),
                algorithm: m.algorithm,
                seed: m.seed,
                metrics: front_metrics(front, &reference).map_err(analysis_err)?,
            })
        })
        .collect::<Result<_, IoError>>()?;
    Ok(ComparisonTable { reference, rows })
}
