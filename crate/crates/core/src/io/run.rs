use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::export::{front_csv, paths_csv, pattern_csv, progress_csv, read_front};
use super::export::{FrontRow, FrontSolution, FRONT_FILE, MANIFEST_FILE, PATHS_FILE, PATTERN_FILE, PROGRESS_FILE};
use super::{FieldError, IoError, RunAlgorithm, RunConfig, ScenarioConfig};
use crate::analysis::{normalized_hypervolume, pattern_grid, PatternSample};
use crate::moea::{run_algorithm, Algorithm, Genome, OptimizerConfig, Problem, ProgressRecord};
use crate::scenarios::{
    baseline_relay_solution, baseline_twoway_solution, evaluate_relay, evaluate_twoway, relay_arrays, twoway_arrays,
    RelayProblem, TwoWayProblem,
};

/// Record of a finished run, written last as `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub config_hash: String,
    pub scenario_hash: String,
    pub scenario_kind: String,
    pub algorithm: RunAlgorithm,
    pub seed: Option<u64>,
    pub wall_time_s: f64,
    pub evaluations: usize,
    pub front_size: usize,
    pub outputs: Vec<String>,
    pub config: RunConfig,
}

struct Outcome {
    rows: Vec<FrontRow>,
    progress: Vec<ProgressRecord>,
    evaluations: usize,
}

/// Files written so far; removed again unless the run commits.
struct Outputs {
    dir: PathBuf,
    created_dir: bool,
    written: Vec<PathBuf>,
    committed: bool,
}

impl Outputs {
    fn create(dir: PathBuf) -> Result<Self, IoError> {
        let created_dir = !dir.exists();
        fs::create_dir_all(&dir).map_err(|e| IoError::file(format!("creating {}", dir.display()), e))?;
        for name in [MANIFEST_FILE, FRONT_FILE, PROGRESS_FILE, PATHS_FILE, PATTERN_FILE] {
            let _ = fs::remove_file(dir.join(name));
        }
        Ok(Self { dir, created_dir, written: Vec::new(), committed: false })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), IoError> {
        let target = self.dir.join(name);
        write_atomic(&target, bytes)?;
        self.written.push(target);
        Ok(())
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if self.committed {
            return;
        }
        for f in &self.written {
            let _ = fs::remove_file(f);
        }
        if self.created_dir {
            let _ = fs::remove_dir(&self.dir);
        }
    }
}

fn write_atomic(target: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let name = target.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = target.with_file_name(format!(".{name}.tmp"));
    let ctx = || format!("writing {}", target.display());
    fs::write(&tmp, bytes).map_err(|e| IoError::file(ctx(), e))?;
    fs::rename(&tmp, target).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        IoError::file(ctx(), e)
    })
}

fn objectives3(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

fn optimize<P: Problem>(
    problem: &P,
    algorithm: Algorithm,
    config: &RunConfig,
    observer: &mut dyn FnMut(&ProgressRecord),
    decode: impl Fn(&Genome) -> FrontSolution,
) -> Result<Outcome, IoError> {
    let seed = config.seed.expect("validated: optimizer runs carry a seed");
    let opt = OptimizerConfig::with_settings(config.optimizer.clone(), seed);
    let result = run_algorithm(algorithm, problem, &opt, observer).map_err(|source| IoError::Optimizer {
        context: format!("{} on the {} scenario (seed {seed})", config.algorithm, config.scenario.kind()),
        source,
    })?;
    let mut rows: Vec<FrontRow> = result
        .archive
        .members()
        .map(|ind| FrontRow { objectives: objectives3(&ind.objectives), solution: decode(&ind.genome) })
        .collect();
    rows.sort_by(|a, b| {
        a.objectives.iter().zip(&b.objectives).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(Outcome { rows, progress: result.progress, evaluations: result.evaluations })
}

fn single_point(objectives: [f64; 3], solution: FrontSolution) -> Outcome {
    let reference: Vec<f64> = objectives.iter().map(|v| v + 1.0).collect();
    let hypervolume = normalized_hypervolume(&[objectives], &objectives, &reference).map_or(0.0, |h| h.value);
    Outcome {
        rows: vec![FrontRow { objectives, solution }],
        progress: vec![ProgressRecord {
            iteration: 0,
            archive_size: 1,
            evaluations: 1,
            best: objectives.to_vec(),
            hypervolume,
        }],
        evaluations: 1,
    }
}

fn execute(config: &RunConfig, observer: &mut dyn FnMut(&ProgressRecord)) -> Result<Outcome, IoError> {
    let scenario_err = |source| IoError::Scenario { context: format!("{} scenario", config.scenario.kind()), source };
    match (&config.scenario, config.algorithm.optimizer(), config.algorithm.baseline()) {
        (ScenarioConfig::Relay(s), Some(alg), _) => {
            let problem = RelayProblem::new(s.clone()).map_err(scenario_err)?;
            optimize(&problem, alg, config, observer, |g| FrontSolution::Relay(problem.decode(g)))
        }
        (ScenarioConfig::Twoway(s), Some(alg), _) => {
            let problem = TwoWayProblem::new(s.clone()).map_err(scenario_err)?;
            optimize(&problem, alg, config, observer, |g| FrontSolution::Twoway(problem.decode(g)))
        }
        (ScenarioConfig::Relay(s), None, Some(kind)) => {
            let sol = baseline_relay_solution(s, kind, config.baseline_spacing_m).map_err(scenario_err)?;
            let obj = evaluate_relay(s, &sol).map_err(scenario_err)?;
            let out = single_point(obj.to_array(), FrontSolution::Relay(sol));
            observer(&out.progress[0]);
            Ok(out)
        }
        (ScenarioConfig::Twoway(s), None, Some(kind)) => {
            let sol = baseline_twoway_solution(s, kind, config.baseline_spacing_m).map_err(scenario_err)?;
            let obj = evaluate_twoway(s, &sol).map_err(scenario_err)?;
            let out = single_point(obj.to_array(), FrontSolution::Twoway(sol));
            observer(&out.progress[0]);
            Ok(out)
        }
        (_, None, None) => unreachable!("every algorithm is an optimizer or a baseline"),
    }
}

/// Normalized beam pattern of every array of one front row.
pub fn pattern_for_row(
    scenario: &ScenarioConfig,
    row: &FrontRow,
    grid_deg: f64,
) -> Result<Vec<(String, Vec<PatternSample>)>, IoError> {
    let scenario_err = |source| IoError::Scenario { context: "pattern export".into(), source };
    let analysis_err = |source| IoError::Analysis { context: "pattern export".into(), source };
    match (scenario, &row.solution) {
        (ScenarioConfig::Relay(s), FrontSolution::Relay(sol)) => relay_arrays(s, sol)
            .map_err(scenario_err)?
            .iter()
            .enumerate()
            .map(|(c, a)| Ok((format!("leg{c}"), pattern_grid(a, s.channel.carrier_hz, grid_deg).map_err(analysis_err)?)))
            .collect(),
        (ScenarioConfig::Twoway(s), FrontSolution::Twoway(sol)) => {
            let (a, b) = twoway_arrays(s, sol).map_err(scenario_err)?;
            let f = s.channel.carrier_hz;
            Ok(vec![
                ("a".into(), pattern_grid(&a, f, grid_deg).map_err(analysis_err)?),
                ("b".into(), pattern_grid(&b, f, grid_deg).map_err(analysis_err)?),
            ])
        }
        _ => Err(IoError::format("pattern export", "front row does not belong to this scenario")),
    }
}

/// Index of the row with the highest total secrecy (lowest f1).
fn most_secure(rows: &[FrontRow]) -> usize {
    (0..rows.len()).min_by(|&a, &b| rows[a].objectives[0].total_cmp(&rows[b].objectives[0])).unwrap_or(0)
}

/// Executes a validated config and writes its outputs under `output_root`.
/// On failure every file written by this call is removed again.
pub fn run(
    config: &RunConfig,
    output_root: &Path,
    observer: &mut dyn FnMut(&ProgressRecord),
) -> Result<RunManifest, IoError> {
    let errors = config.validate();
    if !errors.is_empty() {
        return Err(IoError::Validation { source_name: "config".into(), errors });
    }
    let started = Instant::now();
    let mut out = Outputs::create(config.resolve_output_dir(output_root))?;
    let outcome = execute(config, observer)?;

    out.write(FRONT_FILE, &front_csv(&config.scenario, &outcome.rows))?;
    out.write(PROGRESS_FILE, &progress_csv(&outcome.progress))?;
    out.write(PATHS_FILE, &paths_csv(&config.scenario, &outcome.rows))?;
    let mut outputs = vec![FRONT_FILE.to_string(), PROGRESS_FILE.to_string(), PATHS_FILE.to_string()];
    if let Some(p) = &config.pattern {
        let row = p.row.unwrap_or_else(|| most_secure(&outcome.rows));
        if row >= outcome.rows.len() {
            return Err(IoError::Validation {
                source_name: "config".into(),
                errors: vec![FieldError {
                    path: "pattern.row".into(),
                    message: format!("front has {} rows, row {row} requested", outcome.rows.len()),
                }],
            });
        }
        let arrays = pattern_for_row(&config.scenario, &outcome.rows[row], p.grid_deg)?;
        out.write(PATTERN_FILE, &pattern_csv(row, &arrays))?;
        outputs.push(PATTERN_FILE.to_string());
    }

    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: config.hash(),
        scenario_hash: config.scenario.hash(),
        scenario_kind: config.scenario.kind().to_string(),
        algorithm: config.algorithm,
        seed: config.seed,
        wall_time_s: started.elapsed().as_secs_f64(),
        evaluations: outcome.evaluations,
        front_size: outcome.rows.len(),
        outputs,
        config: config.clone(),
    };
    let mut json = serde_json::to_vec_pretty(&manifest).expect("manifest always serializes");
    json.push(b'\n');
    out.write(MANIFEST_FILE, &json)?;
    out.committed = true;
    Ok(manifest)
}

/// Writes the pattern of one row of a finished run's front. Returns the path written.
pub fn export_pattern(
    config: &RunConfig,
    output_root: &Path,
    row: usize,
    grid_deg: f64,
    target: Option<&Path>,
) -> Result<PathBuf, IoError> {
    let dir = config.resolve_output_dir(output_root);
    let rows = read_front(&dir.join(FRONT_FILE), &config.scenario)?;
    let chosen = rows.get(row).ok_or_else(|| {
        IoError::Usage(format!("front has {} rows, row {row} requested", rows.len()))
    })?;
    let arrays = pattern_for_row(&config.scenario, chosen, grid_deg)?;
    let path = target.map(Path::to_path_buf).unwrap_or_else(|| dir.join(format!("pattern_row{row}.csv")));
    write_atomic(&path, &pattern_csv(row, &arrays))?;
    Ok(path)
}
