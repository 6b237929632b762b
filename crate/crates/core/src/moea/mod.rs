//! Multi-objective metaheuristics over mixed continuous / integer /
//! permutation genomes, with a bounded Pareto archive.
//!
//! All randomness comes from one seeded ChaCha stream consumed on the
//! calling thread; objective evaluations of a generation run in parallel
//! and are merged back in population order, so every run is a pure function
//! of problem and configuration.

mod baselines;
mod emoalo;
mod genome;
mod imodaom;
mod init;
mod operators;
mod pareto;
mod runner;

use serde::{Deserialize, Serialize};

pub use baselines::{mopso_run, random_search, random_search_run};
pub use emoalo::emoalo_run;
pub use genome::{is_permutation, EvaluationError, Genome, GenomeSchema, Problem};
pub use imodaom::imodaom_run;
pub use init::{orthogonal_init, orthogonal_levels, random_walk};
pub use operators::{
    apply_step, gravity_discrete, gravity_step, integer_mutation, multi_gravity_update, pmx, Attractors,
    GravityWeights,
};
pub use pareto::{dominates, nondominated_filter, Archive, Individual};
pub use runner::{ProgressRecord, RunResult};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MoeaError {
    #[error("optimizer configuration: {0}")]
    Config(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("evaluation of individual {index} in iteration {iteration} failed: {message}")]
    Evaluation { iteration: usize, index: usize, message: String },
}

/// Linearly annealed coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Anneal {
    pub start: f64,
    pub end: f64,
}

impl Anneal {
    pub const fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    pub fn at(&self, frac: f64) -> f64 {
        self.start + (self.end - self.start) * frac.clamp(0.0, 1.0)
    }
}

/// Dragonfly behaviour weights over the run: separation, alignment,
/// cohesion, food attraction, enemy distraction and step inertia.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DragonflySchedule {
    pub separation: Anneal,
    pub alignment: Anneal,
    pub cohesion: Anneal,
    pub food: Anneal,
    pub enemy: Anneal,
    pub inertia: Anneal,
    /// Neighbourhood radius as a fraction of the (RMS-normalized) search box.
    pub neighbourhood: Anneal,
    /// Lévy-flight step for individuals without neighbours, as a fraction of each gene's range.
    pub levy_scale: f64,
}

impl Default for DragonflySchedule {
    fn default() -> Self {
        Self {
            separation: Anneal::new(0.1, 0.0),
            alignment: Anneal::new(0.1, 0.0),
            cohesion: Anneal::new(0.1, 0.0),
            food: Anneal::new(0.5, 1.0),
            enemy: Anneal::new(0.5, 0.0),
            inertia: Anneal::new(0.9, 0.4),
            neighbourhood: Anneal::new(0.05, 0.5),
            levy_scale: 0.01,
        }
    }
}

/// Extra attractors of the gravity update besides the food source, whose
/// weight follows the dragonfly food schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GravitySettings {
    pub personal: f64,
    pub random_elite: f64,
}

impl Default for GravitySettings {
    fn default() -> Self {
        Self { personal: 0.3, random_elite: 0.2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmoaloSettings {
    /// Iteration fraction separating the early and late stages.
    pub stage_threshold: f64,
    /// Late-stage probability that an ant is replaced by a random immigrant.
    pub immigrant_rate: f64,
    /// Early-stage weight of the elite walk relative to the antlion walk.
    pub elite_amplification: f64,
    /// Late-stage multiplier on the walk radius.
    pub late_widening: f64,
    pub mutation_rate: f64,
    pub walk_steps: usize,
    /// Half-width of the initial walks around the anchor, as a fraction of each gene's range.
    pub init_radius: f64,
}

impl Default for EmoaloSettings {
    fn default() -> Self {
        Self {
            stage_threshold: 0.5,
            immigrant_rate: 0.1,
            elite_amplification: 2.0,
            late_widening: 2.0,
            mutation_rate: 0.1,
            walk_steps: 20,
            init_radius: 0.25,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MopsoSettings {
    pub inertia: f64,
    pub personal: f64,
    pub social: f64,
}

impl Default for MopsoSettings {
    fn default() -> Self {
        Self { inertia: 0.4, personal: 1.0, social: 1.0 }
    }
}

/// Tunables shared by every optimizer. The seed lives in [`OptimizerConfig`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSettings {
    pub population: usize,
    pub iterations: usize,
    pub archive_capacity: usize,
    pub hypercube_segments: usize,
    pub orthogonal_levels: usize,
    /// Per-iteration step limit as a fraction of each gene's range.
    pub max_step_fraction: f64,
    pub dragonfly: DragonflySchedule,
    pub gravity: GravitySettings,
    pub emoalo: EmoaloSettings,
    pub mopso: MopsoSettings,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            population: 50,
            iterations: 200,
            archive_capacity: 100,
            hypercube_segments: 10,
            orthogonal_levels: 5,
            max_step_fraction: 0.25,
            dragonfly: DragonflySchedule::default(),
            gravity: GravitySettings::default(),
            emoalo: EmoaloSettings::default(),
            mopso: MopsoSettings::default(),
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<(), MoeaError> {
        let bad = |m: String| Err(MoeaError::Config(m));
        if self.population < 2 {
            return bad(format!("population must be at least 2, got {}", self.population));
        }
        if self.archive_capacity == 0 {
            return bad("archive_capacity must be positive".into());
        }
        if self.hypercube_segments == 0 {
            return bad("hypercube_segments must be positive".into());
        }
        if self.orthogonal_levels < 2 {
            return bad("orthogonal_levels must be at least 2".into());
        }
        if !(self.max_step_fraction > 0.0 && self.max_step_fraction.is_finite()) {
            return bad("max_step_fraction must be positive".into());
        }
        let e = &self.emoalo;
        for (name, v) in [
            ("emoalo.stage_threshold", e.stage_threshold),
            ("emoalo.immigrant_rate", e.immigrant_rate),
            ("emoalo.mutation_rate", e.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if !(e.elite_amplification > 0.0 && e.late_widening > 0.0 && e.init_radius >= 0.0) {
            return bad("emoalo amplification, widening and radius must be positive".into());
        }
        if e.walk_steps == 0 {
            return bad("emoalo.walk_steps must be at least 1".into());
        }
        let weights = [
            self.dragonfly.levy_scale,
            self.gravity.personal,
            self.gravity.random_elite,
            self.mopso.inertia,
            self.mopso.personal,
            self.mopso.social,
        ];
        let d = &self.dragonfly;
        let anneals = [d.separation, d.alignment, d.cohesion, d.food, d.enemy, d.inertia, d.neighbourhood];
        if weights.iter().chain(anneals.iter().flat_map(|a| [&a.start, &a.end])).any(|w| !(*w >= 0.0 && w.is_finite())) {
            return bad("weights must be finite and non-negative".into());
        }
        Ok(())
    }

    /// Objective evaluations a population algorithm spends.
    pub fn budget(&self) -> usize {
        self.population * (self.iterations + 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub settings: OptimizerSettings,
    pub seed: u64,
}

impl OptimizerConfig {
    pub fn new(seed: u64) -> Self {
        Self { settings: OptimizerSettings::default(), seed }
    }

    pub fn with_settings(settings: OptimizerSettings, seed: u64) -> Self {
        Self { settings, seed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Imodaom,
    Emoalo,
    Mopso,
    Random,
}

/// Dispatches to the selected optimizer, reporting each progress record to `observer`.
pub fn run_algorithm<P: Problem + ?Sized>(
    algorithm: Algorithm,
    problem: &P,
    config: &OptimizerConfig,
    observer: &mut dyn FnMut(&ProgressRecord),
) -> Result<RunResult, MoeaError> {
    match algorithm {
        Algorithm::Imodaom => imodaom::imodaom_run_with(problem, config, observer),
        Algorithm::Emoalo => emoalo::emoalo_run_with(problem, config, observer),
        Algorithm::Mopso => baselines::mopso_run_with(problem, config, observer),
        Algorithm::Random => baselines::random_search_run_with(problem, config, observer),
    }
}


#[cfg(test)]
mod tests {
    use super::testkit::Toy;
    use super::*;

    fn small(seed: u64, iterations: usize) -> OptimizerConfig {
        OptimizerConfig::with_settings(
            OptimizerSettings { population: 12, iterations, archive_capacity: 20, ..Default::default() },
            seed,
        )
    }

    #[test]
    fn every_algorithm_is_deterministic_and_counts_its_budget() {
        let p = Toy::new();
        for alg in [Algorithm::Imodaom, Algorithm::Emoalo, Algorithm::Mopso, Algorithm::Random] {
            let cfg = small(42, 15);
            let a = run_algorithm(alg, &p, &cfg, &mut |_| {}).unwrap();
            let b = run_algorithm(alg, &p, &cfg, &mut |_| {}).unwrap();
            assert_eq!(a.archive, b.archive, "{alg:?}");
            assert_eq!(a.progress, b.progress);
            assert_eq!(a.evaluations, 12 * 16, "{alg:?}");
            assert_eq!(a.progress.len(), 16);
            assert!(a.archive.is_mutually_nondominated());
            for m in a.archive.members() {
                assert!(p.schema.contains(&m.genome), "{alg:?}: {:?}", m.genome);
                assert_eq!(p.evaluate(&m.genome).unwrap(), m.objectives);
            }
        }
    }

    #[test]
    fn zero_iterations_keep_nondominated_initial_population() {
        let p = Toy::new();
        for alg in [Algorithm::Imodaom, Algorithm::Emoalo] {
            let mut seen = Vec::new();
            let cfg = small(5, 0);
            let r = run_algorithm(alg, &p, &cfg, &mut |rec| seen.push(rec.clone())).unwrap();
            assert_eq!(r.evaluations, 12);
            assert_eq!(seen.len(), 1);
            assert_eq!(r.initial.len(), 12);
            let objs: Vec<Vec<f64>> = r.initial.iter().map(|i| i.objectives.clone()).collect();
            let mut expected: Vec<Vec<f64>> = Vec::new();
            for k in nondominated_filter(&objs) {
                if !expected.contains(&objs[k]) {
                    expected.push(objs[k].clone());
                }
            }
            let mut got = r.archive.objectives();
            expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
            got.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(got, expected, "{alg:?}");
        }
    }

    #[test]
    fn evaluation_errors_carry_context() {
        let cfg = small(1, 3);
        let err = run_algorithm(Algorithm::Random, &testkit::Failing, &cfg, &mut |_| {}).unwrap_err();
        assert!(matches!(err, MoeaError::Evaluation { .. }), "{err}");
        assert!(err.to_string().contains("boom"));
    }

    #[test]
    fn settings_validation() {
        let mut s = OptimizerSettings { population: 1, ..Default::default() };
        assert!(s.validate().is_err());
        s.population = 2;
        s.validate().unwrap();
        s.emoalo.immigrant_rate = 1.5;
        assert!(s.validate().is_err());
        assert_eq!(OptimizerSettings::default().budget(), 10050);
    }

    #[test]
    fn anneal_endpoints() {
        let a = Anneal::new(0.9, 0.4);
        assert_eq!(a.at(0.0), 0.9);
        assert_eq!(a.at(1.0), 0.4);
        assert!((a.at(0.5) - 0.65).abs() < 1e-15);
    }
}
