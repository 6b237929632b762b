use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Archive, Genome, Individual, MoeaError, OptimizerConfig, Problem};
use crate::analysis::normalized_hypervolume;

/// Snapshot emitted after the initial population and after every iteration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProgressRecord {
    pub iteration: usize,
    pub archive_size: usize,
    pub evaluations: usize,
    /// Per-objective minimum over the archive.
    pub best: Vec<f64>,
    /// Archive hypervolume normalized to the envelope of every objective
    /// vector evaluated so far (reference pushed 10% past the worst).
    pub hypervolume: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub archive: Archive,
    pub evaluations: usize,
    pub progress: Vec<ProgressRecord>,
    /// Evaluated initial population, in generation order.
    pub initial: Vec<Individual>,
}

pub(crate) struct Driver<'a, P: Problem + ?Sized> {
    pub problem: &'a P,
    pub archive: Archive,
    evaluations: usize,
    iteration: usize,
    progress: Vec<ProgressRecord>,
    initial: Vec<Individual>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    observer: &'a mut dyn FnMut(&ProgressRecord),
}

impl<'a, P: Problem + ?Sized> Driver<'a, P> {
    pub fn new(
        problem: &'a P,
        config: &OptimizerConfig,
        observer: &'a mut dyn FnMut(&ProgressRecord),
    ) -> Result<Self, MoeaError> {
        config.settings.validate()?;
        problem.schema().validate()?;
        let s = &config.settings;
        let m = problem.objective_count();
        Ok(Self {
            problem,
            archive: Archive::new(s.archive_capacity, s.hypercube_segments)?,
            evaluations: 0,
            iteration: 0,
            progress: Vec::new(),
            initial: Vec::new(),
            lo: vec![f64::INFINITY; m],
            hi: vec![f64::NEG_INFINITY; m],
            observer,
        })
    }

    /// Evaluates a generation concurrently; results keep population order.
    pub fn evaluate(&mut self, genomes: &[Genome]) -> Result<Vec<Vec<f64>>, MoeaError> {
        let problem = self.problem;
        let raw: Vec<_> = genomes.par_iter().map(|g| problem.evaluate(g)).collect();
        let m = problem.objective_count();
        let mut out = Vec::with_capacity(raw.len());
        for (index, r) in raw.into_iter().enumerate() {
            let fail = |message: String| MoeaError::Evaluation { iteration: self.iteration, index, message };
            let obj = r.map_err(|e| fail(e.0))?;
            if obj.len() != m {
                return Err(fail(format!("expected {m} objectives, got {}", obj.len())));
            }
            if obj.iter().any(|v| !v.is_finite()) {
                return Err(fail(format!("non-finite objectives {obj:?}")));
            }
            for (k, &v) in obj.iter().enumerate() {
                self.lo[k] = self.lo[k].min(v);
                self.hi[k] = self.hi[k].max(v);
            }
            out.push(obj);
        }
        self.evaluations += out.len();
        Ok(out)
    }

    /// Repairs, evaluates and archives a generation; returns the individuals.
    pub fn evaluate_generation(
        &mut self,
        mut genomes: Vec<Genome>,
        steps: Vec<Vec<f64>>,
    ) -> Result<Vec<Individual>, MoeaError> {
        for g in &mut genomes {
            self.problem.repair(g);
        }
        let objectives = self.evaluate(&genomes)?;
        let pop: Vec<Individual> = genomes
            .into_iter()
            .zip(objectives)
            .zip(steps)
            .map(|((genome, objectives), step)| Individual { genome, objectives, step })
            .collect();
        for ind in &pop {
            self.archive.insert(ind.clone());
        }
        if self.iteration == 0 && self.initial.is_empty() {
            self.initial = pop.clone();
        }
        Ok(pop)
    }

    /// Closes the current iteration and emits its progress record.
    pub fn record(&mut self) {
        let front = self.archive.objectives();
        let m = self.lo.len();
        let best = (0..m).map(|k| front.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min)).collect();
        let reference: Vec<f64> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| if h > l { h + 0.1 * (h - l) } else { h + 1.0 })
            .collect();
        let hypervolume = normalized_hypervolume(&front, &self.lo, &reference).map_or(0.0, |h| h.value);
        let rec = ProgressRecord {
            iteration: self.iteration,
            archive_size: self.archive.len(),
            evaluations: self.evaluations,
            best,
            hypervolume,
        };
        (self.observer)(&rec);
        self.progress.push(rec);
        self.iteration += 1;
    }

    pub fn finish(self) -> RunResult {
        RunResult { archive: self.archive, evaluations: self.evaluations, progress: self.progress, initial: self.initial }
    }
}

/// Per-gene range of the continuous genes.
pub(crate) fn spans(problem: &(impl Problem + ?Sized)) -> Vec<f64> {
    problem.schema().continuous.iter().map(|&(lo, hi)| hi - lo).collect()
}

/// Pareto-based personal-best update: a dominating candidate replaces the
/// memory, an incomparable one does so with even odds.
pub(crate) fn update_personal_best<R: rand::Rng + ?Sized>(best: &mut Individual, candidate: &Individual, rng: &mut R) {
    use super::pareto::dominates_unchecked;
    if dominates_unchecked(&candidate.objectives, &best.objectives) {
        *best = candidate.clone();
    } else if !dominates_unchecked(&best.objectives, &candidate.objectives) && rng.gen::<bool>() {
        *best = candidate.clone();
    }
}
