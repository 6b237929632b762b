use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::MoeaError;

/// Mixed decision vector: bounded reals, bounded integers and an optional
/// permutation of `0..m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Genome {
    pub continuous: Vec<f64>,
    pub integers: Vec<i64>,
    pub permutation: Option<Vec<usize>>,
}

impl Genome {
    /// All genes flattened in column order: continuous, integers, permutation.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = self.continuous.clone();
        out.extend(self.integers.iter().map(|&v| v as f64));
        if let Some(p) = &self.permutation {
            out.extend(p.iter().map(|&v| v as f64));
        }
        out
    }
}

/// Per-gene domains of a [`Genome`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenomeSchema {
    pub continuous: Vec<(f64, f64)>,
    /// Inclusive integer ranges.
    pub integers: Vec<(i64, i64)>,
    pub permutation_len: Option<usize>,
}

impl GenomeSchema {
    pub fn validate(&self) -> Result<(), MoeaError> {
        for (i, &(lo, hi)) in self.continuous.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(MoeaError::Config(format!("continuous gene {i} has bounds ({lo}, {hi})")));
            }
        }
        for (i, &(lo, hi)) in self.integers.iter().enumerate() {
            if lo > hi {
                return Err(MoeaError::Config(format!("integer gene {i} has range ({lo}, {hi})")));
            }
        }
        Ok(())
    }

    pub fn gene_count(&self) -> usize {
        self.continuous.len() + self.integers.len() + self.permutation_len.unwrap_or(0)
    }

    /// True when every gene respects its domain.
    pub fn contains(&self, g: &Genome) -> bool {
        g.continuous.len() == self.continuous.len()
            && g.continuous.iter().zip(&self.continuous).all(|(&v, &(lo, hi))| v >= lo && v <= hi)
            && g.integers.len() == self.integers.len()
            && g.integers.iter().zip(&self.integers).all(|(&v, &(lo, hi))| v >= lo && v <= hi)
            && match (&g.permutation, self.permutation_len) {
                (None, None) => true,
                (Some(p), Some(m)) => is_permutation(p, m),
                _ => false,
            }
    }

    pub fn clamp(&self, g: &mut Genome) {
        for (v, &(lo, hi)) in g.continuous.iter_mut().zip(&self.continuous) {
            *v = v.clamp(lo, hi);
        }
        for (v, &(lo, hi)) in g.integers.iter_mut().zip(&self.integers) {
            *v = (*v).clamp(lo, hi);
        }
    }

    /// Uniform sample over the whole domain.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Genome {
        let continuous = self
            .continuous
            .iter()
            .map(|&(lo, hi)| if hi > lo { rng.gen_range(lo..=hi) } else { lo })
            .collect();
        Genome {
            continuous,
            integers: self.sample_integers(rng),
            permutation: self.sample_permutation(rng),
        }
    }

    pub(crate) fn sample_integers<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<i64> {
        self.integers.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect()
    }

    pub(crate) fn sample_permutation<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<usize>> {
        self.permutation_len.map(|m| {
            let mut p: Vec<usize> = (0..m).collect();
            p.shuffle(rng);
            p
        })
    }
}

pub fn is_permutation(p: &[usize], m: usize) -> bool {
    if p.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &v in p {
        if v >= m || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Objective-evaluation failure reported by a [`Problem`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct EvaluationError(pub String);

/// A minimization problem over a mixed genome.
///
/// `evaluate` must be pure: the optimizers call it concurrently and rely on
/// identical genomes producing identical objectives.
pub trait Problem: Sync {
    fn schema(&self) -> &GenomeSchema;

    fn objective_count(&self) -> usize {
        3
    }

    fn evaluate(&self, genome: &Genome) -> Result<Vec<f64>, EvaluationError>;

    /// Projects a genome onto the feasible set. Called after every variation.
    fn repair(&self, _genome: &mut Genome) {}

    /// Starting configuration used by random-walk initialization.
    fn anchor(&self) -> Option<Genome> {
        None
    }
}
