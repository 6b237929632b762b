//! Ant-lion optimizer with random-walk initialization around the anchor,
//! a two-stage elite/diversity schedule and integer mutation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::init::walk_endpoint;
use super::operators::{integer_mutation, pmx, random_cuts};
use super::runner::{spans, Driver};
use super::{Genome, MoeaError, OptimizerConfig, Problem, ProgressRecord, RunResult};

pub fn emoalo_run<P: Problem + ?Sized>(problem: &P, config: &OptimizerConfig) -> Result<RunResult, MoeaError> {
    emoalo_run_with(problem, config, &mut |_| {})
}

/// Shrink ratio of the ant-lion trap as the run progresses.
fn trap_ratio(frac: f64) -> f64 {
    let w = if frac > 0.95 {
        6
    } else if frac > 0.9 {
        5
    } else if frac > 0.75 {
        4
    } else if frac > 0.5 {
        3
    } else if frac > 0.1 {
        2
    } else {
        return 1.0;
    };
    1.0 + 10f64.powi(w) * frac
}

fn walk_around<R: Rng + ?Sized>(
    centre: &[f64],
    half_width: &[f64],
    bounds: &[(f64, f64)],
    steps: usize,
    rng: &mut R,
) -> Vec<f64> {
    let local: Vec<(f64, f64)> = centre
        .iter()
        .zip(half_width)
        .zip(bounds)
        .map(|((&c, &h), &(lo, hi))| ((c - h).max(lo), (c + h).min(hi)))
        .collect();
    walk_endpoint(&local, steps, rng)
}

pub(crate) fn emoalo_run_with<P: Problem + ?Sized>(
    problem: &P,
    config: &OptimizerConfig,
    observer: &mut dyn FnMut(&ProgressRecord),
) -> Result<RunResult, MoeaError> {
    let mut driver = Driver::new(problem, config, observer)?;
    let s = &config.settings;
    let e = &s.emoalo;
    let schema = problem.schema();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let span = spans(problem);
    let dims = schema.continuous.len();

    let mut anchor = problem.anchor().unwrap_or_else(|| Genome {
        continuous: schema.continuous.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect(),
        integers: schema.sample_integers(&mut rng),
        permutation: schema.sample_permutation(&mut rng),
    });
    schema.clamp(&mut anchor);
    let init_half: Vec<f64> = span.iter().map(|w| w * e.init_radius).collect();
    let mut genomes = vec![anchor.clone()];
    while genomes.len() < s.population {
        genomes.push(Genome {
            continuous: walk_around(&anchor.continuous, &init_half, &schema.continuous, e.walk_steps, &mut rng),
            integers: schema.sample_integers(&mut rng),
            permutation: schema.sample_permutation(&mut rng),
        });
    }
    driver.evaluate_generation(genomes, vec![Vec::new(); s.population])?;
    driver.record();

    for t in 1..=s.iterations {
        let frac = t as f64 / s.iterations as f64;
        let early = frac < e.stage_threshold;
        let widen = if early { 1.0 } else { e.late_widening };
        let amp = if early { e.elite_amplification } else { 1.0 };
        let ratio = trap_ratio(frac);
        let half: Vec<f64> = span.iter().map(|w| 0.5 * w / ratio * widen).collect();
        let elite = driver.archive.select_sparse(&mut rng).expect("archive is never empty after evaluation").clone();

        let mut genomes = Vec::with_capacity(s.population);
        for _ in 0..s.population {
            let antlion =
                driver.archive.select_sparse(&mut rng).expect("archive is never empty after evaluation").clone();
            let ra = walk_around(&antlion.genome.continuous, &half, &schema.continuous, e.walk_steps, &mut rng);
            let re = walk_around(&elite.genome.continuous, &half, &schema.continuous, e.walk_steps, &mut rng);
            let continuous = (0..dims).map(|g| (ra[g] + amp * re[g]) / (1.0 + amp)).collect();
            let p_elite = amp / (1.0 + amp);
            let integers = antlion
                .genome
                .integers
                .iter()
                .zip(&elite.genome.integers)
                .map(|(&a, &b)| if rng.gen::<f64>() < p_elite { b } else { a })
                .collect();
            let permutation = match (&antlion.genome.permutation, &elite.genome.permutation) {
                (Some(a), Some(b)) => {
                    let (c1, c2) = random_cuts(a.len(), &mut rng);
                    Some(pmx(a, b, c1, c2)?)
                }
                (p, _) => p.clone(),
            };
            let mut ant = Genome { continuous, integers, permutation };
            integer_mutation(&mut ant, schema, e.mutation_rate, &mut rng);
            if !early && rng.gen::<f64>() < e.immigrant_rate {
                ant = schema.sample(&mut rng);
            }
            schema.clamp(&mut ant);
            genomes.push(ant);
        }
        driver.evaluate_generation(genomes, vec![Vec::new(); s.population])?;
        driver.record();
    }
    Ok(driver.finish())
}
