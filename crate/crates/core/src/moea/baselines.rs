//! Comparison optimizers: uniform random search and a global-best MOPSO.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operators::{pmx, random_cuts};
use super::runner::{update_personal_best, Driver};
use super::{Archive, Genome, MoeaError, OptimizerConfig, OptimizerSettings, Problem, ProgressRecord, RunResult};

/// Uniform sampling of `samples` genomes into an archive.
pub fn random_search<P: Problem + ?Sized>(
    problem: &P,
    samples: usize,
    archive_capacity: usize,
    seed: u64,
) -> Result<Archive, MoeaError> {
    let settings = OptimizerSettings {
        population: samples.max(2),
        iterations: 0,
        archive_capacity,
        ..Default::default()
    };
    let mut observer = |_: &ProgressRecord| {};
    let mut driver = Driver::new(problem, &OptimizerConfig::with_settings(settings, seed), &mut observer)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let genomes: Vec<Genome> = (0..samples).map(|_| problem.schema().sample(&mut rng)).collect();
    driver.evaluate_generation(genomes, vec![Vec::new(); samples])?;
    Ok(driver.finish().archive)
}

/// Random search spending the population budget, one generation-sized batch per iteration.
pub fn random_search_run<P: Problem + ?Sized>(problem: &P, config: &OptimizerConfig) -> Result<RunResult, MoeaError> {
    random_search_run_with(problem, config, &mut |_| {})
}

pub(crate) fn random_search_run_with<P: Problem + ?Sized>(
    problem: &P,
    config: &OptimizerConfig,
    observer: &mut dyn FnMut(&ProgressRecord),
) -> Result<RunResult, MoeaError> {
    let mut driver = Driver::new(problem, config, observer)?;
    let s = &config.settings;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..=s.iterations {
        let genomes: Vec<Genome> = (0..s.population).map(|_| problem.schema().sample(&mut rng)).collect();
        driver.evaluate_generation(genomes, vec![Vec::new(); s.population])?;
        driver.record();
    }
    Ok(driver.finish())
}

pub fn mopso_run<P: Problem + ?Sized>(problem: &P, config: &OptimizerConfig) -> Result<RunResult, MoeaError> {
    mopso_run_with(problem, config, &mut |_| {})
}

/// Particle state: continuous genes followed by relaxed integer genes.
struct Particle {
    x: Vec<f64>,
    v: Vec<f64>,
    perm: Option<Vec<usize>>,
}

pub(crate) fn mopso_run_with<P: Problem + ?Sized>(
    problem: &P,
    config: &OptimizerConfig,
    observer: &mut dyn FnMut(&ProgressRecord),
) -> Result<RunResult, MoeaError> {
    let mut driver = Driver::new(problem, config, observer)?;
    let s = &config.settings;
    let m = &s.mopso;
    let schema = problem.schema();
    let nc = schema.continuous.len();
    let bounds: Vec<(f64, f64)> = schema
        .continuous
        .iter()
        .copied()
        .chain(schema.integers.iter().map(|&(lo, hi)| (lo as f64, hi as f64)))
        .collect();
    let vmax: Vec<f64> = bounds.iter().map(|&(lo, hi)| (hi - lo) * s.max_step_fraction).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let relax = |g: &Genome| -> Vec<f64> {
        g.continuous.iter().copied().chain(g.integers.iter().map(|&v| v as f64)).collect()
    };
    let to_genome = |p: &Particle| -> Genome {
        Genome {
            continuous: p.x[..nc].to_vec(),
            integers: p.x[nc..]
                .iter()
                .zip(&schema.integers)
                .map(|(&v, &(lo, hi))| (v.round() as i64).clamp(lo, hi))
                .collect(),
            permutation: p.perm.clone(),
        }
    };

    let mut swarm: Vec<Particle> = (0..s.population)
        .map(|_| {
            let g = schema.sample(&mut rng);
            Particle { x: relax(&g), v: vec![0.0; bounds.len()], perm: g.permutation }
        })
        .collect();
    let genomes: Vec<Genome> = swarm.iter().map(to_genome).collect();
    let mut pbest = driver.evaluate_generation(genomes, vec![Vec::new(); s.population])?;
    for (p, ind) in swarm.iter_mut().zip(&pbest) {
        p.x[..nc].copy_from_slice(&ind.genome.continuous);
        p.perm = ind.genome.permutation.clone();
    }
    driver.record();

    for _ in 1..=s.iterations {
        for (i, p) in swarm.iter_mut().enumerate() {
            let leader = driver.archive.select_sparse(&mut rng).expect("archive is never empty after evaluation");
            let lx = relax(&leader.genome);
            let px = relax(&pbest[i].genome);
            for k in 0..bounds.len() {
                let r1 = rng.gen::<f64>();
                let r2 = rng.gen::<f64>();
                let v = m.inertia * p.v[k] + m.personal * r1 * (px[k] - p.x[k]) + m.social * r2 * (lx[k] - p.x[k]);
                p.v[k] = v.clamp(-vmax[k], vmax[k]);
                p.x[k] = (p.x[k] + p.v[k]).clamp(bounds[k].0, bounds[k].1);
            }
            if let (Some(own), Some(lead)) = (p.perm.as_ref(), leader.genome.permutation.as_ref()) {
                let (c1, c2) = random_cuts(own.len(), &mut rng);
                p.perm = Some(pmx(lead, own, c1, c2)?);
            }
        }
        let genomes: Vec<Genome> = swarm.iter().map(to_genome).collect();
        let pop = driver.evaluate_generation(genomes, vec![Vec::new(); s.population])?;
        for ((best, ind), p) in pbest.iter_mut().zip(&pop).zip(swarm.iter_mut()) {
            // repair may have moved the genome; keep the particle on it
            p.x[..nc].copy_from_slice(&ind.genome.continuous);
            p.perm = ind.genome.permutation.clone();
            update_personal_best(best, ind, &mut rng);
        }
        driver.record();
    }
    Ok(driver.finish())
}
