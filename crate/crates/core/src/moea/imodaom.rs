//! Dragonfly swarm with orthogonal-design initialization and a multi-gravity
//! hybrid update.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::init::orthogonal_init;
use super::operators::{apply_step, gravity_discrete, gravity_step, Attractors, GravityWeights};
use super::runner::{spans, update_personal_best, Driver};
use super::{MoeaError, OptimizerConfig, Problem, ProgressRecord, RunResult};

pub fn imodaom_run<P: Problem + ?Sized>(problem: &P, config: &OptimizerConfig) -> Result<RunResult, MoeaError> {
    imodaom_run_with(problem, config, &mut |_| {})
}

pub(crate) fn imodaom_run_with<P: Problem + ?Sized>(
    problem: &P,
    config: &OptimizerConfig,
    observer: &mut dyn FnMut(&ProgressRecord),
) -> Result<RunResult, MoeaError> {
    let mut driver = Driver::new(problem, config, observer)?;
    let s = &config.settings;
    let schema = problem.schema();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let dims = schema.continuous.len();
    let span = spans(problem);
    let max_step: Vec<f64> = span.iter().map(|w| w * s.max_step_fraction).collect();

    let genomes = orthogonal_init(schema, s.population, s.orthogonal_levels, &mut rng)?;
    let mut pop = driver.evaluate_generation(genomes, vec![vec![0.0; dims]; s.population])?;
    let mut pbest = pop.clone();
    driver.record();

    let sched = &s.dragonfly;
    for t in 1..=s.iterations {
        let frac = t as f64 / s.iterations as f64;
        let (ws, wa, wc, we) = (
            sched.separation.at(frac),
            sched.alignment.at(frac),
            sched.cohesion.at(frac),
            sched.enemy.at(frac),
        );
        let weights = GravityWeights {
            inertia: sched.inertia.at(frac),
            food: sched.food.at(frac),
            personal: s.gravity.personal,
            random_elite: s.gravity.random_elite,
        };
        let radius = sched.neighbourhood.at(frac);
        let levy_scale = sched.levy_scale;
        let food = driver.archive.select_sparse(&mut rng).expect("archive is never empty after evaluation").clone();
        let enemy = driver.archive.select_crowded(&mut rng).expect("archive is never empty after evaluation").clone();

        let unit: Vec<Vec<f64>> = pop
            .iter()
            .map(|ind| {
                ind.genome
                    .continuous
                    .iter()
                    .zip(&schema.continuous)
                    .map(|(&v, &(lo, hi))| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })
                    .collect()
            })
            .collect();

        let mut genomes = Vec::with_capacity(pop.len());
        let mut steps = Vec::with_capacity(pop.len());
        for i in 0..pop.len() {
            let elite = driver.archive.select_uniform(&mut rng).expect("archive is never empty after evaluation").clone();
            let x = &pop[i];
            let att = Attractors { food: &food.genome, personal: &pbest[i].genome, random_elite: &elite.genome };
            let mut step = gravity_step(&x.genome, &x.step, &att, &weights, &mut rng);

            let neighbours: Vec<usize> = (0..pop.len())
                .filter(|&j| j != i && rms_distance(&unit[i], &unit[j]) <= radius)
                .collect();
            for g in 0..dims {
                let xi = x.genome.continuous[g];
                let mut swarm = we * (xi - enemy.genome.continuous[g]);
                if !neighbours.is_empty() {
                    let n = neighbours.len() as f64;
                    let sep: f64 = neighbours.iter().map(|&j| xi - pop[j].genome.continuous[g]).sum();
                    let align = neighbours.iter().map(|&j| pop[j].step[g]).sum::<f64>() / n;
                    let coh = neighbours.iter().map(|&j| pop[j].genome.continuous[g]).sum::<f64>() / n - xi;
                    swarm += ws * sep + wa * align + wc * coh;
                } else {
                    swarm += levy_scale * span[g] * levy(&mut rng);
                }
                step[g] = (step[g] + swarm).clamp(-max_step[g], max_step[g]);
            }

            let mut child = x.genome.clone();
            apply_step(&mut child, &step, schema);
            gravity_discrete(&mut child, &att, &weights, &mut rng)?;
            genomes.push(child);
            steps.push(step);
        }
        pop = driver.evaluate_generation(genomes, steps)?;
        for (best, ind) in pbest.iter_mut().zip(&pop) {
            update_personal_best(best, ind, &mut rng);
        }
        driver.record();
    }
    Ok(driver.finish())
}

/// Scale of Mantegna's algorithm for a stability index of 1.5.
const MANTEGNA_SIGMA: f64 = 0.696_574_502_557_696_7;

/// Lévy-stable step (index 1.5) by Mantegna's ratio of normals.
fn levy<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample::<f64, _>(StandardNormal) * MANTEGNA_SIGMA;
    let v: f64 = rng.sample(StandardNormal);
    u / v.abs().powf(1.0 / 1.5)
}

fn rms_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64).sqrt()
}
