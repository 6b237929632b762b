use rand::Rng;

use super::{Genome, GenomeSchema, MoeaError};

/// Partially mapped crossover. The child copies `a[cut1..cut2]` and takes
/// the rest from `b`, resolving conflicts through the segment mapping.
pub fn pmx<T: Copy + PartialEq>(a: &[T], b: &[T], cut1: usize, cut2: usize) -> Result<Vec<T>, MoeaError> {
    let m = a.len();
    if b.len() != m {
        return Err(MoeaError::DimensionMismatch(m, b.len()));
    }
    if cut1 > cut2 || cut2 > m {
        return Err(MoeaError::Config(format!("crossover cuts ({cut1}, {cut2}) invalid for length {m}")));
    }
    let pos_in_b = |v: T| b.iter().position(|&x| x == v);
    let mut child: Vec<Option<T>> = vec![None; m];
    for i in cut1..cut2 {
        child[i] = Some(a[i]);
    }
    for i in cut1..cut2 {
        let v = b[i];
        if a[cut1..cut2].contains(&v) {
            continue;
        }
        let mut pos = i;
        loop {
            let w = a[pos];
            pos = pos_in_b(w).ok_or_else(|| MoeaError::Config("parents are not permutations of each other".into()))?;
            if !(cut1..cut2).contains(&pos) {
                break;
            }
        }
        child[pos] = Some(v);
    }
    Ok(child.into_iter().zip(b).map(|(c, &bv)| c.unwrap_or(bv)).collect())
}

/// Random cut points `0 <= c1 < c2 <= m` (or `(0, 0)` for an empty permutation).
pub(crate) fn random_cuts<R: Rng + ?Sized>(m: usize, rng: &mut R) -> (usize, usize) {
    if m == 0 {
        return (0, 0);
    }
    let c1 = rng.gen_range(0..m);
    let c2 = rng.gen_range(c1 + 1..=m);
    (c1, c2)
}

/// Guides pulling an individual in the gravity update.
#[derive(Clone, Copy, Debug)]
pub struct Attractors<'a> {
    pub food: &'a Genome,
    pub personal: &'a Genome,
    pub random_elite: &'a Genome,
}

/// Pull strengths of the gravity update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GravityWeights {
    pub inertia: f64,
    pub food: f64,
    pub personal: f64,
    pub random_elite: f64,
}

/// New continuous step: `inertia·step + Σ w_a r_a (a - x)` with `r_a` in (0, 1].
pub fn gravity_step<R: Rng + ?Sized>(
    x: &Genome,
    step: &[f64],
    att: &Attractors,
    w: &GravityWeights,
    rng: &mut R,
) -> Vec<f64> {
    (0..x.continuous.len())
        .map(|i| {
            let xi = x.continuous[i];
            let mut s = w.inertia * step.get(i).copied().unwrap_or(0.0);
            for (wa, g) in [(w.food, att.food), (w.personal, att.personal), (w.random_elite, att.random_elite)] {
                let r = 1.0 - rng.gen::<f64>();
                s += wa * r * (g.continuous[i] - xi);
            }
            s
        })
        .collect()
}

/// Integer genes adopt an attractor's value with probability `w_a / (1 + Σw)`
/// each and are otherwise kept; the permutation takes a PMX child with the
/// food source with probability `min(1, w_food)`.
pub fn gravity_discrete<R: Rng + ?Sized>(x: &mut Genome, att: &Attractors, w: &GravityWeights, rng: &mut R) -> Result<(), MoeaError> {
    let pulls = [(w.food, att.food), (w.personal, att.personal), (w.random_elite, att.random_elite)];
    let total = 1.0 + pulls.iter().map(|p| p.0.max(0.0)).sum::<f64>();
    for i in 0..x.integers.len() {
        let mut u = rng.gen::<f64>();
        for (wa, g) in pulls {
            let p = wa.max(0.0) / total;
            if u < p {
                x.integers[i] = g.integers[i];
                break;
            }
            u -= p;
        }
    }
    if let (Some(perm), Some(food)) = (x.permutation.as_mut(), att.food.permutation.as_ref()) {
        if rng.gen::<f64>() < w.food.min(1.0) {
            let (c1, c2) = random_cuts(perm.len(), rng);
            *perm = pmx(perm, food, c1, c2)?;
        }
    }
    Ok(())
}

/// Adds `step` to the continuous genes and clamps into the schema.
pub fn apply_step(x: &mut Genome, step: &[f64], schema: &GenomeSchema) {
    for ((v, s), &(lo, hi)) in x.continuous.iter_mut().zip(step).zip(&schema.continuous) {
        *v = (*v + s).clamp(lo, hi);
    }
}

/// Weighted pull of an individual toward its food source, personal best and a
/// random elite. Returns the moved genome and its new step.
pub fn multi_gravity_update<R: Rng + ?Sized>(
    x: &Genome,
    step: &[f64],
    att: &Attractors,
    w: &GravityWeights,
    schema: &GenomeSchema,
    rng: &mut R,
) -> Result<(Genome, Vec<f64>), MoeaError> {
    let new_step = gravity_step(x, step, att, w, rng);
    let mut out = x.clone();
    apply_step(&mut out, &new_step, schema);
    gravity_discrete(&mut out, att, w, rng)?;
    Ok((out, new_step))
}

/// Resamples each integer gene uniformly within its range with probability `rate`.
pub fn integer_mutation<R: Rng + ?Sized>(g: &mut Genome, schema: &GenomeSchema, rate: f64, rng: &mut R) {
    for (v, &(lo, hi)) in g.integers.iter_mut().zip(&schema.integers) {
        if rng.gen::<f64>() < rate {
            *v = rng.gen_range(lo..=hi);
        }
    }
}
