use rand::seq::SliceRandom;
use rand::Rng;

use super::{Genome, GenomeSchema, MoeaError};

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Level indices (population × continuous genes) of a balanced design.
///
/// When `levels` is prime and the population is a multiple of `levels²`,
/// the first `levels + 1` columns come from the Bose orthogonal array
/// OA(L², L + 1, L, 2), so every pair of those columns sees every level
/// pair equally often. Remaining columns are independently shuffled
/// balanced columns.
pub fn orthogonal_levels<R: Rng + ?Sized>(
    genes: usize,
    population: usize,
    levels: usize,
    rng: &mut R,
) -> Result<Vec<Vec<usize>>, MoeaError> {
    if levels < 2 {
        return Err(MoeaError::Config("orthogonal initialization needs at least 2 levels".into()));
    }
    if population < levels {
        return Err(MoeaError::Config(format!(
            "population {population} is smaller than the number of levels {levels}"
        )));
    }
    let mut design = vec![vec![0usize; genes]; population];
    let mut next_col = 0;
    if is_prime(levels) && population % (levels * levels) == 0 {
        let oa_cols = genes.min(levels + 1);
        let mut rows: Vec<(usize, usize)> = (0..population)
            .map(|r| {
                let k = r % (levels * levels);
                (k / levels, k % levels)
            })
            .collect();
        rows.shuffle(rng);
        for (r, &(i, j)) in rows.iter().enumerate() {
            for c in 0..oa_cols {
                design[r][c] = match c {
                    0 => j,
                    _ => (i + (c - 1) * j) % levels,
                };
            }
        }
        next_col = oa_cols;
    }
    for c in next_col..genes {
        let mut col: Vec<usize> = (0..population).map(|r| r % levels).collect();
        col.shuffle(rng);
        for (r, v) in col.into_iter().enumerate() {
            design[r][c] = v;
        }
    }
    Ok(design)
}

/// Initial population from an orthogonal design over the continuous genes.
/// Level `l` of a gene maps to the midpoint of the `l`-th of `levels` equal
/// slices of its range. Integers and permutations are drawn uniformly.
pub fn orthogonal_init<R: Rng + ?Sized>(
    schema: &GenomeSchema,
    population: usize,
    levels: usize,
    rng: &mut R,
) -> Result<Vec<Genome>, MoeaError> {
    schema.validate()?;
    let design = orthogonal_levels(schema.continuous.len(), population, levels, rng)?;
    Ok(design
        .into_iter()
        .map(|row| {
            let continuous = row
                .iter()
                .zip(&schema.continuous)
                .map(|(&l, &(lo, hi))| lo + (l as f64 + 0.5) * (hi - lo) / levels as f64)
                .collect();
            Genome {
                continuous,
                integers: schema.sample_integers(rng),
                permutation: schema.sample_permutation(rng),
            }
        })
        .collect())
}

/// Cumulative ±1 walk of `steps` steps per gene, min–max normalized into
/// `bounds`. Returns the visited points, one per step. A walk that never
/// moves its range (only possible for zero steps) maps to the midpoint.
pub fn random_walk<R: Rng + ?Sized>(bounds: &[(f64, f64)], steps: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut path = vec![Vec::with_capacity(bounds.len()); steps];
    for &(lo, hi) in bounds {
        let mut acc = 0.0f64;
        let raw: Vec<f64> = (0..steps)
            .map(|_| {
                acc += if rng.gen::<f64>() < 0.5 { 1.0 } else { -1.0 };
                acc
            })
            .collect();
        let (mn, mx) = raw.iter().fold((0.0f64, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        for (t, &v) in raw.iter().enumerate() {
            let x = if mx > mn { lo + (v - mn) / (mx - mn) * (hi - lo) } else { 0.5 * (lo + hi) };
            path[t].push(x);
        }
    }
    path
}

/// Final position of a walk, or the bound midpoints for an empty walk.
pub(crate) fn walk_endpoint<R: Rng + ?Sized>(bounds: &[(f64, f64)], steps: usize, rng: &mut R) -> Vec<f64> {
    random_walk(bounds, steps, rng)
        .pop()
        .unwrap_or_else(|| bounds.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect())
}
