use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Genome, MoeaError};

/// Pareto dominance under minimization.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool, MoeaError> {
    if a.len() != b.len() {
        return Err(MoeaError::DimensionMismatch(a.len(), b.len()));
    }
    Ok(dominates_unchecked(a, b))
}

pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Indices of the points not dominated by any other point, in input order.
///
/// Points are swept in lexicographic order, so a point can only be dominated
/// by something already on the running front.
pub fn nondominated_filter<T: AsRef<[f64]>>(points: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| lexicographic(points[i].as_ref(), points[j].as_ref()));
    let mut front: Vec<usize> = Vec::new();
    for i in order {
        let p = points[i].as_ref();
        if !front.iter().any(|&f| dominates_unchecked(points[f].as_ref(), p)) {
            front.push(i);
        }
    }
    front.sort_unstable();
    front
}

fn lexicographic(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// An evaluated genome with its velocity-like step over continuous genes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genome: Genome,
    pub objectives: Vec<f64>,
    pub step: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
struct Member {
    individual: Individual,
    seq: u64,
}

/// Bounded external archive of mutually nondominated individuals.
///
/// Crowding is measured by counting members per cell of a fixed grid laid
/// over the archive's objective bounding box.
#[derive(Clone, Debug, PartialEq)]
pub struct Archive {
    capacity: usize,
    segments: usize,
    members: Vec<Member>,
    next_seq: u64,
}

impl Archive {
    pub fn new(capacity: usize, segments: usize) -> Result<Self, MoeaError> {
        if capacity == 0 {
            return Err(MoeaError::Config("archive capacity must be positive".into()));
        }
        if segments == 0 {
            return Err(MoeaError::Config("hypercube segments must be positive".into()));
        }
        Ok(Self { capacity, segments, members: Vec::new(), next_seq: 0 })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = &Individual> {
        self.members.iter().map(|m| &m.individual)
    }

    pub fn get(&self, i: usize) -> &Individual {
        &self.members[i].individual
    }

    pub fn objectives(&self) -> Vec<Vec<f64>> {
        self.members.iter().map(|m| m.individual.objectives.clone()).collect()
    }

    /// Offers an individual; returns whether it was admitted.
    ///
    /// Dominated entrants and exact objective duplicates are rejected, members
    /// the entrant dominates are evicted, and overflow removes the member in
    /// the most crowded cell (ties: larger f1, then f2, ..., then oldest).
    pub fn insert(&mut self, individual: Individual) -> bool {
        let obj = &individual.objectives;
        if self
            .members
            .iter()
            .any(|m| m.individual.objectives == *obj || dominates_unchecked(&m.individual.objectives, obj))
        {
            return false;
        }
        self.members.retain(|m| !dominates_unchecked(obj, &m.individual.objectives));
        self.members.push(Member { individual, seq: self.next_seq });
        self.next_seq += 1;
        while self.members.len() > self.capacity {
            let victim = self.most_crowded();
            self.members.remove(victim);
        }
        true
    }

    /// Members sharing each member's grid cell (including itself).
    pub fn cell_counts(&self) -> Vec<usize> {
        let keys = self.cell_keys();
        let mut counts: HashMap<&[usize], usize> = HashMap::new();
        for k in &keys {
            *counts.entry(k.as_slice()).or_default() += 1;
        }
        keys.iter().map(|k| counts[k.as_slice()]).collect()
    }

    fn cell_keys(&self) -> Vec<Vec<usize>> {
        let Some(first) = self.members.first() else { return Vec::new() };
        let dim = first.individual.objectives.len();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for m in &self.members {
            for (k, &v) in m.individual.objectives.iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        let segs = self.segments;
        self.members
            .iter()
            .map(|m| {
                m.individual
                    .objectives
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| {
                        let span = hi[k] - lo[k];
                        if span > 0.0 {
                            (((v - lo[k]) / span * segs as f64) as usize).min(segs - 1)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn most_crowded(&self) -> usize {
        let counts = self.cell_counts();
        let mut best = 0;
        for i in 1..self.members.len() {
            let (a, b) = (&self.members[i], &self.members[best]);
            let ord = counts[i].cmp(&counts[best]).then_with(|| {
                // larger objective values lose first; then the older member
                lexicographic(&a.individual.objectives, &b.individual.objectives)
                    .then_with(|| b.seq.cmp(&a.seq))
            });
            if ord == std::cmp::Ordering::Greater {
                best = i;
            }
        }
        best
    }

    /// Roulette pick favouring sparse cells (food source / leader / antlion).
    pub fn select_sparse<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<&Individual> {
        let weights: Vec<f64> = self.cell_counts().iter().map(|&c| 1.0 / c as f64).collect();
        roulette(&weights, rng).map(|i| self.get(i))
    }

    /// Roulette pick favouring crowded cells (enemy).
    pub fn select_crowded<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<&Individual> {
        let weights: Vec<f64> = self.cell_counts().iter().map(|&c| c as f64).collect();
        roulette(&weights, rng).map(|i| self.get(i))
    }

    pub fn select_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<&Individual> {
        if self.members.is_empty() {
            return None;
        }
        Some(self.get(rng.gen_range(0..self.members.len())))
    }

    /// True when no member dominates another.
    pub fn is_mutually_nondominated(&self) -> bool {
        self.members.iter().all(|a| {
            self.members
                .iter()
                .all(|b| !dominates_unchecked(&a.individual.objectives, &b.individual.objectives))
        })
    }
}

pub(crate) fn roulette<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if weights.is_empty() || !(total > 0.0) {
        return None;
    }
    let mut u = rng.gen::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return Some(i);
        }
        u -= w;
    }
    Some(weights.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ind(obj: &[f64]) -> Individual {
        Individual {
            genome: Genome { continuous: vec![], integers: vec![], permutation: None },
            objectives: obj.to_vec(),
            step: vec![],
        }
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[1.0, 2.0, 3.0], &[2.0, 2.0, 3.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap());
        assert!(!dominates(&[1.0, 5.0], &[2.0, 4.0]).unwrap());
        assert!(!dominates(&[2.0, 4.0], &[1.0, 5.0]).unwrap());
        assert!(matches!(dominates(&[1.0], &[1.0, 2.0]), Err(MoeaError::DimensionMismatch(1, 2))));
    }

    #[test]
    fn filter_examples() {
        assert_eq!(nondominated_filter(&[vec![1.0, 1.0]]), vec![0]);
        let pts = vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(nondominated_filter(&pts), vec![0, 1]);
        let dup = vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![0.5, 3.0]];
        assert_eq!(nondominated_filter(&dup), vec![0, 1, 2]);
        assert!(nondominated_filter::<Vec<f64>>(&[]).is_empty());
    }

    #[test]
    fn archive_rejects_dominated_and_evicts_dominated() {
        let mut a = Archive::new(10, 10).unwrap();
        assert!(a.insert(ind(&[1.0, 5.0])));
        assert!(a.insert(ind(&[5.0, 1.0])));
        assert!(!a.insert(ind(&[6.0, 6.0])));
        assert!(!a.insert(ind(&[1.0, 5.0])));
        assert_eq!(a.len(), 2);
        assert!(a.insert(ind(&[0.0, 0.0])));
        assert_eq!(a.len(), 1);
        assert_eq!(a.get(0).objectives, vec![0.0, 0.0]);
    }

    #[test]
    fn capacity_one_keeps_smaller_f1() {
        // two incomparable points sit in different cells (count 1 each); the
        // tie goes against the larger f1
        let mut a = Archive::new(1, 10).unwrap();
        a.insert(ind(&[2.0, 1.0]));
        a.insert(ind(&[1.0, 2.0]));
        assert_eq!(a.len(), 1);
        assert_eq!(a.get(0).objectives, vec![1.0, 2.0]);
        let mut b = Archive::new(1, 10).unwrap();
        b.insert(ind(&[1.0, 2.0]));
        b.insert(ind(&[2.0, 1.0]));
        assert_eq!(b.get(0).objectives, vec![1.0, 2.0]);
    }

    #[test]
    fn overflow_removes_from_crowded_cell() {
        let mut a = Archive::new(3, 2).unwrap();
        for p in [[0.0, 10.0], [9.0, 1.0], [9.5, 0.5], [10.0, 0.0]] {
            a.insert(ind(&p));
        }
        assert_eq!(a.len(), 3);
        let kept: Vec<Vec<f64>> = a.objectives();
        assert!(kept.contains(&vec![0.0, 10.0]), "{kept:?}");
    }

    #[test]
    fn roulette_respects_zero_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            assert_eq!(roulette(&[0.0, 3.0, 0.0], &mut rng), Some(1));
        }
        assert_eq!(roulette(&[], &mut rng), None);
        assert_eq!(roulette(&[0.0], &mut rng), None);
    }
}
