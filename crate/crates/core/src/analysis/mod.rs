//! Front-quality metrics, beam-pattern tables and the encryption-cost
//! crossover calculator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::em::{Direction, EmError, PatternScanner, ScanGrid, VirtualArray};
use crate::moea::nondominated_filter;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("hypervolume supports 1 to 3 objectives, got {0}")]
    Dimension(usize),
    #[error("point has {got} objectives, reference has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("spread needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("unknown cipher {0:?} (expected des, aes or rsa)")]
    UnknownCipher(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Em(#[from] EmError),
}

/// Dominated volume and the number of points that were dropped because they
/// do not strictly dominate the reference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hypervolume {
    pub value: f64,
    pub excluded: usize,
}

/// Exact hypervolume (minimization) of up to three objectives by slicing.
pub fn hypervolume<T: AsRef<[f64]>>(front: &[T], reference: &[f64]) -> Result<Hypervolume, AnalysisError> {
    let d = reference.len();
    if d == 0 || d > 3 {
        return Err(AnalysisError::Dimension(d));
    }
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(front.len());
    let mut excluded = 0;
    for p in front {
        let p = p.as_ref();
        if p.len() != d {
            return Err(AnalysisError::DimensionMismatch { expected: d, got: p.len() });
        }
        if p.iter().zip(reference).all(|(v, r)| v.is_finite() && v < r) {
            kept.push(p.to_vec());
        } else {
            excluded += 1;
        }
    }
    let nd: Vec<Vec<f64>> = nondominated_filter(&kept).into_iter().map(|i| kept[i].clone()).collect();
    Ok(Hypervolume { value: slice_volume(nd, reference), excluded })
}

/// Hypervolume divided by the volume of the box spanned by `ideal` and `reference`.
pub fn normalized_hypervolume<T: AsRef<[f64]>>(
    front: &[T],
    ideal: &[f64],
    reference: &[f64],
) -> Result<Hypervolume, AnalysisError> {
    if ideal.len() != reference.len() {
        return Err(AnalysisError::DimensionMismatch { expected: reference.len(), got: ideal.len() });
    }
    let volume: f64 = ideal.iter().zip(reference).map(|(i, r)| r - i).product();
    if !(volume > 0.0 && volume.is_finite()) {
        return Err(AnalysisError::Invalid("reference box has no volume".into()));
    }
    let hv = hypervolume(front, reference)?;
    Ok(Hypervolume { value: hv.value / volume, ..hv })
}

fn slice_volume(mut points: Vec<Vec<f64>>, reference: &[f64]) -> f64 {
    let d = reference.len();
    if points.is_empty() {
        return 0.0;
    }
    if d == 1 {
        let best = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        return reference[0] - best;
    }
    if d == 2 {
        points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        let mut area = 0.0;
        let mut y_cap = reference[1];
        // horizontal strips of the staircase
        for p in &points {
            if p[1] >= y_cap {
                continue;
            }
            area += (reference[0] - p[0]) * (y_cap - p[1]);
            y_cap = p[1];
        }
        return area;
    }
    // slice along the last axis
    let last = d - 1;
    points.sort_by(|a, b| a[last].total_cmp(&b[last]));
    let mut vol = 0.0;
    for i in 0..points.len() {
        let lo = points[i][last];
        let hi = if i + 1 < points.len() { points[i + 1][last] } else { reference[last] };
        if hi <= lo {
            continue;
        }
        let slab: Vec<Vec<f64>> = points[..=i].iter().map(|p| p[..last].to_vec()).collect();
        let nd: Vec<Vec<f64>> = nondominated_filter(&slab).into_iter().map(|k| slab[k].clone()).collect();
        vol += slice_volume(nd, &reference[..last]) * (hi - lo);
    }
    vol
}

/// Spread of a front: mean absolute deviation of each point's nearest-
/// neighbour distance, measured in the front's own min–max normalized box.
/// Zero means perfectly even spacing.
pub fn spread<T: AsRef<[f64]>>(front: &[T]) -> Result<f64, AnalysisError> {
    let n = front.len();
    if n < 2 {
        return Err(AnalysisError::TooFewPoints(n));
    }
    let d = front[0].as_ref().len();
    if let Some(p) = front.iter().find(|p| p.as_ref().len() != d) {
        return Err(AnalysisError::DimensionMismatch { expected: d, got: p.as_ref().len() });
    }
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in front {
        for (k, &v) in p.as_ref().iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    let norm: Vec<Vec<f64>> = front
        .iter()
        .map(|p| {
            p.as_ref()
                .iter()
                .enumerate()
                .map(|(k, &v)| if hi[k] > lo[k] { (v - lo[k]) / (hi[k] - lo[k]) } else { 0.0 })
                .collect()
        })
        .collect();
    let gaps: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| norm[i].iter().zip(&norm[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mean = gaps.iter().sum::<f64>() / n as f64;
    Ok(gaps.iter().map(|g| (g - mean).abs()).sum::<f64>() / n as f64)
}

/// Quality summary of one front under a shared reference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontMetrics {
    pub hypervolume: f64,
    pub excluded: usize,
    /// `None` for fronts with fewer than two points.
    pub spread: Option<f64>,
    pub cardinality: usize,
}

pub fn front_metrics<T: AsRef<[f64]>>(front: &[T], reference: &[f64]) -> Result<FrontMetrics, AnalysisError> {
    let hv = hypervolume(front, reference)?;
    Ok(FrontMetrics {
        hypervolume: hv.value,
        excluded: hv.excluded,
        spread: if front.len() >= 2 { Some(spread(front)?) } else { None },
        cardinality: front.len(),
    })
}

/// Reference point shared by several fronts: the componentwise worst value
/// pushed out by `margin` times the observed range on each axis (a unit
/// offset on axes with no spread).
pub fn shared_reference<T: AsRef<[f64]>>(fronts: &[&[T]], margin: f64) -> Result<Vec<f64>, AnalysisError> {
    let mut lo: Vec<f64> = Vec::new();
    let mut hi: Vec<f64> = Vec::new();
    for p in fronts.iter().flat_map(|f| f.iter()) {
        let p = p.as_ref();
        if lo.is_empty() {
            lo = p.to_vec();
            hi = p.to_vec();
        }
        if p.len() != lo.len() {
            return Err(AnalysisError::DimensionMismatch { expected: lo.len(), got: p.len() });
        }
        for (k, &v) in p.iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    if lo.is_empty() {
        return Err(AnalysisError::Invalid("no points to derive a reference from".into()));
    }
    Ok(lo
        .iter()
        .zip(&hi)
        .map(|(&l, &h)| if h > l { h + margin * (h - l) } else { h + 1.0 })
        .collect())
}

/// Symmetric-key and public-key ciphers with published per-200 MB timings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cipher {
    Des,
    Aes,
    Rsa,
}

impl Cipher {
    pub const ALL: [Cipher; 3] = [Cipher::Des, Cipher::Aes, Cipher::Rsa];

    /// Seconds to process 200 MB.
    pub fn reference_time_s(self) -> f64 {
        match self {
            Cipher::Des => 12.07,
            Cipher::Aes => 9.29,
            Cipher::Rsa => 1567.59,
        }
    }
}

impl fmt::Display for Cipher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cipher::Des => "des",
            Cipher::Aes => "aes",
            Cipher::Rsa => "rsa",
        })
    }
}

impl FromStr for Cipher {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "des" => Ok(Cipher::Des),
            "aes" => Ok(Cipher::Aes),
            "rsa" => Ok(Cipher::Rsa),
            _ => Err(AnalysisError::UnknownCipher(s.to_string())),
        }
    }
}

pub const CIPHER_REFERENCE_BYTES: f64 = 200e6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PracticalityInputs {
    pub optimization_time_s: f64,
    /// Seconds per 200 MB for each cipher; defaults to the published timings.
    pub cipher_times_s_per_200mb: Vec<(Cipher, f64)>,
}

impl PracticalityInputs {
    pub fn with_reference_ciphers(optimization_time_s: f64) -> Self {
        Self {
            optimization_time_s,
            cipher_times_s_per_200mb: Cipher::ALL.iter().map(|&c| (c, c.reference_time_s())).collect(),
        }
    }
}

/// Transfer size (bytes) at which a one-off optimization costs as much time
/// as encrypting the stream: `200 MB × t_opt / t_cipher`.
pub fn practicality_crossover_bytes(inputs: &PracticalityInputs, cipher: Cipher) -> Result<f64, AnalysisError> {
    let t_opt = inputs.optimization_time_s;
    if !(t_opt > 0.0 && t_opt.is_finite()) {
        return Err(AnalysisError::Invalid(format!("optimization time must be positive, got {t_opt}")));
    }
    let &(_, t_cipher) = inputs
        .cipher_times_s_per_200mb
        .iter()
        .find(|(c, _)| *c == cipher)
        .ok_or_else(|| AnalysisError::UnknownCipher(cipher.to_string()))?;
    if !(t_cipher > 0.0 && t_cipher.is_finite()) {
        return Err(AnalysisError::Invalid(format!("{cipher} time must be positive, got {t_cipher}")));
    }
    Ok(CIPHER_REFERENCE_BYTES * t_opt / t_cipher)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PatternSample {
    pub theta_deg: f64,
    pub phi_deg: f64,
    pub db: f64,
}

/// Normalized pattern on a full-sphere (theta, phi) lattice, theta-major.
pub fn pattern_grid(array: &VirtualArray, carrier_hz: f64, grid_deg: f64) -> Result<Vec<PatternSample>, AnalysisError> {
    if !(grid_deg > 0.0 && grid_deg.is_finite()) {
        return Err(AnalysisError::Invalid(format!("grid spacing must be positive, got {grid_deg}")));
    }
    let scanner = PatternScanner::new(array, carrier_hz)?;
    let grid = ScanGrid::new(grid_deg);
    let mut out = Vec::with_capacity(grid.theta_deg.len() * grid.phi_deg.len());
    for &t in &grid.theta_deg {
        for &p in &grid.phi_deg {
            let dir = Direction::from_degrees(t, p)?;
            out.push(PatternSample { theta_deg: t, phi_deg: p, db: scanner.pattern_db(dir) });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::em::{ArrayElement, Vec3};
    use approx::assert_relative_eq;

    #[test]
    fn hypervolume_hand_cases() {
        assert_eq!(hypervolume(&[[1.0, 1.0]], &[2.0, 2.0]).unwrap().value, 1.0);
        assert_eq!(hypervolume(&[[0.0, 2.0], [2.0, 0.0]], &[3.0, 3.0]).unwrap().value, 5.0);
        assert_eq!(hypervolume(&[[0.0, 0.0, 0.0]], &[1.0, 2.0, 3.0]).unwrap().value, 6.0);
        // two boxes overlapping in a unit cube
        let v = hypervolume(&[[0.0, 1.0, 1.0], [1.0, 0.0, 0.0]], &[2.0, 2.0, 2.0]).unwrap().value;
        assert_eq!(v, 2.0 + 4.0 - 1.0);
        assert_eq!(hypervolume(&[[0.5]], &[2.0]).unwrap().value, 1.5);
    }

    #[test]
    fn hypervolume_excludes_and_rejects() {
        let hv = hypervolume(&[[1.0, 1.0], [2.5, 0.0], [0.0, 2.0]], &[2.0, 2.0]).unwrap();
        assert_eq!(hv.excluded, 2);
        assert_eq!(hv.value, 1.0);
        assert!(hypervolume::<[f64; 4]>(&[], &[1.0; 4]).is_err());
        assert!(hypervolume(&[[1.0]], &[2.0, 2.0]).is_err());
        let empty: [[f64; 2]; 0] = [];
        assert_eq!(hypervolume(&empty, &[1.0, 1.0]).unwrap().value, 0.0);
    }

    #[test]
    fn normalized_divides_by_box() {
        let hv = normalized_hypervolume(&[[1.0, 1.0]], &[0.0, 0.0], &[2.0, 2.0]).unwrap();
        assert_eq!(hv.value, 0.25);
    }

    #[test]
    fn spread_examples() {
        assert_eq!(spread(&[[0.0, 1.0], [1.0, 0.0]]).unwrap(), 0.0);
        assert!(spread(&[[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]]).unwrap() < 1e-15);
        let uniform: Vec<[f64; 2]> = (0..10).map(|i| [i as f64 / 9.0, 1.0 - i as f64 / 9.0]).collect();
        let clustered: Vec<[f64; 2]> = (0..10)
            .map(|i| {
                let x = if i < 8 { i as f64 * 0.01 } else { 0.9 + (i - 8) as f64 * 0.1 };
                [x, 1.0 - x]
            })
            .collect();
        assert!(spread(&clustered).unwrap() > spread(&uniform).unwrap());
        assert!(spread(&[[1.0, 1.0]]).is_err());
    }

    #[test]
    fn shared_reference_pushes_past_worst() {
        let a = [[0.0, 1.0], [1.0, 0.0]];
        let b = [[2.0, 3.0]];
        let r = shared_reference(&[&a[..], &b[..]], 0.1).unwrap();
        assert_relative_eq!(r[0], 2.2, epsilon = 1e-12);
        assert_relative_eq!(r[1], 3.3, epsilon = 1e-12);
        let flat = [[1.0, 5.0], [1.0, 6.0]];
        assert_eq!(shared_reference(&[&flat[..]], 0.1).unwrap()[0], 2.0);
    }

    #[test]
    fn crossover_examples() {
        let inp = PracticalityInputs::with_reference_ciphers(40.0);
        let aes = practicality_crossover_bytes(&inp, Cipher::Aes).unwrap();
        assert_relative_eq!(aes, 200e6 * 40.0 / 9.29, max_relative = 1e-12);
        assert!((aes / 1e6 - 861.0).abs() < 1.0);
        let rsa = practicality_crossover_bytes(&inp, Cipher::Rsa).unwrap();
        assert!((rsa / 1e6 - 5.1).abs() < 0.05);
        let partial = PracticalityInputs { optimization_time_s: 40.0, cipher_times_s_per_200mb: vec![(Cipher::Des, 12.07)] };
        assert!(matches!(practicality_crossover_bytes(&partial, Cipher::Aes), Err(AnalysisError::UnknownCipher(_))));
        assert!("blowfish".parse::<Cipher>().is_err());
        assert_eq!("AES".parse::<Cipher>().unwrap(), Cipher::Aes);
    }

    #[test]
    fn single_element_pattern_is_flat() {
        let steer = Direction::from_degrees(90.0, 0.0).unwrap();
        let arr = VirtualArray::new(
            vec![ArrayElement { position: Vec3::new(0.0, 0.0, 100.0), weight: 1.0, phase: 0.0 }],
            steer,
        )
        .unwrap();
        let rows = pattern_grid(&arr, 900e6, 10.0).unwrap();
        assert_eq!(rows.len(), 19 * 36);
        assert!(rows.iter().all(|r| r.db.abs() < 1e-12));
    }
}
