use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geometry::{Direction, Vec3};
use super::link::wavenumber;
use super::EmError;

/// Lower clamp applied to normalized pattern values, dB.
pub const PATTERN_FLOOR_DB: f64 = -120.0;

/// One UAV antenna in the virtual array.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArrayElement {
    pub position: Vec3,
    /// Excitation current weight in [0, 1].
    pub weight: f64,
    /// Excitation phase, radians.
    pub phase: f64,
}

/// Collaborative-beamforming array formed by a UAV swarm.
#[derive(Clone, Debug, PartialEq)]
pub struct VirtualArray {
    elements: Vec<ArrayElement>,
    steering: Direction,
}

impl VirtualArray {
    pub fn new(elements: Vec<ArrayElement>, steering: Direction) -> Result<Self, EmError> {
        if elements.is_empty() {
            return Err(EmError::Domain("virtual array needs at least one element".into()));
        }
        for (i, e) in elements.iter().enumerate() {
            if !e.position.is_finite() {
                return Err(EmError::Domain(format!("element {i} has a non-finite position")));
            }
            if !(0.0..=1.0).contains(&e.weight) {
                return Err(EmError::Domain(format!("element {i} weight {} outside [0, 1]", e.weight)));
            }
            if !e.phase.is_finite() {
                return Err(EmError::Domain(format!("element {i} has a non-finite phase")));
            }
        }
        Ok(Self { elements, steering })
    }

    /// Array whose phases conjugate the path difference toward `steer`.
    pub fn steered(
        positions: &[Vec3],
        weights: &[f64],
        steer: Direction,
        carrier_hz: f64,
    ) -> Result<Self, EmError> {
        if positions.len() != weights.len() {
            return Err(EmError::Domain(format!(
                "{} positions but {} weights",
                positions.len(),
                weights.len()
            )));
        }
        let phases = steering_phases(positions, steer, carrier_hz)?;
        let elements = positions
            .iter()
            .zip(weights)
            .zip(phases)
            .map(|((&position, &weight), phase)| ArrayElement { position, weight, phase })
            .collect();
        Self::new(elements, steer)
    }

    pub fn elements(&self) -> &[ArrayElement] {
        &self.elements
    }

    pub fn steering(&self) -> Direction {
        self.steering
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn centroid(&self) -> Vec3 {
        let pts: Vec<Vec3> = self.elements.iter().map(|e| e.position).collect();
        Vec3::centroid(&pts)
    }

    pub fn weight_sum(&self) -> f64 {
        self.elements.iter().map(|e| e.weight).sum()
    }

    /// Smallest pairwise element distance; `None` for a single element.
    pub fn min_separation(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                let d = a.position.distance(b.position);
                best = Some(best.map_or(d, |m: f64| m.min(d)));
            }
        }
        best
    }
}

/// Per-element phases that point the mainlobe at `steer`.
///
/// Positions are taken relative to their centroid, so the result does not
/// depend on where the swarm sits in absolute coordinates.
pub fn steering_phases(positions: &[Vec3], steer: Direction, carrier_hz: f64) -> Result<Vec<f64>, EmError> {
    if positions.is_empty() {
        return Err(EmError::Domain("steering needs at least one position".into()));
    }
    let k = wavenumber(carrier_hz)?;
    let c = Vec3::centroid(positions);
    let u = steer.unit();
    Ok(positions.iter().map(|p| -k * (*p - c).dot(u)).collect())
}

/// Complex array factor in direction `dir`.
pub fn array_factor(array: &VirtualArray, dir: Direction, carrier_hz: f64) -> Result<Complex64, EmError> {
    let k = wavenumber(carrier_hz)?;
    let c = array.centroid();
    let u = dir.unit();
    Ok(array
        .elements
        .iter()
        .map(|e| Complex64::from_polar(e.weight, k * (e.position - c).dot(u) + e.phase))
        .sum())
}

/// Normalized beam pattern in dB relative to the steering direction,
/// clamped below at [`PATTERN_FLOOR_DB`].
pub fn pattern_db(array: &VirtualArray, dir: Direction, carrier_hz: f64) -> Result<f64, EmError> {
    let scanner = PatternScanner::new(array, carrier_hz)?;
    Ok(scanner.pattern_db(dir))
}

/// Sidelobe scan resolution and mainlobe exclusion, both in degrees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidelobeScan {
    pub grid_deg: f64,
    pub exclusion_deg: f64,
}

impl Default for SidelobeScan {
    fn default() -> Self {
        Self { grid_deg: 1.0, exclusion_deg: 10.0 }
    }
}

impl SidelobeScan {
    pub fn validate(&self) -> Result<(), EmError> {
        if !(self.grid_deg > 0.0 && self.grid_deg.is_finite()) {
            return Err(EmError::Config(format!("sidelobe grid {} deg must be positive", self.grid_deg)));
        }
        if !(self.exclusion_deg > 0.0 && self.exclusion_deg < 90.0) {
            return Err(EmError::Config(format!(
                "mainlobe exclusion {} deg must lie in (0, 90)",
                self.exclusion_deg
            )));
        }
        Ok(())
    }
}

/// Highest normalized pattern level outside the mainlobe cap, dB.
pub fn max_sidelobe_db(array: &VirtualArray, carrier_hz: f64, scan: SidelobeScan) -> Result<f64, EmError> {
    scan.validate()?;
    PatternScanner::new(array, carrier_hz)?.max_sidelobe_db(scan)
}

/// Precomputed array geometry for repeated pattern evaluation.
pub(crate) struct PatternScanner {
    // k * (position - centroid), split by axis
    kx: Vec<f64>,
    ky: Vec<f64>,
    kz: Vec<f64>,
    weights: Vec<f64>,
    phases: Vec<f64>,
    steer: Direction,
    mainlobe: f64,
    planar: bool,
}

impl PatternScanner {
    pub(crate) fn new(array: &VirtualArray, carrier_hz: f64) -> Result<Self, EmError> {
        let k = wavenumber(carrier_hz)?;
        let c = array.centroid();
        let n = array.len();
        let (mut kx, mut ky, mut kz) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for e in &array.elements {
            let r = e.position - c;
            kx.push(k * r.x);
            ky.push(k * r.y);
            kz.push(k * r.z);
        }
        let planar = kz.iter().all(|&z| z == 0.0);
        let mut s = Self {
            kx,
            ky,
            kz,
            weights: array.elements.iter().map(|e| e.weight).collect(),
            phases: array.elements.iter().map(|e| e.phase).collect(),
            steer: array.steering,
            mainlobe: 0.0,
            planar,
        };
        let main = s.magnitude(array.steering.unit());
        if !(main > 0.0) {
            return Err(EmError::DegenerateArray);
        }
        s.mainlobe = main;
        Ok(s)
    }

    fn magnitude_sq(&self, u: Vec3) -> f64 {
        let table = phasor_table();
        let mut re = 0.0;
        let mut im = 0.0;
        for i in 0..self.weights.len() {
            let arg = self.kx[i] * u.x + self.ky[i] * u.y + self.kz[i] * u.z + self.phases[i];
            let (c, s) = table.cis(arg);
            re += self.weights[i] * c;
            im += self.weights[i] * s;
        }
        re * re + im * im
    }

    fn magnitude(&self, u: Vec3) -> f64 {
        self.magnitude_sq(u).sqrt()
    }

    fn to_db(&self, magnitude: f64) -> f64 {
        if magnitude <= 0.0 {
            return PATTERN_FLOOR_DB;
        }
        (20.0 * (magnitude / self.mainlobe).log10()).max(PATTERN_FLOOR_DB)
    }

    pub(crate) fn pattern_db(&self, dir: Direction) -> f64 {
        if dir == self.steer {
            return 0.0;
        }
        self.to_db(self.magnitude(dir.unit()))
    }

    pub(crate) fn max_sidelobe_db(&self, scan: SidelobeScan) -> Result<f64, EmError> {
        let grid = ScanGrid::new(scan.grid_deg);
        let cos_cap = scan.exclusion_deg.to_radians().cos();
        let steer = self.steer.unit();
        let mirror = self.planar && grid.symmetric;
        let rows = if mirror { grid.thetas.len().div_ceil(2) } else { grid.thetas.len() };
        let mut best_sq = f64::NEG_INFINITY;
        for i in 0..rows {
            let (st, ct) = grid.thetas[i];
            for &(sp, cp) in &grid.phis {
                let u = Vec3::new(st * cp, st * sp, ct);
                // planar arrays see +z and -z identically
                let mirrored = Vec3::new(u.x, u.y, -u.z);
                let open = u.dot(steer) <= cos_cap;
                let open_mirror = mirror && mirrored.dot(steer) <= cos_cap;
                if !(open || open_mirror) {
                    continue;
                }
                let m = self.magnitude_sq(u);
                if m > best_sq {
                    best_sq = m;
                }
            }
        }
        if best_sq == f64::NEG_INFINITY {
            return Err(EmError::Config(format!(
                "exclusion cap {} deg leaves no scan directions on a {} deg grid",
                scan.exclusion_deg, scan.grid_deg
            )));
        }
        Ok(self.to_db(best_sq.sqrt()))
    }
}

const PHASOR_BITS: u32 = 12;
const PHASOR_LEN: usize = 1 << PHASOR_BITS;

/// Tabulated unit phasors with a short Taylor correction; absolute error
/// below 1e-13 for the phase magnitudes seen in km-scale scans.
struct PhasorTable {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl PhasorTable {
    fn build() -> Self {
        let step = std::f64::consts::TAU / PHASOR_LEN as f64;
        let (sin, cos) = (0..PHASOR_LEN).map(|i| (i as f64 * step).sin_cos()).unzip();
        Self { cos, sin }
    }

    #[inline]
    fn cis(&self, arg: f64) -> (f64, f64) {
        let scale = PHASOR_LEN as f64 / std::f64::consts::TAU;
        let t = arg * scale;
        let nearest = t.round();
        let d = (t - nearest) / scale;
        let idx = (nearest as i64 as usize) & (PHASOR_LEN - 1);
        let d2 = d * d;
        let cd = 1.0 - 0.5 * d2;
        let sd = d * (1.0 - d2 / 6.0);
        let (c0, s0) = (self.cos[idx], self.sin[idx]);
        (c0 * cd - s0 * sd, s0 * cd + c0 * sd)
    }
}

fn phasor_table() -> &'static PhasorTable {
    static TABLE: std::sync::OnceLock<PhasorTable> = std::sync::OnceLock::new();
    TABLE.get_or_init(PhasorTable::build)
}

/// Full-sphere (theta, phi) sampling lattice.
pub(crate) struct ScanGrid {
    pub thetas: Vec<(f64, f64)>,
    pub phis: Vec<(f64, f64)>,
    pub theta_deg: Vec<f64>,
    pub phi_deg: Vec<f64>,
    symmetric: bool,
}

impl ScanGrid {
    pub(crate) fn new(grid_deg: f64) -> Self {
        let n_theta = (180.0 / grid_deg + 1e-9).floor() as usize + 1;
        let n_phi = ((360.0 / grid_deg) - 1e-9).ceil().max(1.0) as usize;
        let theta_deg: Vec<f64> = (0..n_theta).map(|i| i as f64 * grid_deg).collect();
        let phi_deg: Vec<f64> = (0..n_phi).map(|j| j as f64 * grid_deg).collect();
        let last = theta_deg[n_theta - 1];
        Self {
            thetas: theta_deg.iter().map(|t| t.to_radians().sin_cos()).collect(),
            phis: phi_deg.iter().map(|p| p.to_radians().sin_cos()).collect(),
            symmetric: (last - 180.0).abs() < 1e-9,
            theta_deg,
            phi_deg,
        }
    }
}

/// Fixed-geometry comparison arrays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineKind {
    /// Uniform linear array along x.
    Laa,
    /// Uniform rectangular array in the horizontal plane.
    Raa,
}

/// Positions of a uniform LAA or near-square RAA centered on `center`.
pub fn generate_baseline_geometry(
    kind: BaselineKind,
    n: usize,
    spacing_m: f64,
    center: Vec3,
) -> Result<Vec<Vec3>, EmError> {
    if n == 0 {
        return Err(EmError::Domain("baseline array needs at least one element".into()));
    }
    if !(spacing_m > 0.0 && spacing_m.is_finite()) {
        return Err(EmError::Domain(format!("spacing {spacing_m} m must be positive")));
    }
    let (rows, cols) = match kind {
        BaselineKind::Laa => (1, n),
        BaselineKind::Raa => near_square_factors(n),
    };
    let x0 = (cols as f64 - 1.0) / 2.0;
    let y0 = (rows as f64 - 1.0) / 2.0;
    let mut out = Vec::with_capacity(n);
    for r in 0..rows {
        for c in 0..cols {
            out.push(center + Vec3::new((c as f64 - x0) * spacing_m, (r as f64 - y0) * spacing_m, 0.0));
        }
    }
    Ok(out)
}

/// `(r, c)` with `r * c == n`, `r <= c` and `c - r` minimal.
fn near_square_factors(n: usize) -> (usize, usize) {
    let mut r = (n as f64).sqrt().floor() as usize;
    while r > 1 && n % r != 0 {
        r -= 1;
    }
    let r = r.max(1);
    (r, n / r)
}
