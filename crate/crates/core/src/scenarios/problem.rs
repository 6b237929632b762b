use super::evaluate::{evaluate_relay, evaluate_twoway};
use super::secrecy::secrecy_rate_relay;
use super::{BoxBounds, ElementConfig, EvalSettings, RelayScenario, RelaySolution, ScenarioError, TwoWayScenario, TwoWaySolution};
use crate::em::{generate_baseline_geometry, BaselineKind, Direction, EmError, Vec3, VirtualArray};
use crate::moea::{EvaluationError, Genome, GenomeSchema, Problem};

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653_3;
const REPAIR_PASSES: usize = 64;
const SPIRAL_LIMIT: usize = 100_000;

/// Gene layout of one swarm configuration: `[x, y, (z)] × N` then `weight × N`.
#[derive(Clone, Debug)]
struct SwarmCodec {
    n: usize,
    bounds: BoxBounds,
    free_z: bool,
}

impl SwarmCodec {
    fn new(n: usize, bounds: BoxBounds) -> Self {
        Self { n, bounds, free_z: bounds.free_altitude() }
    }

    fn dims(&self) -> usize {
        if self.free_z {
            3
        } else {
            2
        }
    }

    fn len(&self) -> usize {
        self.n * (self.dims() + 1)
    }

    fn push_bounds(&self, out: &mut Vec<(f64, f64)>) {
        for _ in 0..self.n {
            out.push((self.bounds.min.x, self.bounds.max.x));
            out.push((self.bounds.min.y, self.bounds.max.y));
            if self.free_z {
                out.push((self.bounds.min.z, self.bounds.max.z));
            }
        }
        out.extend(std::iter::repeat((0.0, 1.0)).take(self.n));
    }

    fn decode(&self, genes: &[f64], settings: &EvalSettings) -> ElementConfig {
        let d = self.dims();
        let positions = (0..self.n)
            .map(|u| {
                let g = &genes[u * d..(u + 1) * d];
                let z = if self.free_z { g[2] } else { self.bounds.min.z };
                snap_position(Vec3::new(g[0], g[1], z), &self.bounds, settings.position_step_m)
            })
            .collect();
        let weights = genes[self.n * d..self.n * (d + 1)]
            .iter()
            .map(|&w| snap_weight(w, settings.weight_levels.as_deref()))
            .collect();
        ElementConfig { positions, weights }
    }

    fn encode(&self, cfg: &ElementConfig, out: &mut Vec<f64>) {
        for p in &cfg.positions {
            out.push(p.x);
            out.push(p.y);
            if self.free_z {
                out.push(p.z);
            }
        }
        out.extend_from_slice(&cfg.weights);
    }

    fn write_positions(&self, positions: &[Vec3], genes: &mut [f64]) {
        let d = self.dims();
        for (u, p) in positions.iter().enumerate() {
            genes[u * d] = p.x;
            genes[u * d + 1] = p.y;
            if self.free_z {
                genes[u * d + 2] = p.z;
            }
        }
    }

    /// Restores the minimum separation in place.
    fn repair(&self, genes: &mut [f64], settings: &EvalSettings) {
        let cfg = self.decode(genes, settings);
        let fixed = match settings.position_step_m {
            Some(step) => separate_on_lattice(&cfg.positions, &self.bounds, step),
            None => separate_continuous(&cfg.positions, &self.bounds, settings.min_separation_m),
        };
        self.write_positions(&fixed, genes);
    }
}

fn snap_position(p: Vec3, b: &BoxBounds, step: Option<f64>) -> Vec3 {
    let p = b.clamp(p);
    let Some(step) = step else { return p };
    let snap = |v: f64, lo: f64, hi: f64| {
        let cells = ((hi - lo) / step + 1e-9).floor();
        let k = ((v - lo) / step).round().clamp(0.0, cells);
        lo + k * step
    };
    Vec3::new(
        snap(p.x, b.min.x, b.max.x),
        snap(p.y, b.min.y, b.max.y),
        snap(p.z, b.min.z, b.max.z),
    )
}

fn snap_weight(w: f64, levels: Option<&[f64]>) -> f64 {
    let w = w.clamp(0.0, 1.0);
    match levels {
        None => w,
        Some(levels) => levels
            .iter()
            .copied()
            .min_by(|a, b| (a - w).abs().total_cmp(&(b - w).abs()))
            .unwrap_or(w),
    }
}

fn separate_continuous(positions: &[Vec3], b: &BoxBounds, d_min: f64) -> Vec<Vec3> {
    let mut pts = positions.to_vec();
    if d_min <= 0.0 {
        return pts;
    }
    // push slightly past d_min so clamping round-off cannot re-violate
    let target = d_min * (1.0 + 1e-6);
    for _ in 0..REPAIR_PASSES {
        let mut moved = false;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let mut v = pts[j] - pts[i];
                if !b.free_altitude() {
                    v.z = 0.0;
                }
                let d = v.norm();
                if d >= d_min {
                    continue;
                }
                let dir = if d > 1e-12 {
                    v * (1.0 / d)
                } else {
                    let (s, c) = (j as f64 * GOLDEN_ANGLE).sin_cos();
                    Vec3::new(c, s, 0.0)
                };
                let push = (target - d) * 0.5;
                pts[i] = b.clamp(pts[i] - dir * push);
                pts[j] = b.clamp(pts[j] + dir * push);
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    for j in 0..pts.len() {
        let clear = |q: Vec3, pts: &[Vec3]| pts.iter().enumerate().all(|(i, p)| i == j || p.distance(q) >= d_min);
        if clear(pts[j], &pts) {
            continue;
        }
        let origin = pts[j];
        for k in 1..=SPIRAL_LIMIT {
            let (s, c) = (k as f64 * GOLDEN_ANGLE).sin_cos();
            let r = target * (k as f64).sqrt();
            let q = b.clamp(origin + Vec3::new(r * c, r * s, 0.0));
            if clear(q, &pts) {
                pts[j] = q;
                break;
            }
        }
    }
    pts
}

/// Moves UAVs sharing a lattice cell to the nearest free cell, in index order.
fn separate_on_lattice(positions: &[Vec3], b: &BoxBounds, step: f64) -> Vec<Vec3> {
    let cells = |lo: f64, hi: f64| ((hi - lo) / step + 1e-9).floor() as i64;
    let (nx, ny, nz) = (cells(b.min.x, b.max.x), cells(b.min.y, b.max.y), cells(b.min.z, b.max.z));
    let key = |p: Vec3| {
        (
            ((p.x - b.min.x) / step).round() as i64,
            ((p.y - b.min.y) / step).round() as i64,
            ((p.z - b.min.z) / step).round() as i64,
        )
    };
    let mut taken = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(positions.len());
    for &p in positions {
        let k = key(p);
        if taken.insert(k) {
            out.push(p);
            continue;
        }
        let mut best: Option<((i64, i64, i64), f64)> = None;
        for ix in 0..=nx {
            for iy in 0..=ny {
                for iz in 0..=nz {
                    let cand = (ix, iy, iz);
                    if taken.contains(&cand) {
                        continue;
                    }
                    let d = ((ix - k.0).pow(2) + (iy - k.1).pow(2) + (iz - k.2).pow(2)) as f64;
                    if best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((cand, d));
                    }
                }
            }
        }
        match best {
            Some((cell, _)) => {
                taken.insert(cell);
                out.push(Vec3::new(
                    b.min.x + cell.0 as f64 * step,
                    b.min.y + cell.1 as f64 * step,
                    b.min.z + cell.2 as f64 * step,
                ));
            }
            None => out.push(p),
        }
    }
    out
}

fn to_eval_error(e: ScenarioError) -> EvaluationError {
    EvaluationError(e.to_string())
}

/// Relay scenario exposed to the optimizers.
///
/// Continuous genes hold one swarm configuration per cluster (in cluster
/// order), integers hold the terminal chosen in each cluster, and the
/// permutation is the visiting route.
#[derive(Clone, Debug)]
pub struct RelayProblem {
    scenario: RelayScenario,
    codec: SwarmCodec,
    schema: GenomeSchema,
}

impl RelayProblem {
    pub fn new(scenario: RelayScenario) -> Result<Self, ScenarioError> {
        scenario.validate()?;
        let codec = SwarmCodec::new(scenario.uav_count(), scenario.swarm_box);
        let mut continuous = Vec::new();
        for _ in &scenario.clusters {
            codec.push_bounds(&mut continuous);
        }
        let integers = scenario.clusters.iter().map(|c| (0, c.terminals.len() as i64 - 1)).collect();
        let schema = GenomeSchema { continuous, integers, permutation_len: Some(scenario.clusters.len()) };
        Ok(Self { scenario, codec, schema })
    }

    pub fn scenario(&self) -> &RelayScenario {
        &self.scenario
    }

    pub fn decode(&self, g: &Genome) -> RelaySolution {
        let len = self.codec.len();
        let legs = (0..self.scenario.clusters.len())
            .map(|c| self.codec.decode(&g.continuous[c * len..(c + 1) * len], &self.scenario.settings))
            .collect();
        RelaySolution {
            legs,
            receiver_choice: g.integers.iter().map(|&v| v.max(0) as usize).collect(),
            route: g.permutation.clone().unwrap_or_default(),
        }
    }

    pub fn encode(&self, s: &RelaySolution) -> Genome {
        let mut continuous = Vec::with_capacity(self.schema.continuous.len());
        for leg in &s.legs {
            self.codec.encode(leg, &mut continuous);
        }
        Genome {
            continuous,
            integers: s.receiver_choice.iter().map(|&v| v as i64).collect(),
            permutation: Some(s.route.clone()),
        }
    }
}

impl Problem for RelayProblem {
    fn schema(&self) -> &GenomeSchema {
        &self.schema
    }

    fn evaluate(&self, genome: &Genome) -> Result<Vec<f64>, EvaluationError> {
        let sol = self.decode(genome);
        evaluate_relay(&self.scenario, &sol).map(|o| o.to_array().to_vec()).map_err(to_eval_error)
    }

    fn repair(&self, genome: &mut Genome) {
        let len = self.codec.len();
        for c in 0..self.scenario.clusters.len() {
            self.codec.repair(&mut genome.continuous[c * len..(c + 1) * len], &self.scenario.settings);
        }
    }

    fn anchor(&self) -> Option<Genome> {
        let leg = ElementConfig {
            positions: self.scenario.swarm_initial.clone(),
            weights: vec![1.0; self.scenario.uav_count()],
        };
        let m = self.scenario.clusters.len();
        Some(self.encode(&RelaySolution { legs: vec![leg; m], receiver_choice: vec![0; m], route: (0..m).collect() }))
    }
}

/// Two-way scenario exposed to the optimizers: continuous genes for swarm A
/// then swarm B, integers `[receiver in B, receiver in A]`, no permutation.
#[derive(Clone, Debug)]
pub struct TwoWayProblem {
    scenario: TwoWayScenario,
    codec_a: SwarmCodec,
    codec_b: SwarmCodec,
    schema: GenomeSchema,
}

impl TwoWayProblem {
    pub fn new(scenario: TwoWayScenario) -> Result<Self, ScenarioError> {
        scenario.validate()?;
        let codec_a = SwarmCodec::new(scenario.swarm_a_initial.len(), scenario.box_a);
        let codec_b = SwarmCodec::new(scenario.swarm_b_initial.len(), scenario.box_b);
        let mut continuous = Vec::new();
        codec_a.push_bounds(&mut continuous);
        codec_b.push_bounds(&mut continuous);
        let integers = vec![(0, codec_b.n as i64 - 1), (0, codec_a.n as i64 - 1)];
        let schema = GenomeSchema { continuous, integers, permutation_len: None };
        Ok(Self { scenario, codec_a, codec_b, schema })
    }

    pub fn scenario(&self) -> &TwoWayScenario {
        &self.scenario
    }

    pub fn decode(&self, g: &Genome) -> TwoWaySolution {
        let la = self.codec_a.len();
        let s = &self.scenario.settings;
        TwoWaySolution {
            a: self.codec_a.decode(&g.continuous[..la], s),
            b: self.codec_b.decode(&g.continuous[la..la + self.codec_b.len()], s),
            receiver_a: g.integers[0].max(0) as usize,
            receiver_b: g.integers[1].max(0) as usize,
        }
    }

    pub fn encode(&self, s: &TwoWaySolution) -> Genome {
        let mut continuous = Vec::with_capacity(self.schema.continuous.len());
        self.codec_a.encode(&s.a, &mut continuous);
        self.codec_b.encode(&s.b, &mut continuous);
        Genome { continuous, integers: vec![s.receiver_a as i64, s.receiver_b as i64], permutation: None }
    }
}

impl Problem for TwoWayProblem {
    fn schema(&self) -> &GenomeSchema {
        &self.schema
    }

    fn evaluate(&self, genome: &Genome) -> Result<Vec<f64>, EvaluationError> {
        let sol = self.decode(genome);
        evaluate_twoway(&self.scenario, &sol).map(|o| o.to_array().to_vec()).map_err(to_eval_error)
    }

    fn repair(&self, genome: &mut Genome) {
        let la = self.codec_a.len();
        let s = &self.scenario.settings;
        let (a, b) = genome.continuous.split_at_mut(la);
        self.codec_a.repair(a, s);
        self.codec_b.repair(b, s);
    }

    fn anchor(&self) -> Option<Genome> {
        let sc = &self.scenario;
        Some(self.encode(&TwoWaySolution {
            a: ElementConfig { positions: sc.swarm_a_initial.clone(), weights: vec![1.0; sc.swarm_a_initial.len()] },
            b: ElementConfig { positions: sc.swarm_b_initial.clone(), weights: vec![1.0; sc.swarm_b_initial.len()] },
            receiver_a: 0,
            receiver_b: 0,
        }))
    }
}

fn baseline_config(kind: BaselineKind, n: usize, spacing_m: f64, bounds: &BoxBounds) -> Result<ElementConfig, EmError> {
    let positions = generate_baseline_geometry(kind, n, spacing_m, bounds.center())?;
    Ok(ElementConfig { positions, weights: vec![1.0; n] })
}

/// Fixed LAA/RAA formation at the box center for every leg, unit weights,
/// clusters visited in index order, each leg serving its most secure terminal.
pub fn baseline_relay_solution(
    scenario: &RelayScenario,
    kind: BaselineKind,
    spacing_m: f64,
) -> Result<RelaySolution, ScenarioError> {
    let leg = baseline_config(kind, scenario.uav_count(), spacing_m, &scenario.swarm_box)?;
    let known = scenario.known_eavesdroppers();
    let ch = &scenario.channel;
    let centroid = Vec3::centroid(&leg.positions);
    let mut receiver_choice = Vec::with_capacity(scenario.clusters.len());
    for cluster in &scenario.clusters {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, t) in cluster.terminals.iter().enumerate() {
            let steer = Direction::from_vector(t.position - centroid)?;
            let array = VirtualArray::steered(&leg.positions, &leg.weights, steer, ch.carrier_hz)?;
            let sec = secrecy_rate_relay(&array, cluster, i, &known, ch, &scenario.settings.uncertainty)?;
            if sec > best.1 {
                best = (i, sec);
            }
        }
        receiver_choice.push(best.0);
    }
    Ok(RelaySolution {
        legs: vec![leg; scenario.clusters.len()],
        receiver_choice,
        route: (0..scenario.clusters.len()).collect(),
    })
}

/// Both swarms in a fixed LAA/RAA formation at their box centers.
pub fn baseline_twoway_solution(
    scenario: &TwoWayScenario,
    kind: BaselineKind,
    spacing_m: f64,
) -> Result<TwoWaySolution, ScenarioError> {
    Ok(TwoWaySolution {
        a: baseline_config(kind, scenario.swarm_a_initial.len(), spacing_m, &scenario.box_a)?,
        b: baseline_config(kind, scenario.swarm_b_initial.len(), spacing_m, &scenario.box_b)?,
        receiver_a: 0,
        receiver_b: 0,
    })
}
