//! Relay and two-way secure-beamforming scenarios and their objectives.
//!
//! All objectives are minimized:
//! `f1 = -(total secrecy rate, bit/s)`, `f2 = max sidelobe level (dB)`,
//! `f3 = total UAV flight distance (m)`.

mod defaults;
mod evaluate;
mod problem;
mod secrecy;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::em::{ChannelParams, EmError, SidelobeScan, Vec3};

pub use defaults::{relay_default, tiny_relay, tiny_twoway, twoway_default};
pub use evaluate::{
    evaluate_relay, evaluate_twoway, flight_distance_relay, flight_distance_twoway, relay_arrays, twoway_arrays,
    validate_relay, validate_twoway, Violation,
};
pub use problem::{baseline_relay_solution, baseline_twoway_solution, RelayProblem, TwoWayProblem};
pub use secrecy::{
    mrc_combined_rate, secrecy_rate_relay, secrecy_rate_twoway, worst_case_eve_rate, worst_case_eve_snr,
    UncertaintySampling,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Em(#[from] EmError),
    #[error("invalid solution: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("invalid scenario: {0}")]
    Config(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Terminal {
    pub id: u32,
    pub position: Vec3,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub id: u32,
    pub terminals: Vec<Terminal>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eavesdropper {
    pub id: u32,
    pub position: Vec3,
    /// Known eavesdroppers enter the secrecy objective; unknown ones are
    /// only countered through sidelobe suppression.
    pub known: bool,
    #[serde(default)]
    pub uncertainty_radius_m: f64,
}

/// Axis-aligned region a swarm may occupy. Equal `z` bounds pin the altitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxBounds {
    pub min: Vec3,
    pub max: Vec3,
}

impl BoxBounds {
    const TOL: f64 = 1e-9;

    pub fn contains(&self, p: Vec3) -> bool {
        p.x >= self.min.x - Self::TOL
            && p.x <= self.max.x + Self::TOL
            && p.y >= self.min.y - Self::TOL
            && p.y <= self.max.y + Self::TOL
            && p.z >= self.min.z - Self::TOL
            && p.z <= self.max.z + Self::TOL
    }

    pub fn clamp(&self, p: Vec3) -> Vec3 {
        Vec3::new(
            p.x.clamp(self.min.x, self.max.x),
            p.y.clamp(self.min.y, self.max.y),
            p.z.clamp(self.min.z, self.max.z),
        )
    }

    pub fn free_altitude(&self) -> bool {
        self.max.z > self.min.z
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn is_valid(&self) -> bool {
        self.min.is_finite()
            && self.max.is_finite()
            && self.min.x <= self.max.x
            && self.min.y <= self.max.y
            && self.min.z <= self.max.z
    }

    pub fn intersects(&self, other: &BoxBounds) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
            && self.min.z <= other.max.z
            && other.min.z <= self.max.z
    }
}

/// Evaluation knobs shared by both scenario kinds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalSettings {
    pub sidelobe: SidelobeScan,
    pub min_separation_m: f64,
    pub uncertainty: UncertaintySampling,
    /// Snap positions to a lattice of this pitch anchored at the box minimum.
    pub position_step_m: Option<f64>,
    /// Snap weights to the nearest listed level.
    pub weight_levels: Option<Vec<f64>>,
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self {
            sidelobe: SidelobeScan::default(),
            min_separation_m: 0.5,
            uncertainty: UncertaintySampling::default(),
            position_step_m: None,
            weight_levels: None,
        }
    }
}

impl EvalSettings {
    fn validate(&self) -> Result<(), ScenarioError> {
        self.sidelobe.validate()?;
        self.uncertainty.validate()?;
        if !(self.min_separation_m >= 0.0 && self.min_separation_m.is_finite()) {
            return Err(ScenarioError::Config("min_separation_m must be non-negative".into()));
        }
        if let Some(step) = self.position_step_m {
            if !(step > 0.0 && step >= self.min_separation_m) {
                return Err(ScenarioError::Config(format!(
                    "position_step_m {step} must be positive and at least min_separation_m"
                )));
            }
        }
        if let Some(levels) = &self.weight_levels {
            if levels.is_empty() || levels.iter().any(|w| !(0.0..=1.0).contains(w)) {
                return Err(ScenarioError::Config("weight_levels must be nonempty values in [0, 1]".into()));
            }
        }
        Ok(())
    }
}

/// Swarm relaying data to terminal clusters in the presence of eavesdroppers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelayScenario {
    pub channel: ChannelParams,
    pub swarm_initial: Vec<Vec3>,
    pub swarm_box: BoxBounds,
    pub clusters: Vec<Cluster>,
    pub eavesdroppers: Vec<Eavesdropper>,
    #[serde(default)]
    pub settings: EvalSettings,
}

impl RelayScenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.channel.validate()?;
        self.settings.validate()?;
        let bad = |m: String| Err(ScenarioError::Config(m));
        if self.swarm_initial.len() < 2 {
            return bad(format!("relay swarm needs at least 2 UAVs, got {}", self.swarm_initial.len()));
        }
        if !self.swarm_box.is_valid() {
            return bad("swarm_box min must not exceed max".into());
        }
        if let Some(i) = self.swarm_initial.iter().position(|p| !self.swarm_box.contains(*p)) {
            return bad(format!("initial position of UAV {i} lies outside swarm_box"));
        }
        if self.clusters.is_empty() {
            return bad("relay scenario needs at least one cluster".into());
        }
        let mut ids = std::collections::BTreeSet::new();
        for c in &self.clusters {
            if c.terminals.is_empty() {
                return bad(format!("cluster {} has no terminals", c.id));
            }
            for t in &c.terminals {
                if !ids.insert(t.id) {
                    return bad(format!("terminal id {} is not unique", t.id));
                }
            }
        }
        validate_eavesdroppers(&self.eavesdroppers)
    }

    pub fn known_eavesdroppers(&self) -> Vec<Eavesdropper> {
        self.eavesdroppers.iter().filter(|e| e.known).cloned().collect()
    }

    pub fn uav_count(&self) -> usize {
        self.swarm_initial.len()
    }
}

/// Two swarms exchanging data through a pair of virtual arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoWayScenario {
    pub channel: ChannelParams,
    pub swarm_a_initial: Vec<Vec3>,
    pub swarm_b_initial: Vec<Vec3>,
    pub box_a: BoxBounds,
    pub box_b: BoxBounds,
    pub eavesdroppers: Vec<Eavesdropper>,
    #[serde(default)]
    pub settings: EvalSettings,
}

impl TwoWayScenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.channel.validate()?;
        self.settings.validate()?;
        let bad = |m: String| Err(ScenarioError::Config(m));
        if self.swarm_a_initial.is_empty() || self.swarm_b_initial.is_empty() {
            return bad("both swarms need at least one UAV".into());
        }
        if !(self.box_a.is_valid() && self.box_b.is_valid()) {
            return bad("box min must not exceed max".into());
        }
        if self.box_a.intersects(&self.box_b) {
            return bad("box_a and box_b must be disjoint".into());
        }
        for (label, swarm, b) in [("A", &self.swarm_a_initial, &self.box_a), ("B", &self.swarm_b_initial, &self.box_b)] {
            if let Some(i) = swarm.iter().position(|p| !b.contains(*p)) {
                return bad(format!("initial position of UAV {i} in swarm {label} lies outside its box"));
            }
        }
        validate_eavesdroppers(&self.eavesdroppers)
    }

    pub fn known_eavesdroppers(&self) -> Vec<Eavesdropper> {
        self.eavesdroppers.iter().filter(|e| e.known).cloned().collect()
    }

    /// The same scenario with the roles of the two swarms exchanged.
    pub fn swapped(&self) -> TwoWayScenario {
        TwoWayScenario {
            swarm_a_initial: self.swarm_b_initial.clone(),
            swarm_b_initial: self.swarm_a_initial.clone(),
            box_a: self.box_b,
            box_b: self.box_a,
            ..self.clone()
        }
    }
}

fn validate_eavesdroppers(eves: &[Eavesdropper]) -> Result<(), ScenarioError> {
    for e in eves {
        if !e.position.is_finite() || !(e.uncertainty_radius_m >= 0.0 && e.uncertainty_radius_m.is_finite()) {
            return Err(ScenarioError::Config(format!("eavesdropper {} has an invalid position or radius", e.id)));
        }
    }
    Ok(())
}

/// Positions and excitation weights of a swarm at one waypoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementConfig {
    pub positions: Vec<Vec3>,
    pub weights: Vec<f64>,
}

/// One configuration per cluster leg, the terminal served in each cluster,
/// and the order in which clusters are visited.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaySolution {
    /// `legs[c]` serves `clusters[c]`.
    pub legs: Vec<ElementConfig>,
    pub receiver_choice: Vec<usize>,
    /// Visiting order over cluster indices.
    pub route: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoWaySolution {
    pub a: ElementConfig,
    pub b: ElementConfig,
    /// Receiving UAV in swarm B for the A→B link.
    pub receiver_a: usize,
    /// Receiving UAV in swarm A for the B→A link.
    pub receiver_b: usize,
}

impl TwoWaySolution {
    pub fn swapped(&self) -> TwoWaySolution {
        TwoWaySolution {
            a: self.b.clone(),
            b: self.a.clone(),
            receiver_a: self.receiver_b,
            receiver_b: self.receiver_a,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    /// Negated total secrecy rate, bit/s.
    pub f1: f64,
    /// Worst maximum sidelobe level over all arrays, dB.
    pub f2: f64,
    /// Total flight distance, m.
    pub f3: f64,
}

impl ObjectiveVector {
    pub fn to_array(self) -> [f64; 3] {
        [self.f1, self.f2, self.f3]
    }
}
