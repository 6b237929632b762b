use std::fmt;

use super::secrecy::{secrecy_rate_relay, secrecy_rate_twoway};
use super::{BoxBounds, ElementConfig, ObjectiveVector, RelayScenario, RelaySolution, ScenarioError, TwoWayScenario, TwoWaySolution};
use crate::em::{max_sidelobe_db, Direction, Vec3, VirtualArray};
use crate::moea::is_permutation;

/// A single broken solution constraint. Violations are data, not errors.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Shape(String),
    NonFinite { scope: String, uav: usize },
    OutsideBox { scope: String, uav: usize },
    Separation { scope: String, a: usize, b: usize, distance_m: f64 },
    WeightRange { scope: String, uav: usize, weight: f64 },
    RouteNotPermutation { route: Vec<usize> },
    ReceiverIndex { scope: String, index: usize, available: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(m) => write!(f, "shape: {m}"),
            Violation::NonFinite { scope, uav } => write!(f, "{scope}: UAV {uav} has a non-finite position"),
            Violation::OutsideBox { scope, uav } => write!(f, "{scope}: UAV {uav} outside its box"),
            Violation::Separation { scope, a, b, distance_m } => {
                write!(f, "{scope}: UAVs {a} and {b} only {distance_m:.3} m apart")
            }
            Violation::WeightRange { scope, uav, weight } => {
                write!(f, "{scope}: UAV {uav} weight {weight} outside [0, 1]")
            }
            Violation::RouteNotPermutation { route } => write!(f, "route {route:?} is not a permutation"),
            Violation::ReceiverIndex { scope, index, available } => {
                write!(f, "{scope}: receiver index {index} out of range (0..{available})")
            }
        }
    }
}

fn check_config(
    scope: &str,
    cfg: &ElementConfig,
    expected: usize,
    bounds: &BoxBounds,
    d_min: f64,
    out: &mut Vec<Violation>,
) {
    if cfg.positions.len() != expected || cfg.weights.len() != expected {
        out.push(Violation::Shape(format!(
            "{scope}: expected {expected} UAVs, got {} positions and {} weights",
            cfg.positions.len(),
            cfg.weights.len()
        )));
        return;
    }
    for (i, p) in cfg.positions.iter().enumerate() {
        if !p.is_finite() {
            out.push(Violation::NonFinite { scope: scope.to_string(), uav: i });
        } else if !bounds.contains(*p) {
            out.push(Violation::OutsideBox { scope: scope.to_string(), uav: i });
        }
    }
    for (i, a) in cfg.positions.iter().enumerate() {
        for (j, b) in cfg.positions.iter().enumerate().skip(i + 1) {
            let d = a.distance(*b);
            if d < d_min {
                out.push(Violation::Separation { scope: scope.to_string(), a: i, b: j, distance_m: d });
            }
        }
    }
    for (i, &w) in cfg.weights.iter().enumerate() {
        if !(0.0..=1.0).contains(&w) {
            out.push(Violation::WeightRange { scope: scope.to_string(), uav: i, weight: w });
        }
    }
}

pub fn validate_relay(scenario: &RelayScenario, solution: &RelaySolution) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = scenario.clusters.len();
    let n = scenario.uav_count();
    if solution.legs.len() != m {
        out.push(Violation::Shape(format!("expected {m} cluster legs, got {}", solution.legs.len())));
    }
    for (c, leg) in solution.legs.iter().enumerate() {
        check_config(
            &format!("leg {c}"),
            leg,
            n,
            &scenario.swarm_box,
            scenario.settings.min_separation_m,
            &mut out,
        );
    }
    if !is_permutation(&solution.route, m) {
        out.push(Violation::RouteNotPermutation { route: solution.route.clone() });
    }
    if solution.receiver_choice.len() != m {
        out.push(Violation::Shape(format!(
            "expected {m} receiver choices, got {}",
            solution.receiver_choice.len()
        )));
    }
    for (c, (&idx, cluster)) in solution.receiver_choice.iter().zip(&scenario.clusters).enumerate() {
        if idx >= cluster.terminals.len() {
            out.push(Violation::ReceiverIndex {
                scope: format!("cluster {c}"),
                index: idx,
                available: cluster.terminals.len(),
            });
        }
    }
    out
}

pub fn validate_twoway(scenario: &TwoWayScenario, solution: &TwoWaySolution) -> Vec<Violation> {
    let mut out = Vec::new();
    let d_min = scenario.settings.min_separation_m;
    check_config("swarm A", &solution.a, scenario.swarm_a_initial.len(), &scenario.box_a, d_min, &mut out);
    check_config("swarm B", &solution.b, scenario.swarm_b_initial.len(), &scenario.box_b, d_min, &mut out);
    let (na, nb) = (scenario.swarm_a_initial.len(), scenario.swarm_b_initial.len());
    if solution.receiver_a >= nb {
        out.push(Violation::ReceiverIndex { scope: "swarm A".into(), index: solution.receiver_a, available: nb });
    }
    if solution.receiver_b >= na {
        out.push(Violation::ReceiverIndex { scope: "swarm B".into(), index: solution.receiver_b, available: na });
    }
    out
}

/// Total path length: every UAV flies initial → leg(route[0]) → leg(route[1]) → …
pub fn flight_distance_relay(legs: &[ElementConfig], initial: &[Vec3], route: &[usize]) -> f64 {
    initial
        .iter()
        .enumerate()
        .map(|(u, &start)| {
            let mut at = start;
            let mut total = 0.0;
            for &c in route {
                let next = legs[c].positions[u];
                total += at.distance(next);
                at = next;
            }
            total
        })
        .sum()
}

/// Total displacement of both swarms from their initial positions.
pub fn flight_distance_twoway(solution: &TwoWaySolution, a_initial: &[Vec3], b_initial: &[Vec3]) -> f64 {
    let moved = |cfg: &ElementConfig, init: &[Vec3]| -> f64 {
        cfg.positions.iter().zip(init).map(|(p, q)| p.distance(*q)).sum()
    };
    moved(&solution.a, a_initial) + moved(&solution.b, b_initial)
}

fn steer_toward(cfg: &ElementConfig, target: Vec3, carrier_hz: f64) -> Result<VirtualArray, ScenarioError> {
    let centroid = Vec3::centroid(&cfg.positions);
    let steer = Direction::from_vector(target - centroid)?;
    Ok(VirtualArray::steered(&cfg.positions, &cfg.weights, steer, carrier_hz)?)
}

/// Steered array of every relay leg, in cluster order.
pub fn relay_arrays(scenario: &RelayScenario, solution: &RelaySolution) -> Result<Vec<VirtualArray>, ScenarioError> {
    let violations = validate_relay(scenario, solution);
    if !violations.is_empty() {
        return Err(ScenarioError::Invalid(violations));
    }
    scenario
        .clusters
        .iter()
        .enumerate()
        .map(|(c, cluster)| {
            let target = cluster.terminals[solution.receiver_choice[c]].position;
            steer_toward(&solution.legs[c], target, scenario.channel.carrier_hz)
        })
        .collect()
}

/// Steered arrays of swarm A and swarm B.
pub fn twoway_arrays(
    scenario: &TwoWayScenario,
    solution: &TwoWaySolution,
) -> Result<(VirtualArray, VirtualArray), ScenarioError> {
    let violations = validate_twoway(scenario, solution);
    if !violations.is_empty() {
        return Err(ScenarioError::Invalid(violations));
    }
    let f = scenario.channel.carrier_hz;
    Ok((
        steer_toward(&solution.a, solution.b.positions[solution.receiver_a], f)?,
        steer_toward(&solution.b, solution.a.positions[solution.receiver_b], f)?,
    ))
}

/// Objective vector of a relay solution.
pub fn evaluate_relay(scenario: &RelayScenario, solution: &RelaySolution) -> Result<ObjectiveVector, ScenarioError> {
    let violations = validate_relay(scenario, solution);
    if !violations.is_empty() {
        return Err(ScenarioError::Invalid(violations));
    }
    let ch = &scenario.channel;
    let settings = &scenario.settings;
    let known = scenario.known_eavesdroppers();
    let mut secrecy = 0.0;
    let mut worst_sll = f64::NEG_INFINITY;
    for (c, cluster) in scenario.clusters.iter().enumerate() {
        let leg = &solution.legs[c];
        let receiver = solution.receiver_choice[c];
        let array = steer_toward(leg, cluster.terminals[receiver].position, ch.carrier_hz)?;
        secrecy += secrecy_rate_relay(&array, cluster, receiver, &known, ch, &settings.uncertainty)?;
        worst_sll = worst_sll.max(max_sidelobe_db(&array, ch.carrier_hz, settings.sidelobe)?);
    }
    Ok(ObjectiveVector {
        f1: -secrecy,
        f2: worst_sll,
        f3: flight_distance_relay(&solution.legs, &scenario.swarm_initial, &solution.route),
    })
}

/// Objective vector of a two-way solution.
pub fn evaluate_twoway(scenario: &TwoWayScenario, solution: &TwoWaySolution) -> Result<ObjectiveVector, ScenarioError> {
    let violations = validate_twoway(scenario, solution);
    if !violations.is_empty() {
        return Err(ScenarioError::Invalid(violations));
    }
    let ch = &scenario.channel;
    let settings = &scenario.settings;
    let known = scenario.known_eavesdroppers();
    let rx_in_b = solution.b.positions[solution.receiver_a];
    let rx_in_a = solution.a.positions[solution.receiver_b];
    let array_a = steer_toward(&solution.a, rx_in_b, ch.carrier_hz)?;
    let array_b = steer_toward(&solution.b, rx_in_a, ch.carrier_hz)?;
    let sec_ab = secrecy_rate_twoway(&array_a, rx_in_b, &known, ch, &settings.uncertainty)?;
    let sec_ba = secrecy_rate_twoway(&array_b, rx_in_a, &known, ch, &settings.uncertainty)?;
    let sll_a = max_sidelobe_db(&array_a, ch.carrier_hz, settings.sidelobe)?;
    let sll_b = max_sidelobe_db(&array_b, ch.carrier_hz, settings.sidelobe)?;
    Ok(ObjectiveVector {
        f1: -(sec_ab + sec_ba),
        f2: sll_a.max(sll_b),
        f3: flight_distance_twoway(solution, &scenario.swarm_a_initial, &scenario.swarm_b_initial),
    })
}
