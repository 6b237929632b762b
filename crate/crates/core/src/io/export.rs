use std::collections::HashMap;
use std::path::Path;

use super::{IoError, ScenarioConfig};
use crate::analysis::PatternSample;
use crate::em::Vec3;
use crate::moea::ProgressRecord;
use crate::scenarios::{ElementConfig, RelaySolution, TwoWaySolution};

pub const FRONT_FILE: &str = "front.csv";
pub const PROGRESS_FILE: &str = "progress.csv";
pub const PATHS_FILE: &str = "paths.csv";
pub const PATTERN_FILE: &str = "pattern.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq)]
pub enum FrontSolution {
    Relay(RelaySolution),
    Twoway(TwoWaySolution),
}

/// One exported front member: objectives plus the decoded solution.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontRow {
    pub objectives: [f64; 3],
    pub solution: FrontSolution,
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn csv_bytes(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

fn swarm_columns(prefix: &str, n: usize, out: &mut Vec<String>) {
    for u in 0..n {
        for c in ["x", "y", "z", "w"] {
            out.push(format!("{prefix}_u{u}_{c}"));
        }
    }
}

fn swarm_values(cfg: &ElementConfig, out: &mut Vec<String>) {
    for (p, w) in cfg.positions.iter().zip(&cfg.weights) {
        out.extend([num(p.x), num(p.y), num(p.z), num(*w)]);
    }
}

pub(crate) fn front_header(scenario: &ScenarioConfig) -> Vec<String> {
    let mut h: Vec<String> = ["row", "f1", "f2", "f3"].map(String::from).to_vec();
    match scenario {
        ScenarioConfig::Relay(s) => {
            let k = s.clusters.len();
            for c in 0..k {
                swarm_columns(&format!("leg{c}"), s.uav_count(), &mut h);
            }
            h.extend((0..k).map(|c| format!("receiver{c}")));
            h.extend((0..k).map(|i| format!("route{i}")));
        }
        ScenarioConfig::Twoway(s) => {
            swarm_columns("a", s.swarm_a_initial.len(), &mut h);
            swarm_columns("b", s.swarm_b_initial.len(), &mut h);
            h.extend(["receiver_a", "receiver_b"].map(String::from));
        }
    }
    h
}

pub(crate) fn front_csv(scenario: &ScenarioConfig, rows: &[FrontRow]) -> Vec<u8> {
    let records = rows.iter().enumerate().map(|(i, r)| {
        let mut v = vec![i.to_string()];
        v.extend(r.objectives.iter().map(|&o| num(o)));
        match &r.solution {
            FrontSolution::Relay(s) => {
                for leg in &s.legs {
                    swarm_values(leg, &mut v);
                }
                v.extend(s.receiver_choice.iter().map(ToString::to_string));
                v.extend(s.route.iter().map(ToString::to_string));
            }
            FrontSolution::Twoway(s) => {
                swarm_values(&s.a, &mut v);
                swarm_values(&s.b, &mut v);
                v.extend([s.receiver_a.to_string(), s.receiver_b.to_string()]);
            }
        }
        v
    });
    csv_bytes(&front_header(scenario), records)
}

pub(crate) fn progress_csv(progress: &[ProgressRecord]) -> Vec<u8> {
    let header = ["iteration", "archive_size", "evaluations", "best_f1", "best_f2", "best_f3", "hypervolume"]
        .map(String::from);
    let records = progress.iter().map(|p| {
        let mut v = vec![p.iteration.to_string(), p.archive_size.to_string(), p.evaluations.to_string()];
        v.extend(p.best.iter().map(|&b| num(b)));
        v.push(num(p.hypervolume));
        v
    });
    csv_bytes(&header, records)
}

/// Per-UAV waypoints of every front row: the initial position, then one
/// waypoint per visited cluster (relay) or the final position (two-way).
pub(crate) fn paths_csv(scenario: &ScenarioConfig, rows: &[FrontRow]) -> Vec<u8> {
    let header = ["row", "swarm", "uav", "waypoint", "label", "x", "y", "z"].map(String::from);
    let mut records = Vec::new();
    let mut push = |row: usize, swarm: &str, uav: usize, wp: usize, label: String, p: Vec3| {
        records.push(vec![
            row.to_string(),
            swarm.to_string(),
            uav.to_string(),
            wp.to_string(),
            label,
            num(p.x),
            num(p.y),
            num(p.z),
        ]);
    };
    for (i, r) in rows.iter().enumerate() {
        match (&r.solution, scenario) {
            (FrontSolution::Relay(sol), ScenarioConfig::Relay(s)) => {
                for (u, &start) in s.swarm_initial.iter().enumerate() {
                    push(i, "relay", u, 0, "initial".into(), start);
                    for (k, &c) in sol.route.iter().enumerate() {
                        push(i, "relay", u, k + 1, format!("cluster{}", s.clusters[c].id), sol.legs[c].positions[u]);
                    }
                }
            }
            (FrontSolution::Twoway(sol), ScenarioConfig::Twoway(s)) => {
                for (name, init, cfg) in [("a", &s.swarm_a_initial, &sol.a), ("b", &s.swarm_b_initial, &sol.b)] {
                    for (u, &start) in init.iter().enumerate() {
                        push(i, name, u, 0, "initial".into(), start);
                        push(i, name, u, 1, "final".into(), cfg.positions[u]);
                    }
                }
            }
            _ => unreachable!("front rows always match their scenario"),
        }
    }
    csv_bytes(&header, records)
}

pub(crate) fn pattern_csv(row: usize, arrays: &[(String, Vec<PatternSample>)]) -> Vec<u8> {
    let header = ["row", "array", "theta_deg", "phi_deg", "db"].map(String::from);
    let records = arrays.iter().flat_map(|(name, samples)| {
        samples
            .iter()
            .map(move |s| vec![row.to_string(), name.clone(), num(s.theta_deg), num(s.phi_deg), num(s.db)])
    });
    csv_bytes(&header, records)
}

struct RecordView<'a> {
    index: &'a HashMap<String, usize>,
    record: &'a csv::StringRecord,
    context: String,
}

impl RecordView<'_> {
    fn field(&self, name: &str) -> Result<&str, IoError> {
        self.index
            .get(name)
            .and_then(|&i| self.record.get(i))
            .ok_or_else(|| IoError::format(&self.context, format!("missing column {name}")))
    }

    fn f64(&self, name: &str) -> Result<f64, IoError> {
        let s = self.field(name)?;
        s.parse().map_err(|_| IoError::format(&self.context, format!("column {name}: not a number: {s:?}")))
    }

    fn usize(&self, name: &str) -> Result<usize, IoError> {
        let s = self.field(name)?;
        s.parse().map_err(|_| IoError::format(&self.context, format!("column {name}: not an index: {s:?}")))
    }

    fn swarm(&self, prefix: &str, n: usize) -> Result<ElementConfig, IoError> {
        let mut positions = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for u in 0..n {
            let c = |k: &str| self.f64(&format!("{prefix}_u{u}_{k}"));
            positions.push(Vec3::new(c("x")?, c("y")?, c("z")?));
            weights.push(c("w")?);
        }
        Ok(ElementConfig { positions, weights })
    }
}

/// Reads a `front.csv` written for `scenario`.
pub fn read_front(path: &Path, scenario: &ScenarioConfig) -> Result<Vec<FrontRow>, IoError> {
    let name = path.display().to_string();
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(&name, e))?;
    let header = reader.headers().map_err(|e| csv_error(&name, e))?.clone();
    let expected = front_header(scenario);
    if header.iter().ne(expected.iter().map(String::as_str)) {
        return Err(IoError::format(&name, "columns do not match the scenario"));
    }
    let index: HashMap<String, usize> = header.iter().enumerate().map(|(i, h)| (h.to_string(), i)).collect();
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let record = rec.map_err(|e| csv_error(&name, e))?;
        let view = RecordView { index: &index, record: &record, context: format!("{name} row {i}") };
        let objectives = [view.f64("f1")?, view.f64("f2")?, view.f64("f3")?];
        let solution = match scenario {
            ScenarioConfig::Relay(s) => {
                let k = s.clusters.len();
                FrontSolution::Relay(RelaySolution {
                    legs: (0..k).map(|c| view.swarm(&format!("leg{c}"), s.uav_count())).collect::<Result<_, _>>()?,
                    receiver_choice: (0..k).map(|c| view.usize(&format!("receiver{c}"))).collect::<Result<_, _>>()?,
                    route: (0..k).map(|c| view.usize(&format!("route{c}"))).collect::<Result<_, _>>()?,
                })
            }
            ScenarioConfig::Twoway(s) => FrontSolution::Twoway(TwoWaySolution {
                a: view.swarm("a", s.swarm_a_initial.len())?,
                b: view.swarm("b", s.swarm_b_initial.len())?,
                receiver_a: view.usize("receiver_a")?,
                receiver_b: view.usize("receiver_b")?,
            }),
        };
        rows.push(FrontRow { objectives, solution });
    }
    Ok(rows)
}

fn csv_error(context: &str, e: csv::Error) -> IoError {
    IoError::format(context, e.to_string())
}
