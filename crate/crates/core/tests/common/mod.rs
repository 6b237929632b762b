#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uavsec::em::{max_sidelobe_db, ChannelParams, Direction, Vec3, VirtualArray};
use uavsec::moea::nondominated_filter;
use uavsec::scenarios::*;

/// Every point of an axis-aligned horizontal lattice with the given pitch.
pub fn lattice(b: &BoxBounds, pitch: f64) -> Vec<Vec3> {
    let nx = ((b.max.x - b.min.x) / pitch).round() as usize;
    let ny = ((b.max.y - b.min.y) / pitch).round() as usize;
    let mut out = Vec::new();
    for i in 0..=nx {
        for j in 0..=ny {
            out.push(Vec3::new(b.min.x + i as f64 * pitch, b.min.y + j as f64 * pitch, b.min.z));
        }
    }
    out
}

/// All weight vectors of length `n` over `levels`.
fn weight_vectors(n: usize, levels: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Vec<f64>| {
                levels.iter().map(move |&l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}

/// Ordered placements of `n` distinct lattice cells.
fn placements(cells: &[Vec3], n: usize) -> Vec<Vec<Vec3>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in placements(cells, n - 1) {
        for c in cells {
            if !rest.contains(c) {
                let mut v = rest.clone();
                v.push(*c);
                out.push(v);
            }
        }
    }
    out
}

/// Every configuration a swarm can take on the scenario lattice.
pub fn swarm_configs(bounds: &BoxBounds, n: usize, settings: &EvalSettings) -> Vec<ElementConfig> {
    let cells = lattice(bounds, settings.position_step_m.expect("tiny instances are quantized"));
    let weights = weight_vectors(n, settings.weight_levels.as_deref().expect("tiny instances are quantized"));
    let mut out = Vec::new();
    for positions in placements(&cells, n) {
        if positions.iter().enumerate().any(|(i, p)| positions[..i].iter().any(|q| q.distance(*p) < settings.min_separation_m)) {
            continue;
        }
        for w in &weights {
            out.push(ElementConfig { positions: positions.clone(), weights: w.clone() });
        }
    }
    out
}

fn unique_front(points: Vec<[f64; 3]>) -> Vec<[f64; 3]> {
    let mut front: Vec<[f64; 3]> = nondominated_filter(&points).into_iter().map(|i| points[i]).collect();
    front.sort_by(|a, b| a.partial_cmp(b).unwrap());
    front.dedup();
    front
}

/// True front of a single-cluster relay instance, by evaluating every solution.
pub fn enumerate_relay_front(s: &RelayScenario) -> (Vec<[f64; 3]>, usize) {
    assert_eq!(s.clusters.len(), 1);
    let configs = swarm_configs(&s.swarm_box, s.uav_count(), &s.settings);
    let mut points = Vec::new();
    for cfg in &configs {
        for r in 0..s.clusters[0].terminals.len() {
            let sol = RelaySolution { legs: vec![cfg.clone()], receiver_choice: vec![r], route: vec![0] };
            points.push(evaluate_relay(s, &sol).unwrap().to_array());
        }
    }
    let n = points.len();
    (unique_front(points), n)
}

fn steered(cfg: &ElementConfig, target: Vec3, carrier_hz: f64) -> VirtualArray {
    let steer = Direction::from_vector(target - Vec3::centroid(&cfg.positions)).unwrap();
    VirtualArray::steered(&cfg.positions, &cfg.weights, steer, carrier_hz).unwrap()
}

/// Per-direction link terms of one swarm configuration toward one receiver cell.
struct LinkTerms {
    secrecy: f64,
    sll: f64,
}

fn link_terms(s: &TwoWayScenario, cfg: &ElementConfig, rx: Vec3) -> LinkTerms {
    let array = steered(cfg, rx, s.channel.carrier_hz);
    let known = s.known_eavesdroppers();
    LinkTerms {
        secrecy: secrecy_rate_twoway(&array, rx, &known, &s.channel, &s.settings.uncertainty).unwrap(),
        sll: max_sidelobe_db(&array, s.channel.carrier_hz, s.settings.sidelobe).unwrap(),
    }
}

/// True front of a two-way instance. The objectives separate into per-link
/// terms, which are tabulated once per (configuration, receiver cell).
pub fn enumerate_twoway_front(s: &TwoWayScenario) -> (Vec<[f64; 3]>, usize) {
    let a_cfgs = swarm_configs(&s.box_a, s.swarm_a_initial.len(), &s.settings);
    let b_cfgs = swarm_configs(&s.box_b, s.swarm_b_initial.len(), &s.settings);
    let cells_a = lattice(&s.box_a, s.settings.position_step_m.unwrap());
    let cells_b = lattice(&s.box_b, s.settings.position_step_m.unwrap());
    let idx = |cells: &[Vec3], p: Vec3| cells.iter().position(|c| *c == p).unwrap();
    let tab = |cfgs: &[ElementConfig], targets: &[Vec3]| -> Vec<Vec<LinkTerms>> {
        cfgs.iter().map(|c| targets.iter().map(|&t| link_terms(s, c, t)).collect()).collect()
    };
    let ab = tab(&a_cfgs, &cells_b);
    let ba = tab(&b_cfgs, &cells_a);
    let moved = |cfg: &ElementConfig, init: &[Vec3]| -> f64 { cfg.positions.iter().zip(init).map(|(p, q)| p.distance(*q)).sum() };
    let da: Vec<f64> = a_cfgs.iter().map(|c| moved(c, &s.swarm_a_initial)).collect();
    let db: Vec<f64> = b_cfgs.iter().map(|c| moved(c, &s.swarm_b_initial)).collect();
    let mut points = Vec::new();
    for (i, a) in a_cfgs.iter().enumerate() {
        for (j, b) in b_cfgs.iter().enumerate() {
            for ra in 0..b.positions.len() {
                let t_ab = &ab[i][idx(&cells_b, b.positions[ra])];
                for rb in 0..a.positions.len() {
                    let t_ba = &ba[j][idx(&cells_a, a.positions[rb])];
                    points.push([-(t_ab.secrecy + t_ba.secrecy), t_ab.sll.max(t_ba.sll), da[i] + db[j]]);
                }
            }
        }
    }
    let n = points.len();
    (unique_front(points), n)
}

/// Median of ten or any other count of values.
pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// A small random relay or two-way geometry for property checks.
pub struct Micro {
    pub channel: ChannelParams,
    pub array: VirtualArray,
    pub cluster: Cluster,
    pub receiver: usize,
    pub eves: Vec<Eavesdropper>,
    pub extra_eve: Eavesdropper,
    pub sampling: UncertaintySampling,
}

fn random_point<R: Rng>(rng: &mut R, near: f64, far: f64, z: f64) -> Vec3 {
    let r = rng.gen_range(near..far);
    let a = rng.gen_range(0.0..std::f64::consts::TAU);
    Vec3::new(r * a.cos(), r * a.sin(), z)
}

fn random_eve<R: Rng>(rng: &mut R, id: u32) -> Eavesdropper {
    let z = rng.gen_range(0.0..150.0);
    Eavesdropper {
        id,
        position: random_point(rng, 200.0, 4000.0, z),
        known: true,
        uncertainty_radius_m: if rng.gen_bool(0.5) { rng.gen_range(0.0..300.0) } else { 0.0 },
    }
}

pub fn micro_scenario(seed: u64) -> Micro {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let channel = if rng.gen_bool(0.5) { ChannelParams::RELAY } else { ChannelParams::TWO_WAY };
    let n = rng.gen_range(1..=6);
    let mut positions: Vec<Vec3> = Vec::new();
    while positions.len() < n {
        let p = Vec3::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0), 100.0);
        if positions.iter().all(|q| q.distance(p) >= 0.5) {
            positions.push(p);
        }
    }
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..=1.0)).collect();
    let terminals: Vec<Terminal> = (0..rng.gen_range(1..=3))
        .map(|i| Terminal { id: i, position: random_point(&mut rng, 500.0, 3000.0, 0.0) })
        .collect();
    let receiver = rng.gen_range(0..terminals.len());
    let steer = Direction::from_vector(terminals[receiver].position - Vec3::centroid(&positions)).unwrap();
    let array = VirtualArray::steered(&positions, &weights, steer, channel.carrier_hz).unwrap();
    let eves: Vec<Eavesdropper> = (0..rng.gen_range(0..=3)).map(|i| random_eve(&mut rng, i)).collect();
    let extra_eve = random_eve(&mut rng, 99);
    let sampling = UncertaintySampling { rays: rng.gen_range(1..=24), radial_step_m: rng.gen_range(10.0..80.0) };
    Micro { channel, array, cluster: Cluster { id: 0, terminals }, receiver, eves, extra_eve, sampling }
}

/// Checks the secrecy properties on one micro-scenario; returns the first violation.
pub fn check_secrecy_properties(m: &Micro) -> Result<(), String> {
    let ch = &m.channel;
    let rx = m.cluster.terminals[m.receiver].position;
    let relay = secrecy_rate_relay(&m.array, &m.cluster, m.receiver, &m.eves, ch, &m.sampling).map_err(|e| e.to_string())?;
    let twoway = secrecy_rate_twoway(&m.array, rx, &m.eves, ch, &m.sampling).map_err(|e| e.to_string())?;
    if !(relay >= 0.0 && twoway >= 0.0) {
        return Err(format!("negative secrecy: relay {relay}, two-way {twoway}"));
    }

    let snrs: Vec<f64> =
        m.eves.iter().map(|e| worst_case_eve_snr(&m.array, e, ch, &m.sampling).unwrap()).collect();
    let combined = mrc_combined_rate(&snrs, ch.bandwidth_hz);
    for (e, &snr) in m.eves.iter().zip(&snrs) {
        let single = uavsec::em::shannon_rate_bps(snr, ch.bandwidth_hz);
        let worst = worst_case_eve_rate(&m.array, e, ch, &m.sampling).unwrap();
        if combined < single || (single - worst).abs() > 1e-9 * single.max(1.0) {
            return Err(format!("MRC rate {combined} below eavesdropper {} rate {single}", e.id));
        }
    }

    let mut more = m.eves.clone();
    more.push(m.extra_eve.clone());
    let relay_more = secrecy_rate_relay(&m.array, &m.cluster, m.receiver, &more, ch, &m.sampling).unwrap();
    let twoway_more = secrecy_rate_twoway(&m.array, rx, &more, ch, &m.sampling).unwrap();
    if relay_more > relay || twoway_more > twoway {
        return Err(format!("extra eavesdropper raised secrecy: {relay} -> {relay_more}, {twoway} -> {twoway_more}"));
    }

    let mut e = m.extra_eve.clone();
    e.uncertainty_radius_m = 250.0;
    let mut last = worst_case_eve_rate(&m.array, &e, ch, &m.sampling).unwrap();
    for r in [200.0, 120.0, 60.0, 10.0, 0.0] {
        e.uncertainty_radius_m = r;
        let rate = worst_case_eve_rate(&m.array, &e, ch, &m.sampling).unwrap();
        if rate > last {
            return Err(format!("shrinking radius to {r} raised the worst-case rate {last} -> {rate}"));
        }
        last = rate;
    }
    Ok(())
}
