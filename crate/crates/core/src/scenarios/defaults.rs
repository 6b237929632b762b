//! Reference scenarios. Layouts are drawn from fixed-seed generators so the
//! shipped configuration files can be regenerated bit-for-bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BoxBounds, Cluster, Eavesdropper, EvalSettings, RelayScenario, Terminal, TwoWayScenario, UncertaintySampling};
use crate::em::{ChannelParams, SidelobeScan, Vec3};

const UAV_ALTITUDE_M: f64 = 100.0;

fn scatter_in_box<R: Rng>(rng: &mut R, b: &BoxBounds, n: usize, min_gap: f64) -> Vec<Vec3> {
    let mut pts: Vec<Vec3> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = Vec3::new(rng.gen_range(b.min.x..=b.max.x), rng.gen_range(b.min.y..=b.max.y), b.min.z);
        if pts.iter().all(|q| q.distance(p) >= min_gap) {
            pts.push(round_cm(p));
        }
    }
    pts
}

fn round_cm(p: Vec3) -> Vec3 {
    let r = |v: f64| (v * 100.0).round() / 100.0;
    Vec3::new(r(p.x), r(p.y), r(p.z))
}

fn polar(distance: f64, azimuth_deg: f64, z: f64) -> Vec3 {
    let (s, c) = azimuth_deg.to_radians().sin_cos();
    round_cm(Vec3::new(distance * c, distance * s, z))
}

/// 16 UAVs in a 100 m × 100 m box at 100 m altitude, four clusters of eight
/// ground terminals 3–6 km away, four known and four unknown eavesdroppers,
/// 900 MHz relay channel.
pub fn relay_default() -> RelayScenario {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let swarm_box = BoxBounds {
        min: Vec3::new(-50.0, -50.0, UAV_ALTITUDE_M),
        max: Vec3::new(50.0, 50.0, UAV_ALTITUDE_M),
    };
    let swarm_initial = scatter_in_box(&mut rng, &swarm_box, 16, 5.0);
    let mut clusters = Vec::with_capacity(4);
    let mut next_id = 0;
    let mut centers = Vec::with_capacity(4);
    for c in 0..4u32 {
        let azimuth = 45.0 + 90.0 * c as f64 + rng.gen_range(-10.0..10.0);
        let distance = rng.gen_range(3600.0..5400.0);
        centers.push((azimuth, distance));
        let terminals = (0..8)
            .map(|_| {
                let r = 500.0 * rng.gen::<f64>().sqrt();
                let a = rng.gen_range(0.0..360.0f64);
                let centre = polar(distance, azimuth, 0.0);
                let t = Terminal { id: next_id, position: round_cm(centre + polar(r, a, 0.0)) };
                next_id += 1;
                t
            })
            .collect();
        clusters.push(Cluster { id: c, terminals });
    }
    let mut eavesdroppers = Vec::with_capacity(8);
    for (k, &(azimuth, distance)) in centers.iter().enumerate() {
        let side = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let offset = side * rng.gen_range(8.0..20.0);
        let d = (distance + rng.gen_range(-1200.0..800.0)).clamp(3000.0, 6000.0);
        eavesdroppers.push(Eavesdropper {
            id: k as u32,
            position: polar(d, azimuth + offset, rng.gen_range(0.0..150.0f64).round()),
            known: true,
            uncertainty_radius_m: 20.0,
        });
    }
    for k in 4..8u32 {
        eavesdroppers.push(Eavesdropper {
            id: k,
            position: polar(rng.gen_range(1500.0..6000.0), rng.gen_range(0.0..360.0), rng.gen_range(0.0..150.0f64).round()),
            known: false,
            uncertainty_radius_m: 0.0,
        });
    }
    RelayScenario {
        channel: ChannelParams::RELAY,
        swarm_initial,
        swarm_box,
        clusters,
        eavesdroppers,
        settings: EvalSettings::default(),
    }
}

/// Two swarms of eight UAVs in 100 m × 100 m boxes 3 km apart, 2.4 GHz,
/// 0.1 W per UAV, free-space path loss, four known and four unknown
/// eavesdroppers scattered between them.
pub fn twoway_default() -> TwoWayScenario {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let box_a = BoxBounds {
        min: Vec3::new(-1550.0, -50.0, UAV_ALTITUDE_M),
        max: Vec3::new(-1450.0, 50.0, UAV_ALTITUDE_M),
    };
    let box_b = BoxBounds {
        min: Vec3::new(1450.0, -50.0, UAV_ALTITUDE_M),
        max: Vec3::new(1550.0, 50.0, UAV_ALTITUDE_M),
    };
    let swarm_a_initial = scatter_in_box(&mut rng, &box_a, 8, 5.0);
    let swarm_b_initial = scatter_in_box(&mut rng, &box_b, 8, 5.0);
    let eavesdroppers = (0..8u32)
        .map(|k| {
            let side = if k % 2 == 0 { 1.0 } else { -1.0 };
            let x = rng.gen_range(-1200.0..1200.0);
            let y = side * rng.gen_range(250.0..1500.0);
            let z = rng.gen_range(50.0..150.0f64).round();
            Eavesdropper {
                id: k,
                position: round_cm(Vec3::new(x, y, z)),
                known: k < 4,
                uncertainty_radius_m: if k < 4 { 20.0 } else { 0.0 },
            }
        })
        .collect();
    TwoWayScenario {
        channel: ChannelParams::TWO_WAY,
        swarm_a_initial,
        swarm_b_initial,
        box_a,
        box_b,
        eavesdroppers,
        settings: EvalSettings::default(),
    }
}

fn tiny_settings() -> EvalSettings {
    EvalSettings {
        sidelobe: SidelobeScan { grid_deg: 5.0, exclusion_deg: 10.0 },
        min_separation_m: 0.5,
        uncertainty: UncertaintySampling::default(),
        position_step_m: Some(10.0),
        weight_levels: Some(vec![0.5, 1.0]),
    }
}

/// Three UAVs on a 5 × 5 lattice (10 m pitch), weights in {0.5, 1}, one
/// cluster of two terminals and one known eavesdropper. Small enough to
/// enumerate every solution.
pub fn tiny_relay() -> RelayScenario {
    let z = UAV_ALTITUDE_M;
    RelayScenario {
        channel: ChannelParams::RELAY,
        swarm_initial: vec![Vec3::new(0.0, 0.0, z), Vec3::new(40.0, 0.0, z), Vec3::new(20.0, 40.0, z)],
        swarm_box: BoxBounds { min: Vec3::new(0.0, 0.0, z), max: Vec3::new(40.0, 40.0, z) },
        clusters: vec![Cluster {
            id: 0,
            terminals: vec![
                Terminal { id: 0, position: polar(3000.0, 30.0, 0.0) },
                Terminal { id: 1, position: polar(3600.0, 52.0, 0.0) },
            ],
        }],
        eavesdroppers: vec![
            Eavesdropper { id: 0, position: polar(3300.0, 41.0, 0.0), known: true, uncertainty_radius_m: 0.0 },
            Eavesdropper { id: 1, position: polar(2500.0, 200.0, 0.0), known: false, uncertainty_radius_m: 0.0 },
        ],
        settings: tiny_settings(),
    }
}

/// Two swarms of two UAVs, each on a 3 × 3 lattice (10 m pitch), weights in
/// {0.5, 1}, 2 km apart with two known eavesdroppers off the link axis.
pub fn tiny_twoway() -> TwoWayScenario {
    let z = UAV_ALTITUDE_M;
    TwoWayScenario {
        channel: ChannelParams::TWO_WAY,
        swarm_a_initial: vec![Vec3::new(-1020.0, -10.0, z), Vec3::new(-1000.0, 10.0, z)],
        swarm_b_initial: vec![Vec3::new(1000.0, 10.0, z), Vec3::new(1020.0, -10.0, z)],
        box_a: BoxBounds { min: Vec3::new(-1020.0, -10.0, z), max: Vec3::new(-1000.0, 10.0, z) },
        box_b: BoxBounds { min: Vec3::new(1000.0, -10.0, z), max: Vec3::new(1020.0, 10.0, z) },
        eavesdroppers: vec![
            Eavesdropper { id: 0, position: Vec3::new(-300.0, 450.0, 80.0), known: true, uncertainty_radius_m: 0.0 },
            Eavesdropper { id: 1, position: Vec3::new(400.0, -380.0, 120.0), known: true, uncertainty_radius_m: 0.0 },
            Eavesdropper { id: 2, position: Vec3::new(0.0, 900.0, 60.0), known: false, uncertainty_radius_m: 0.0 },
        ],
        settings: tiny_settings(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relay_default_matches_reference_constants() {
        let s = relay_default();
        s.validate().unwrap();
        assert_eq!(s.swarm_initial.len(), 16);
        assert_eq!(s.clusters.len(), 4);
        assert!(s.clusters.iter().all(|c| c.terminals.len() == 8));
        assert_eq!(s.eavesdroppers.iter().filter(|e| e.known).count(), 4);
        assert_eq!(s.eavesdroppers.iter().filter(|e| !e.known).count(), 4);
        assert_eq!(s.channel, ChannelParams::RELAY);
        let centre = s.swarm_box.center();
        for t in s.clusters.iter().flat_map(|c| &c.terminals) {
            let d = t.position.distance(centre);
            assert!((3000.0..=6000.0).contains(&d), "terminal {} at {d} m", t.id);
        }
        assert_eq!(relay_default(), s);
    }

    #[test]
    fn twoway_default_is_valid() {
        let s = twoway_default();
        s.validate().unwrap();
        assert_eq!(s.channel, ChannelParams::TWO_WAY);
        assert_eq!(s.box_a.max.x - s.box_a.min.x, 100.0);
        assert_eq!(s.box_b.max.y - s.box_b.min.y, 100.0);
    }

    #[test]
    fn tiny_instances_are_valid() {
        tiny_relay().validate().unwrap();
        tiny_twoway().validate().unwrap();
    }
}
