use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::EmError;

/// Cartesian position in meters, right-handed, `z` is altitude.
///
/// Serialized as a three-element array `[x, y, z]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Arithmetic mean of a nonempty point set.
    pub fn centroid(points: &[Vec3]) -> Vec3 {
        let n = points.len().max(1) as f64;
        let sum = points.iter().fold(Vec3::ZERO, |acc, p| acc + *p);
        sum * (1.0 / n)
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(v: [f64; 3]) -> Self {
        Vec3::new(v[0], v[1], v[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Far-field direction: polar angle `theta` in [0, π] from +z, azimuth `phi`
/// in [0, 2π) from +x.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Result<Self, EmError> {
        if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
            return Err(EmError::Domain(format!("theta {theta} outside [0, pi]")));
        }
        if !(phi.is_finite() && (0.0..TAU).contains(&phi)) {
            return Err(EmError::Domain(format!("phi {phi} outside [0, 2pi)")));
        }
        Ok(Self { theta, phi })
    }

    /// Builds a direction in degrees, wrapping azimuth into [0, 360).
    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Result<Self, EmError> {
        Self::new(theta_deg.to_radians(), wrap_azimuth(phi_deg.to_radians()))
    }

    /// Direction of a nonzero vector.
    pub fn from_vector(v: Vec3) -> Result<Self, EmError> {
        let r = v.norm();
        if !(r > 0.0 && r.is_finite()) {
            return Err(EmError::Domain("direction of a zero-length vector".into()));
        }
        let theta = (v.z / r).clamp(-1.0, 1.0).acos();
        Ok(Self { theta, phi: wrap_azimuth(v.y.atan2(v.x)) })
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn phi(self) -> f64 {
        self.phi
    }

    pub fn unit(self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vec3::new(st * cp, st * sp, ct)
    }

    /// Great-circle angle to another direction, radians.
    pub fn angle_to(self, other: Direction) -> f64 {
        self.unit().dot(other.unit()).clamp(-1.0, 1.0).acos()
    }
}

fn wrap_azimuth(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}
