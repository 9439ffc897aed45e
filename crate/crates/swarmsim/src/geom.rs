//! Cartesian/spherical geometry primitives shared by every other module.

use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// 3D Cartesian vector. Positions are meters, velocities meters/second.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Length of the projection onto the horizontal (xy) plane.
    pub fn horizontal_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Unit vector in the direction of `self`, or zero for the zero vector.
    pub fn normalized_or_zero(self) -> Vec3 {
        let n = self.norm();
        if n > 0.0 {
            self / n
        } else {
            Vec3::ZERO
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Rotation about the vertical (z) axis by `angle` radians, counterclockwise.
    pub fn rotated_z(self, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        Vec3::new(c * self.x - s * self.y, s * self.x + c * self.y, self.z)
    }

    /// Horizontal projection as (x, y), dropping z.
    pub fn xy(self) -> (f64, f64) {
        (self.x, self.y)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
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

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Spherical coordinates: radial distance, azimuth in (−π, π], elevation in [−π/2, π/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spherical {
    pub range: f64,
    pub azimuth: f64,
    pub elevation: f64,
}

impl Spherical {
    /// Builds a normalized spherical triple. Elevation beyond ±π/2 is folded
    /// across the pole (azimuth flips by π), azimuth is wrapped into (−π, π].
    pub fn new(range: f64, azimuth: f64, elevation: f64) -> Self {
        debug_assert!(range >= 0.0, "negative range {range}");
        let mut el = wrap_angle(elevation);
        let mut az = azimuth;
        if el > std::f64::consts::FRAC_PI_2 {
            el = std::f64::consts::PI - el;
            az += std::f64::consts::PI;
        } else if el < -std::f64::consts::FRAC_PI_2 {
            el = -std::f64::consts::PI - el;
            az += std::f64::consts::PI;
        }
        Spherical { range, azimuth: wrap_angle(az), elevation: el }
    }
}

/// Wraps an angle into (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut w = a.rem_euclid(two_pi);
    if w > std::f64::consts::PI {
        w -= two_pi;
    }
    w
}

/// Cartesian → spherical. The zero vector maps to (0, 0, 0) by convention.
pub fn cart_to_spherical(v: Vec3) -> Spherical {
    let range = v.norm();
    if range == 0.0 {
        return Spherical { range: 0.0, azimuth: 0.0, elevation: 0.0 };
    }
    Spherical {
        range,
        azimuth: v.y.atan2(v.x),
        elevation: (v.z / range).clamp(-1.0, 1.0).asin(),
    }
}

/// Spherical → Cartesian, the exact inverse of [`cart_to_spherical`] up to rounding.
pub fn spherical_to_cart(s: Spherical) -> Vec3 {
    let (sin_el, cos_el) = s.elevation.sin_cos();
    let (sin_az, cos_az) = s.azimuth.sin_cos();
    Vec3::new(
        s.range * cos_el * cos_az,
        s.range * cos_el * sin_az,
        s.range * sin_el,
    )
}
