//! Phase coordinates and the phase-difference square `S = [0, 2π]²`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

pub const TWO_PI: f64 = 2.0 * PI;

/// Coordinates closer than this to `0` or `2π` are snapped onto the boundary
/// after every map step so that `∂S` stays exactly invariant.
pub const BOUNDARY_SNAP: f64 = 1e-14;

/// A scalar phase in radians.
///
/// The stored value is not wrapped implicitly; call [`Phase::normalized`] to
/// obtain the representative in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Phase(pub f64);

impl Phase {
    pub fn new(value: f64) -> Self {
        Phase(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn normalized(self) -> Phase {
        Phase(normalize_angle(self.0))
    }
}

impl From<f64> for Phase {
    fn from(value: f64) -> Self {
        Phase(value)
    }
}

/// Representative of `angle` in `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TWO_PI);
    // rem_euclid can return exactly 2π for tiny negative inputs
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Snap a coordinate that drifted within [`BOUNDARY_SNAP`] of `0` or `2π`.
pub fn snap_to_boundary(value: f64) -> f64 {
    if value.abs() < BOUNDARY_SNAP {
        0.0
    } else if (value - TWO_PI).abs() < BOUNDARY_SNAP {
        TWO_PI
    } else {
        value
    }
}

/// A point `(x, y)` of phase differences: `x = ψ₂ − ψ₁`, `y = ψ₃ − ψ₁`.
///
/// Points of the map live in the closed square; no modular wrapping is
/// applied by the map itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        PhasePoint { x, y }
    }

    pub fn swap(self) -> Self {
        PhasePoint {
            x: self.y,
            y: self.x,
        }
    }

    /// Whether the point lies in the closed square, allowing `slack` outside.
    pub fn in_square(self, slack: f64) -> bool {
        let inside = |v: f64| v >= -slack && v <= TWO_PI + slack;
        inside(self.x) && inside(self.y)
    }

    /// Whether the point lies on `∂S` exactly.
    pub fn on_boundary(self) -> bool {
        self.x == 0.0 || self.x == TWO_PI || self.y == 0.0 || self.y == TWO_PI
    }

    pub fn dist_inf(self, other: PhasePoint) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    pub fn dist(self, other: PhasePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub(crate) fn snapped(self) -> Self {
        PhasePoint {
            x: snap_to_boundary(self.x),
            y: snap_to_boundary(self.y),
        }
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6})", self.x, self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_wraps_into_half_open_interval() {
        assert_eq!(normalize_angle(0.0), 0.0);
        assert_eq!(normalize_angle(TWO_PI), 0.0);
        assert!((normalize_angle(-0.3) - (TWO_PI - 0.3)).abs() < 1e-15);
        assert!((normalize_angle(7.0) - (7.0 - TWO_PI)).abs() < 1e-15);
        assert_eq!(normalize_angle(-1e-300), 0.0);
        assert!((Phase(3.0 * PI).normalized().value() - PI).abs() < 1e-15);
    }

    #[test]
    fn snapping_only_touches_the_boundary_band() {
        assert_eq!(snap_to_boundary(5e-15), 0.0);
        assert_eq!(snap_to_boundary(TWO_PI - 5e-15), TWO_PI);
        assert_eq!(snap_to_boundary(1e-13), 1e-13);
    }
}
