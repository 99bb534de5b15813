//! The phase-difference maps: the kick perturbation `P`, the two-clock Adler
//! map and the three-clock map `F(p) = p + ε·Ω(p)` with its Jacobian.

use crate::linalg::Mat2;
use crate::params::CouplingParams;
use crate::phase::{normalize_angle, Phase, PhasePoint};

/// Phase change `P(φ) = ε·sin φ` a kick induces on a clock that is `φ` ahead
/// of the kicking clock.
pub fn perturbation(phi: Phase, params: &CouplingParams) -> f64 {
    params.epsilon * phi.0.sin()
}

/// Two identical clocks: `φ ↦ φ + ε·sin φ`, wrapped into `[0, 2π)`.
pub fn adler_step(phi: Phase, params: &CouplingParams) -> Phase {
    Phase(normalize_angle(phi.0 + perturbation(phi, params)))
}

/// `φ(x, y) = 2 sin x + sin y + sin(x − y)`.
#[inline]
pub fn phi_component(x: f64, y: f64) -> f64 {
    2.0 * x.sin() + y.sin() + (x - y).sin()
}

/// The vector field `Ω = (φ(x, y), γ(x, y))`.
///
/// `γ(x, y)` is evaluated as `φ(y, x)` so that swapping the coordinates
/// commutes with the map bit for bit.
#[inline]
pub fn omega_field(p: PhasePoint) -> (f64, f64) {
    (phi_component(p.x, p.y), phi_component(p.y, p.x))
}

/// One reference-clock cycle of the three-clock model, `F(p) = p + ε·Ω(p)`.
///
/// The square is not wrapped; coordinates that land within `1e-14` of `0`
/// or `2π` are snapped onto the boundary.
#[inline]
pub fn three_clock_step(p: PhasePoint, params: &CouplingParams) -> PhasePoint {
    let (f, g) = omega_field(p);
    PhasePoint::new(p.x + params.epsilon * f, p.y + params.epsilon * g).snapped()
}

/// Jacobian of `Ω`.
pub fn omega_jacobian(p: PhasePoint) -> Mat2 {
    let (cx, cy, cd) = (p.x.cos(), p.y.cos(), (p.x - p.y).cos());
    Mat2::new(2.0 * cx + cd, -cd + cy, cx - cd, cd + 2.0 * cy)
}

/// Jacobian of `F`: `I + ε·DΩ`.
pub fn jacobian(p: PhasePoint, params: &CouplingParams) -> Mat2 {
    Mat2::IDENTITY.add(&omega_jacobian(p).scale(params.epsilon))
}
