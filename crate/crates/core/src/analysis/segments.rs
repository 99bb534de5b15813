use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::map::three_clock_step;
use crate::params::CouplingParams;
use crate::phase::{PhasePoint, TWO_PI};

/// Maximum allowed distance between `F(point(t))` and `point(r(t))`.
pub const INVARIANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentName {
    /// `x = 0`
    S0,
    /// `x = 2π`
    S1,
    /// `y = 0`
    R0,
    /// `y = 2π`
    R1,
    /// `y = x`
    Delta,
    /// `y = 2π − x`
    DeltaTilde,
    /// `y = π + x/2`, `x ∈ [0, 2π/3]`
    D1,
    /// `y = 2x`, `x ∈ [2π/3, π]`
    C1,
    /// `y = 2(x − π)`, `x ∈ [π, 4π/3]`
    C2,
    /// `y = x/2`, `x ∈ [4π/3, 2π]`
    D2,
}

impl fmt::Display for SegmentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SegmentName::S0 => "s0",
            SegmentName::S1 => "s1",
            SegmentName::R0 => "r0",
            SegmentName::R1 => "r1",
            SegmentName::Delta => "delta",
            SegmentName::DeltaTilde => "delta_tilde",
            SegmentName::D1 => "d1",
            SegmentName::C1 => "c1",
            SegmentName::C2 => "c2",
            SegmentName::D2 => "d2",
        };
        f.write_str(s)
    }
}

/// One-dimensional dynamics of `F` restricted to an invariant segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RestrictionMap {
    /// `g(t) = t + 3ε sin t`
    G,
    /// `h₁(t) = t + ε sin t + ε sin 2t`
    H1,
    /// `h₂(t) = t + 2ε sin t − 2ε sin(t/2)`
    H2,
    /// `t ↦ 2π − h₂(2π − t) = t + 2ε sin t + 2ε sin(t/2)`
    H2Mirrored,
}

impl RestrictionMap {
    /// `(r(t) − t)/ε`, evaluated without cancellation.
    pub fn shape(self, t: f64) -> f64 {
        match self {
            RestrictionMap::G => 3.0 * t.sin(),
            RestrictionMap::H1 => t.sin() + (2.0 * t).sin(),
            RestrictionMap::H2 => 2.0 * t.sin() - 2.0 * (0.5 * t).sin(),
            RestrictionMap::H2Mirrored => 2.0 * t.sin() + 2.0 * (0.5 * t).sin(),
        }
    }

    pub fn apply(self, t: f64, eps: f64) -> f64 {
        t + eps * self.shape(t)
    }

    pub fn derivative(self, t: f64, eps: f64) -> f64 {
        1.0 + eps
            * match self {
                RestrictionMap::G => 3.0 * t.cos(),
                RestrictionMap::H1 => t.cos() + 2.0 * (2.0 * t).cos(),
                RestrictionMap::H2 => 2.0 * t.cos() - (0.5 * t).cos(),
                RestrictionMap::H2Mirrored => 2.0 * t.cos() + (0.5 * t).cos(),
            }
    }

    /// Closed-form lower bound of the derivative: every shape has derivative
    /// bounded by 3 in modulus, so `r′ ≥ 1 − 3ε`.
    pub fn derivative_lower_bound(self, eps: f64) -> f64 {
        1.0 - 3.0 * eps
    }

    /// Fixed points of the map on `[a, b]`: zeros of the shape function,
    /// bracketed on a `samples`-point lattice and refined by bisection.
    pub fn fixed_points(self, a: f64, b: f64, samples: usize) -> Vec<f64> {
        const ZERO: f64 = 1e-12;
        let samples = samples.max(2);
        let t_at = |k: usize| {
            if k + 1 == samples {
                b
            } else {
                a + (b - a) * k as f64 / (samples - 1) as f64
            }
        };
        let mut roots: Vec<f64> = Vec::new();
        let push = |r: f64, roots: &mut Vec<f64>| {
            if !roots.iter().any(|&q| (q - r).abs() < 1e-9) {
                roots.push(r);
            }
        };
        let mut prev_t = t_at(0);
        let mut prev_v = self.shape(prev_t);
        if prev_v.abs() < ZERO {
            push(prev_t, &mut roots);
        }
        for k in 1..samples {
            let t = t_at(k);
            let v = self.shape(t);
            if v.abs() < ZERO {
                push(t, &mut roots);
            } else if prev_v.abs() >= ZERO && prev_v.signum() != v.signum() {
                let (mut lo, mut hi, mut vlo) = (prev_t, t, prev_v);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    let vm = self.shape(mid);
                    if vm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if vm.signum() == vlo.signum() {
                        lo = mid;
                        vlo = vm;
                    } else {
                        hi = mid;
                    }
                }
                push(0.5 * (lo + hi), &mut roots);
            }
            prev_t = t;
            prev_v = v;
        }
        roots.sort_by(f64::total_cmp);
        roots
    }
}

/// A straight invariant segment `t ↦ origin + t·direction`, `t ∈ domain`.
///
/// `line_domain` is the full extent of the supporting line inside `S`, which
/// is invariant too; `domain` is the named piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantSegment {
    pub name: SegmentName,
    pub origin: PhasePoint,
    pub direction: [f64; 2],
    pub domain: (f64, f64),
    pub line_domain: (f64, f64),
    pub restriction: RestrictionMap,
}

impl InvariantSegment {
    pub fn point(&self, t: f64) -> PhasePoint {
        PhasePoint::new(
            self.origin.x + t * self.direction[0],
            self.origin.y + t * self.direction[1],
        )
    }

    /// Endpoints of the supporting line inside `S`.
    pub fn line_endpoints(&self) -> (PhasePoint, PhasePoint) {
        (
            self.point(self.line_domain.0),
            self.point(self.line_domain.1),
        )
    }
}

/// The ten straight invariant segments of `F`.
pub fn invariant_segments() -> Vec<InvariantSegment> {
    use RestrictionMap::*;
    use SegmentName::*;
    let full = (0.0, TWO_PI);
    let seg =
        |name, origin: (f64, f64), direction, domain, line_domain, restriction| InvariantSegment {
            name,
            origin: PhasePoint::new(origin.0, origin.1),
            direction,
            domain,
            line_domain,
            restriction,
        };
    let third = TWO_PI / 3.0;
    vec![
        seg(S0, (0.0, 0.0), [0.0, 1.0], full, full, G),
        seg(S1, (TWO_PI, 0.0), [0.0, 1.0], full, full, G),
        seg(R0, (0.0, 0.0), [1.0, 0.0], full, full, G),
        seg(R1, (0.0, TWO_PI), [1.0, 0.0], full, full, G),
        seg(Delta, (0.0, 0.0), [1.0, 1.0], full, full, G),
        seg(DeltaTilde, (0.0, TWO_PI), [1.0, -1.0], full, full, H1),
        seg(D1, (0.0, PI), [1.0, 0.5], (0.0, third), full, H2),
        seg(C1, (0.0, 0.0), [1.0, 2.0], (third, PI), (0.0, PI), H1),
        seg(
            C2,
            (0.0, -TWO_PI),
            [1.0, 2.0],
            (PI, 2.0 * third),
            (PI, TWO_PI),
            H1,
        ),
        seg(
            D2,
            (0.0, 0.0),
            [1.0, 0.5],
            (2.0 * third, TWO_PI),
            full,
            H2Mirrored,
        ),
    ]
}

/// Outcome of [`verify_invariance`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentCheck {
    pub name: SegmentName,
    pub samples: usize,
    /// `max ‖F(point(t)) − point(r(t))‖∞` over the samples.
    pub max_deviation: f64,
    /// Parameter of the worst sample.
    pub worst_t: f64,
    /// `r(t)` stays inside the domain for every sample.
    pub maps_into_domain: bool,
    /// Sampled `r` values strictly increase and `r′ > 0` at every sample.
    pub strictly_increasing: bool,
    pub min_derivative: f64,
    pub passed: bool,
}

/// Sample a segment, push each sample through `F` and compare with the
/// restriction map.
pub fn verify_invariance(
    seg: &InvariantSegment,
    params: &CouplingParams,
    samples: usize,
) -> SegmentCheck {
    verify_on(seg, seg.domain, params, samples)
}

pub(crate) fn verify_on(
    seg: &InvariantSegment,
    (a, b): (f64, f64),
    params: &CouplingParams,
    samples: usize,
) -> SegmentCheck {
    let eps = params.epsilon;
    let samples = samples.max(2);
    let mut max_dev = 0.0_f64;
    let mut worst_t = a;
    let mut into = true;
    let mut increasing = true;
    let mut min_der = f64::INFINITY;
    let mut prev_r = f64::NEG_INFINITY;
    for k in 0..samples {
        let t = if k + 1 == samples {
            b
        } else {
            a + (b - a) * k as f64 / (samples - 1) as f64
        };
        let r = seg.restriction.apply(t, eps);
        let dev = three_clock_step(seg.point(t), params).dist_inf(seg.point(r));
        if dev > max_dev {
            max_dev = dev;
            worst_t = t;
        }
        if r < a - INVARIANCE_TOL || r > b + INVARIANCE_TOL {
            into = false;
        }
        if r <= prev_r {
            increasing = false;
        }
        prev_r = r;
        let d = seg.restriction.derivative(t, eps);
        min_der = min_der.min(d);
        if d <= 0.0 {
            increasing = false;
        }
    }
    SegmentCheck {
        name: seg.name,
        samples,
        max_deviation: max_dev,
        worst_t,
        maps_into_domain: into,
        strictly_increasing: increasing,
        min_derivative: min_der,
        passed: max_dev < INVARIANCE_TOL && into && increasing,
    }
}
