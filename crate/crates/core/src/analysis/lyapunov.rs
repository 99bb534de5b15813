use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fixed_points::known_fixed_points;
use super::AnalysisError;
use crate::map::omega_field;
use crate::params::CouplingParams;
use crate::phase::{PhasePoint, TWO_PI};

/// Upper bound a scan accepts for `max DF`.
pub const LYAPUNOV_MAX_TOL: f64 = 1e-12;
/// `|DF|` below this counts as zero.
pub const LYAPUNOV_ZERO_TOL: f64 = 1e-12;
/// Sample points at least this far from every fixed point of the closed
/// region are "far" and must have clearly negative `DF`.
pub const LYAPUNOV_FAR_RADIUS: f64 = 0.1;
/// `DF` must stay below `-FAR_MARGIN` at far points.
const FAR_MARGIN: f64 = 1e-10;
/// Slack for region membership of points computed in floating point.
const REGION_SLACK: f64 = 1e-12;

/// Closed triangles of `S` on either side of the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `y ≥ x`, attracted to `(2π/3, 4π/3)`.
    Upper,
    /// `y ≤ x`, attracted to `(4π/3, 2π/3)`.
    Lower,
}

impl Region {
    pub fn attractor(self) -> PhasePoint {
        let t = TWO_PI / 3.0;
        match self {
            Region::Upper => PhasePoint::new(t, 2.0 * t),
            Region::Lower => PhasePoint::new(2.0 * t, t),
        }
    }

    pub fn contains(self, p: PhasePoint) -> bool {
        p.in_square(REGION_SLACK)
            && match self {
                Region::Upper => p.y >= p.x - REGION_SLACK,
                Region::Lower => p.y <= p.x + REGION_SLACK,
            }
    }

    /// Fixed points of `F` lying in the closed region.
    pub fn fixed_points(self) -> Vec<PhasePoint> {
        known_fixed_points()
            .into_iter()
            .filter(|&p| self.contains(p))
            .collect()
    }
}

fn centred(p: PhasePoint, region: Region) -> (f64, f64) {
    let c = region.attractor();
    (p.x - c.x, p.y - c.y)
}

/// `V(u, v) = u² + v² − uv`, centred on the region's attractor.
pub fn lyapunov_value(p: PhasePoint, region: Region) -> Result<f64, AnalysisError> {
    if !region.contains(p) {
        return Err(AnalysisError::OutsideRegion(p, region));
    }
    let (u, v) = centred(p, region);
    Ok(u * u + v * v - u * v)
}

/// `DF(p) = V(F(p)) − V(p)`.
///
/// Expanded as `3ε[u(sin x + sin(x−y)) + v(sin y − sin(x−y))] + ε²(φ² + γ² − φγ)`
/// so that no large nearly equal terms are subtracted.
pub fn orbital_derivative(
    p: PhasePoint,
    region: Region,
    params: &CouplingParams,
) -> Result<f64, AnalysisError> {
    if !region.contains(p) {
        return Err(AnalysisError::OutsideRegion(p, region));
    }
    Ok(df_expanded(p, region, params.epsilon))
}

fn df_expanded(p: PhasePoint, region: Region, eps: f64) -> f64 {
    let (u, v) = centred(p, region);
    let d = (p.x - p.y).sin();
    let (f, g) = omega_field(p);
    3.0 * eps * (u * (p.x.sin() + d) + v * (p.y.sin() - d)) + eps * eps * (f * f + g * g - f * g)
}

/// `V(F(p)) − V(p)` evaluated literally; only used to cross-check.
#[cfg(test)]
fn df_naive(p: PhasePoint, region: Region, params: &CouplingParams) -> f64 {
    let v = |q: PhasePoint| {
        let (u, v) = centred(q, region);
        u * u + v * v - u * v
    };
    v(crate::map::three_clock_step(p, params)) - v(p)
}

/// Result of [`orbital_derivative_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovReport {
    pub region: Region,
    pub epsilon: f64,
    pub grid_resolution: usize,
    pub samples: usize,
    pub max_df: f64,
    pub argmax: PhasePoint,
    /// Sample points with `|DF| < LYAPUNOV_ZERO_TOL`.
    pub zero_set: Vec<PhasePoint>,
    /// Every zero-set point lies within two grid cells of a fixed point.
    pub zero_set_near_fixed_points: bool,
    /// Largest `DF` over samples farther than [`LYAPUNOV_FAR_RADIUS`] from
    /// every fixed point of the closed region.
    pub max_df_far: f64,
    pub passed: bool,
}

/// Evaluate `DF` on the lattice `(i·h, j·h)`, `h = 2π/grid`, restricted to
/// the closed triangle.
pub fn orbital_derivative_scan(
    region: Region,
    params: &CouplingParams,
    grid: usize,
) -> Result<LyapunovReport, AnalysisError> {
    params.validate_for_analysis()?;
    if grid < 100 {
        return Err(AnalysisError::GridTooSmall(grid));
    }
    let h = TWO_PI / grid as f64;
    let coord = |i: usize| if i == grid { TWO_PI } else { i as f64 * h };
    let fps = region.fixed_points();
    let eps = params.epsilon;

    // (df, point, far)
    let rows: Vec<Vec<(f64, PhasePoint, bool)>> = (0..=grid)
        .into_par_iter()
        .map(|j| {
            let range = match region {
                Region::Upper => 0..=j,
                Region::Lower => j..=grid,
            };
            range
                .map(|i| {
                    let p = PhasePoint::new(coord(i), coord(j));
                    let far = fps.iter().all(|f| f.dist(p) > LYAPUNOV_FAR_RADIUS);
                    (df_expanded(p, region, eps), p, far)
                })
                .collect()
        })
        .collect();

    let mut max_df = f64::NEG_INFINITY;
    let mut argmax = region.attractor();
    let mut max_df_far = f64::NEG_INFINITY;
    let mut zero_set = Vec::new();
    let mut samples = 0;
    for (df, p, far) in rows.into_iter().flatten() {
        samples += 1;
        if df > max_df {
            max_df = df;
            argmax = p;
        }
        if far {
            max_df_far = max_df_far.max(df);
        }
        if df.abs() < LYAPUNOV_ZERO_TOL {
            zero_set.push(p);
        }
    }
    let near = zero_set.iter().all(|z| {
        fps.iter()
            .any(|f| f.dist(*z) <= 2.0 * h * std::f64::consts::SQRT_2)
    });
    let passed = max_df <= LYAPUNOV_MAX_TOL && near && max_df_far < -FAR_MARGIN;
    Ok(LyapunovReport {
        region,
        epsilon: eps,
        grid_resolution: grid,
        samples,
        max_df,
        argmax,
        zero_set,
        zero_set_near_fixed_points: near,
        max_df_far,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::three_clock_step;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn value_examples() {
        let a = Region::Upper.attractor();
        assert_eq!(lyapunov_value(a, Region::Upper).unwrap(), 0.0);
        let v = lyapunov_value(PhasePoint::new(PI, PI), Region::Upper).unwrap();
        assert!((v - PI * PI / 3.0).abs() < 1e-14);
        assert!(matches!(
            lyapunov_value(PhasePoint::new(3.0, 1.0), Region::Upper),
            Err(AnalysisError::OutsideRegion(..))
        ));
        let m = lyapunov_value(PhasePoint::new(3.0, 1.0), Region::Lower).unwrap();
        assert!(m > 0.0);
    }

    #[test]
    fn derivative_examples() {
        let p = CouplingParams::new(0.01);
        let a = Region::Upper.attractor();
        assert!(orbital_derivative(a, Region::Upper, &p).unwrap().abs() < 1e-15);
        let q = PhasePoint::new(FRAC_PI_2, 3.0 * FRAC_PI_2);
        let d = orbital_derivative(q, Region::Upper, &p).unwrap();
        assert!(d < 0.0);
        assert!((d - df_naive(q, Region::Upper, &p)).abs() < 1e-13);
    }

    #[test]
    fn scans_pass() {
        for e in [0.01, 0.05] {
            for r in [Region::Upper, Region::Lower] {
                let rep = orbital_derivative_scan(r, &CouplingParams::new(e), 300).unwrap();
                assert!(rep.passed, "{rep:?}");
                assert_eq!(rep.samples, 301 * 302 / 2);
                assert!(rep.max_df.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn scan_rejects_small_grids() {
        assert!(orbital_derivative_scan(Region::Upper, &CouplingParams::new(0.05), 50).is_err());
    }

    proptest! {
        #[test]
        fn expanded_matches_naive(x in 0.0f64..TWO_PI, y in 0.0f64..TWO_PI, e in 1e-4f64..0.11) {
            let region = if y >= x { Region::Upper } else { Region::Lower };
            let p = PhasePoint::new(x, y);
            let params = CouplingParams::new(e);
            let a = orbital_derivative(p, region, &params).unwrap();
            prop_assert!((a - df_naive(p, region, &params)).abs() < 1e-12);
        }

        #[test]
        fn v_decreases_along_orbits(x in 0.05f64..6.2, y in 0.05f64..6.2, e in 0.005f64..0.1) {
            prop_assume!((x - y).abs() > 1e-3);
            let region = if y > x { Region::Upper } else { Region::Lower };
            let params = CouplingParams::new(e);
            let mut p = PhasePoint::new(x, y);
            let mut v = lyapunov_value(p, region).unwrap();
            for _ in 0..200 {
                let q = three_clock_step(p, &params);
                let w = lyapunov_value(q, region).unwrap();
                prop_assert!(w <= v + 1e-13);
                let (f, g) = omega_field(p);
                if f.abs().max(g.abs()) > 1e-3 {
                    prop_assert!(w < v);
                }
                p = q;
                v = w;
            }
        }
    }
}
