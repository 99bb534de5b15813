use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::linalg::Mat2;
use crate::map::{jacobian, omega_field, omega_jacobian};
use crate::params::CouplingParams;
use crate::phase::{PhasePoint, TWO_PI};

pub const NEWTON_MAX_ITER: usize = 50;
pub const FIXED_POINT_RESIDUAL: f64 = 1e-12;
pub const DEDUP_RADIUS: f64 = 1e-6;
/// Eigenvalue moduli closer than this to 1 are left unclassified.
pub const NON_HYPERBOLIC_TOL: f64 = 1e-10;
/// `classify` refuses points with a larger `|Ω|∞`.
const CLASSIFY_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityClass {
    Attractor,
    Repeller,
    Saddle,
    /// An eigenvalue modulus within [`NON_HYPERBOLIC_TOL`] of 1.
    Unclassified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub location: PhasePoint,
    pub jacobian: Mat2,
    /// Descending.
    pub eigenvalues: [f64; 2],
    /// Unit eigenvectors matching `eigenvalues`.
    pub eigenvectors: [[f64; 2]; 2],
    pub class: StabilityClass,
    pub residual: f64,
}

impl FixedPointRecord {
    /// Unit eigenvectors whose eigenvalue modulus exceeds 1.
    pub fn unstable_directions(&self) -> Vec<[f64; 2]> {
        self.eigenvalues
            .iter()
            .zip(self.eigenvectors)
            .filter(|(l, _)| l.abs() > 1.0 + NON_HYPERBOLIC_TOL)
            .map(|(_, v)| v)
            .collect()
    }
}

/// The eleven fixed points of `F` in `S`: three interior zeros of `Ω`, the
/// four corners and the four edge midpoints.
pub fn known_fixed_points() -> Vec<PhasePoint> {
    let third = TWO_PI / 3.0;
    vec![
        PhasePoint::new(PI, PI),
        PhasePoint::new(third, 2.0 * third),
        PhasePoint::new(2.0 * third, third),
        PhasePoint::new(0.0, 0.0),
        PhasePoint::new(0.0, TWO_PI),
        PhasePoint::new(TWO_PI, 0.0),
        PhasePoint::new(TWO_PI, TWO_PI),
        PhasePoint::new(0.0, PI),
        PhasePoint::new(TWO_PI, PI),
        PhasePoint::new(PI, 0.0),
        PhasePoint::new(PI, TWO_PI),
    ]
}

fn residual(p: PhasePoint) -> f64 {
    let (f, g) = omega_field(p);
    f.abs().max(g.abs())
}

/// Jacobian, spectrum and stability class of a fixed point.
pub fn classify(
    fp: PhasePoint,
    params: &CouplingParams,
) -> Result<FixedPointRecord, AnalysisError> {
    params.validate_for_analysis()?;
    let res = residual(fp);
    if !(res < CLASSIFY_RESIDUAL) {
        return Err(AnalysisError::NotAFixedPoint {
            point: fp,
            residual: res,
        });
    }
    let j = jacobian(fp, params);
    let eig = j
        .real_eigen()
        .ok_or(AnalysisError::ComplexEigenvalues(fp))?;
    let moduli = eig.values.map(f64::abs);
    let class = if moduli.iter().any(|m| (m - 1.0).abs() < NON_HYPERBOLIC_TOL) {
        StabilityClass::Unclassified
    } else if moduli.iter().all(|&m| m < 1.0) {
        StabilityClass::Attractor
    } else if moduli.iter().all(|&m| m > 1.0) {
        StabilityClass::Repeller
    } else {
        StabilityClass::Saddle
    };
    Ok(FixedPointRecord {
        location: fp,
        jacobian: j,
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        class,
        residual: res,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedFailure {
    SingularJacobian,
    /// No damped step both stays in `S` and lowers the residual.
    Stalled,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonConvergentSeed {
    pub seed: PhasePoint,
    pub last: PhasePoint,
    pub residual: f64,
    pub reason: SeedFailure,
}

/// Result of [`find_fixed_points`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSearch {
    pub roots: Vec<FixedPointRecord>,
    pub non_convergent: Vec<NonConvergentSeed>,
    pub seeds: usize,
}

fn newton(seed: PhasePoint, tol: f64) -> Result<PhasePoint, NonConvergentSeed> {
    let mut p = seed;
    let mut r = residual(p);
    let fail = |p: PhasePoint, r: f64, reason| NonConvergentSeed {
        seed,
        last: p,
        residual: r,
        reason,
    };
    for _ in 0..NEWTON_MAX_ITER {
        if r < tol {
            return Ok(p);
        }
        let (f, g) = omega_field(p);
        let Some(step) = omega_jacobian(p).solve([f, g]) else {
            return Err(fail(p, r, SeedFailure::SingularJacobian));
        };
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let q = PhasePoint::new(p.x - lambda * step[0], p.y - lambda * step[1]);
            if q.in_square(0.0) {
                let rq = residual(q);
                if rq < r {
                    accepted = Some((q, rq));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((q, rq)) => {
                p = q;
                r = rq;
            }
            None => return Err(fail(p, r, SeedFailure::Stalled)),
        }
    }
    if r < tol {
        Ok(p)
    } else {
        Err(fail(p, r, SeedFailure::MaxIterations))
    }
}

/// Damped Newton on `Ω` from a `seed_grid × seed_grid` lattice spanning the
/// closed square (edges and corners included).
///
/// Steps are halved until they stay inside `S` and lower `|Ω|∞`. Roots closer
/// than [`DEDUP_RADIUS`] are merged; seeds that fail are returned in
/// `non_convergent` rather than dropped.
pub fn find_fixed_points(
    seed_grid: usize,
    tol: f64,
    params: &CouplingParams,
) -> Result<FixedPointSearch, AnalysisError> {
    params.validate_for_analysis()?;
    if !(tol > 0.0) {
        return Err(AnalysisError::Tolerance(tol));
    }
    if seed_grid < 2 {
        return Err(AnalysisError::GridTooSmall(seed_grid));
    }
    let step = TWO_PI / (seed_grid - 1) as f64;
    let coord = |i: usize| {
        if i + 1 == seed_grid {
            TWO_PI
        } else {
            i as f64 * step
        }
    };
    let outcomes: Vec<Result<PhasePoint, NonConvergentSeed>> = (0..seed_grid * seed_grid)
        .into_par_iter()
        .map(|k| {
            newton(
                PhasePoint::new(coord(k % seed_grid), coord(k / seed_grid)),
                tol,
            )
        })
        .collect();

    let mut unique: Vec<PhasePoint> = Vec::new();
    let mut non_convergent = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(p) => {
                if !unique.iter().any(|u| u.dist(p) < DEDUP_RADIUS) {
                    unique.push(p);
                }
            }
            Err(e) => non_convergent.push(e),
        }
    }
    unique.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let roots = unique
        .into_iter()
        .map(|p| classify(p, params))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FixedPointSearch {
        roots,
        non_convergent,
        seeds: seed_grid * seed_grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(e: f64) -> CouplingParams {
        CouplingParams::new(e)
    }

    fn matches_known(found: &[FixedPointRecord]) -> bool {
        let known = known_fixed_points();
        found.len() == known.len()
            && known
                .iter()
                .all(|k| found.iter().any(|f| f.location.dist(*k) < 1e-9))
    }

    #[test]
    fn known_list() {
        let k = known_fixed_points();
        assert_eq!(k.len(), 11);
        assert!(k.contains(&PhasePoint::new(TWO_PI / 3.0, 2.0 * TWO_PI / 3.0)));
        assert!(k.contains(&PhasePoint::new(0.0, PI)));
        for p in k {
            assert!(residual(p) < 1e-15, "{p}");
        }
    }

    #[test]
    fn newton_recovers_exactly_the_known_points() {
        for e in [0.01, 0.05, 0.1] {
            let s = find_fixed_points(50, FIXED_POINT_RESIDUAL, &params(e)).unwrap();
            assert!(matches_known(&s.roots), "eps {e}: {:?}", s.roots.len());
            assert!(s.roots.iter().all(|r| r.residual < 1e-12));
            assert_eq!(s.seeds, 2500);
        }
    }

    #[test]
    fn classification_examples() {
        let e = 0.05;
        let p = params(e);
        let a = classify(PhasePoint::new(TWO_PI / 3.0, 2.0 * TWO_PI / 3.0), &p).unwrap();
        assert_eq!(a.class, StabilityClass::Attractor);
        for l in a.eigenvalues {
            assert!((l - (1.0 - 1.5 * e)).abs() < 1e-12);
        }
        let c = classify(PhasePoint::new(0.0, 0.0), &p).unwrap();
        assert_eq!(c.class, StabilityClass::Repeller);
        assert_eq!(c.eigenvalues, [1.0 + 3.0 * e; 2]);
        let s = classify(PhasePoint::new(0.0, PI), &p).unwrap();
        assert_eq!(s.class, StabilityClass::Saddle);
        assert!((s.eigenvalues[0] - (1.0 + e)).abs() < 1e-12);
        assert!((s.eigenvalues[1] - (1.0 - 3.0 * e)).abs() < 1e-12);
        let u = s.unstable_directions();
        assert_eq!(u.len(), 1);
        assert!((u[0][0] / u[0][1] - 2.0).abs() < 1e-12);
        let m = classify(PhasePoint::new(PI, PI), &p).unwrap();
        assert!((m.eigenvalues[0] - (1.0 + e)).abs() < 1e-12);
        assert!((m.eigenvalues[1] - (1.0 - 3.0 * e)).abs() < 1e-12);
    }

    #[test]
    fn census_by_class() {
        let p = params(0.05);
        let recs: Vec<_> = known_fixed_points()
            .into_iter()
            .map(|q| classify(q, &p).unwrap())
            .collect();
        let count = |c| recs.iter().filter(|r| r.class == c).count();
        assert_eq!(count(StabilityClass::Attractor), 2);
        assert_eq!(count(StabilityClass::Repeller), 4);
        assert_eq!(count(StabilityClass::Saddle), 5);
    }

    #[test]
    fn classify_rejects_non_fixed_points_and_bad_epsilon() {
        assert!(matches!(
            classify(PhasePoint::new(1.0, 2.0), &params(0.05)),
            Err(AnalysisError::NotAFixedPoint { .. })
        ));
        assert!(classify(PhasePoint::new(PI, PI), &params(0.0)).is_err());
        assert!(classify(PhasePoint::new(PI, PI), &params(0.2)).is_err());
        assert!(find_fixed_points(10, 0.0, &params(0.05)).is_err());
    }

    #[test]
    fn failures_are_reported_not_dropped() {
        let s = find_fixed_points(13, FIXED_POINT_RESIDUAL, &params(0.05)).unwrap();
        let converged: usize = s.seeds - s.non_convergent.len();
        assert!(converged >= s.roots.len());
        assert!(matches_known(&s.roots));
    }
}
