use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    find_fixed_points, heteroclinic_census, invariant_segments, orbital_derivative_scan,
    verify_invariance, AnalysisError, FixedPointRecord, HeteroclinicKind, LyapunovReport,
    NonConvergentSeed, Region, SegmentCheck, StabilityClass, FIXED_POINT_RESIDUAL,
};
use crate::andronov::{andronov_fixed_point, andronov_orbit, AndronovError};
use crate::event::{run_until_locked, ClockEnsemble, LockReport, Orientation, SimError};
use crate::params::CouplingParams;
use crate::phase::{PhasePoint, TWO_PI};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub attractors: usize,
    pub repellers: usize,
    pub saddles: usize,
    pub unclassified: usize,
}

impl ClassCounts {
    pub fn tally<'a>(records: impl IntoIterator<Item = &'a FixedPointRecord>) -> Self {
        let mut c = ClassCounts::default();
        for r in records {
            match r.class {
                StabilityClass::Attractor => c.attractors += 1,
                StabilityClass::Repeller => c.repellers += 1,
                StabilityClass::Saddle => c.saddles += 1,
                StabilityClass::Unclassified => c.unclassified += 1,
            }
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub epsilon: f64,
    pub seed_grid: usize,
    pub fixed_points: Vec<FixedPointRecord>,
    pub non_convergent: Vec<NonConvergentSeed>,
    pub counts: ClassCounts,
}

/// Newton search from a `seed_grid²` lattice, classified and tallied.
pub fn fixed_point_report(
    params: &CouplingParams,
    seed_grid: usize,
) -> Result<FixedPointReport, AnalysisError> {
    let search = find_fixed_points(seed_grid, FIXED_POINT_RESIDUAL, params)?;
    Ok(FixedPointReport {
        epsilon: params.epsilon,
        seed_grid,
        counts: ClassCounts::tally(&search.roots),
        fixed_points: search.roots,
        non_convergent: search.non_convergent,
    })
}

/// One traced connection, without its sample polyline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionSummary {
    pub source: PhasePoint,
    pub target: PhasePoint,
    pub kind: HeteroclinicKind,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub epsilon: f64,
    pub segments: Vec<SegmentCheck>,
    pub sa: usize,
    pub rs: usize,
    pub ra: usize,
    pub discarded_seeds: usize,
    pub connections: Vec<ConnectionSummary>,
    pub lyapunov: Vec<LyapunovReport>,
    pub passed: bool,
}

/// Invariance of every segment, the heteroclinic census and Lyapunov scans
/// of both triangles.
///
/// Passes when every segment and scan passes and the census finds 6 sa and
/// 10 rs connections and at least 2 ra connections.
pub fn verify_report(
    params: &CouplingParams,
    segment_samples: usize,
    lyapunov_grid: usize,
    max_iter: usize,
) -> Result<VerifyReport, AnalysisError> {
    params.validate_for_analysis()?;
    let segments: Vec<SegmentCheck> = invariant_segments()
        .iter()
        .map(|s| verify_invariance(s, params, segment_samples))
        .collect();
    let census = heteroclinic_census(params, max_iter)?;
    let lyapunov = [Region::Upper, Region::Lower]
        .into_iter()
        .map(|r| orbital_derivative_scan(r, params, lyapunov_grid))
        .collect::<Result<Vec<_>, _>>()?;
    let (sa, rs, ra) = (
        census.count(HeteroclinicKind::Sa),
        census.count(HeteroclinicKind::Rs),
        census.count(HeteroclinicKind::Ra),
    );
    let passed = segments.iter().all(|s| s.passed)
        && lyapunov.iter().all(|l| l.passed)
        && sa == 6
        && rs == 10
        && ra >= 2;
    Ok(VerifyReport {
        epsilon: params.epsilon,
        segments,
        sa,
        rs,
        ra,
        discarded_seeds: census.discarded.len(),
        connections: census
            .orbits
            .iter()
            .map(|o| ConnectionSummary {
                source: o.source.location,
                target: o.target.location,
                kind: o.kind,
                iterations: o.iterations(),
            })
            .collect(),
        lyapunov,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRun {
    pub start: Vec<f64>,
    pub report: LockReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n_clocks: usize,
    pub epsilon: f64,
    pub tol: f64,
    pub max_cycles: usize,
    pub runs: Vec<SimulationRun>,
    pub locked: usize,
    pub near_splay: usize,
    pub near_splay_fraction: f64,
    pub ascending: usize,
    pub descending: usize,
    pub other_orientation: usize,
}

/// `count` ensembles of `n` clocks: clock 0 at phase 0, the others uniform
/// on `(0, 2π)`, drawn from a ChaCha8 stream seeded with `seed`.
pub fn random_starts(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            std::iter::once(0.0)
                .chain((1..n).map(|_| loop {
                    let v: f64 = rng.gen_range(0.0..TWO_PI);
                    if v > 0.0 {
                        break v;
                    }
                }))
                .collect()
        })
        .collect()
}

/// Run every start to lock (in parallel, results in input order).
pub fn simulation_report(
    starts: &[Vec<f64>],
    params: &CouplingParams,
    tol: f64,
    max_cycles: usize,
) -> Result<SimulationReport, SimError> {
    let n_clocks = starts.first().map_or(0, Vec::len);
    if let Some(s) = starts.iter().find(|s| s.len() != n_clocks) {
        return Err(SimError::MixedSizes {
            expected: n_clocks,
            got: s.len(),
        });
    }
    let runs = starts
        .par_iter()
        .map(|s| {
            let ens = ClockEnsemble::new(s.clone(), *params)?;
            Ok(SimulationRun {
                start: s.clone(),
                report: run_until_locked(&ens, tol, max_cycles)?,
            })
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    let count = |f: &dyn Fn(&LockReport) -> bool| runs.iter().filter(|r| f(&r.report)).count();
    let near_splay = count(&|r| r.near_splay);
    Ok(SimulationReport {
        n_clocks,
        epsilon: params.epsilon,
        tol,
        max_cycles,
        locked: count(&|r| r.locked),
        near_splay,
        near_splay_fraction: if runs.is_empty() {
            0.0
        } else {
            near_splay as f64 / runs.len() as f64
        },
        ascending: count(&|r| r.orientation == Orientation::Ascending),
        descending: count(&|r| r.orientation == Orientation::Descending),
        other_orientation: count(&|r| r.orientation == Orientation::Other),
        runs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AndronovRow {
    pub n: usize,
    pub v: f64,
    /// `v − v_f`.
    pub deviation: f64,
}

pub fn andronov_table(
    v0: f64,
    params: &CouplingParams,
    steps: usize,
) -> Result<Vec<AndronovRow>, AndronovError> {
    let vf = andronov_fixed_point(params)?.v;
    Ok(andronov_orbit(v0, params, steps)?
        .into_iter()
        .enumerate()
        .map(|(n, v)| AndronovRow {
            n,
            v,
            deviation: v - vf,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{from_json, to_json};

    #[test]
    fn fixed_point_report_counts_and_round_trips() {
        let r = fixed_point_report(&CouplingParams::new(0.05), 30).unwrap();
        assert_eq!(r.fixed_points.len(), 11);
        assert_eq!(
            r.counts,
            ClassCounts {
                attractors: 2,
                repellers: 4,
                saddles: 5,
                unclassified: 0
            }
        );
        let back: FixedPointReport = from_json(&to_json(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_str(&to_json(&r).unwrap()).unwrap();
        let row = &v["fixed_points"][0];
        assert!(row.get("location").is_some());
        assert!(row.get("eigenvalues").is_some());
        assert!(row.get("class").is_some());
    }

    #[test]
    fn verify_report_passes_and_round_trips() {
        let r = verify_report(&CouplingParams::new(0.05), 1000, 120, 20_000).unwrap();
        assert!(r.passed);
        assert_eq!((r.sa, r.rs, r.ra), (6, 10, 6));
        let back: VerifyReport = from_json(&to_json(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(verify_report(&CouplingParams::new(0.0), 10, 120, 10).is_err());
    }

    #[test]
    fn random_starts_are_reproducible() {
        let a = random_starts(4, 5, 9);
        assert_eq!(a, random_starts(4, 5, 9));
        assert_ne!(a, random_starts(4, 5, 10));
        assert!(a.iter().all(|s| s.len() == 4 && s[0] == 0.0));
        assert!(a.iter().flatten().all(|&v| (0.0..TWO_PI).contains(&v)));
    }

    #[test]
    fn simulation_report_round_trips() {
        let starts = random_starts(3, 4, 1);
        let r = simulation_report(&starts, &CouplingParams::new(0.05), 1e-6, 2000).unwrap();
        assert_eq!(r.runs.len(), 4);
        assert_eq!(r.locked, 4);
        assert_eq!(r.ascending + r.descending + r.other_orientation, 4);
        let back: SimulationReport = from_json(&to_json(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(simulation_report(
            &[vec![0.0, 1.0], vec![0.0]],
            &CouplingParams::new(0.05),
            1e-6,
            5
        )
        .is_err());
    }

    #[test]
    fn andronov_rows() {
        let p = CouplingParams::new(0.05).with_clock(0.1, 1.0);
        let t = andronov_table(5.0, &p, 200).unwrap();
        assert_eq!(t.len(), 201);
        assert!(t.last().unwrap().deviation.abs() < 1e-10);
        assert!((t.last().unwrap().v - 1.45).abs() < 1e-10);
        assert!(andronov_table(0.4, &p, 3).is_err());
    }
}
