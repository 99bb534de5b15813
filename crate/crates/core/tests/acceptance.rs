//! Acceptance criteria 1 to 10. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use triclock::analysis::{
    classify, find_fixed_points, heteroclinic_census, invariant_segments, known_fixed_points,
    orbital_derivative_scan, verify_invariance, HeteroclinicKind, Region, RestrictionMap,
    FIXED_POINT_RESIDUAL,
};
use triclock::andronov::andronov_fixed_point;
use triclock::basin::{default_max_iter, rasterize_with_workers, BasinLabel};
use triclock::event::{exact_cycle_map, run_until_locked, ClockEnsemble, Orientation};
use triclock::io::SimulationReport;
use triclock::{andronov::andronov_orbit, three_clock_step, CouplingParams, PhasePoint, TWO_PI};

const EIGEN_TOL: f64 = 1e-12;
const INVARIANCE_SAMPLES: usize = 1000;
const ROOT_TOL: f64 = 1e-10;
const ARRIVAL: f64 = 1e-6;
const ORACLE_RATIO: (f64, f64) = (3.5, 4.5);
const BASIN_FRACTION: f64 = 0.995;
const BASIN_BALANCE: f64 = 0.01;
const LYAP_MAX: f64 = 1e-12;
const LYAP_FAR: f64 = -1e-10;
const LYAP_FAR_RADIUS: f64 = 0.1;
const LOCK_TOL: f64 = 1e-6;
const ANDRONOV_TOL: f64 = 1e-10;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn upper() -> PhasePoint {
    PhasePoint::new(TWO_PI / 3.0, 2.0 * TWO_PI / 3.0)
}

fn lower() -> PhasePoint {
    PhasePoint::new(2.0 * TWO_PI / 3.0, TWO_PI / 3.0)
}

fn criterion_1() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for e in [0.01, 0.05, 0.1] {
        let t = Instant::now();
        let s = find_fixed_points(50, FIXED_POINT_RESIDUAL, &CouplingParams::new(e)).unwrap();
        let dt = t.elapsed();
        let known = known_fixed_points();
        let exact = s.roots.len() == 11
            && known
                .iter()
                .all(|k| s.roots.iter().any(|r| r.location.dist(*k) < 1e-9));
        let res = s.roots.iter().all(|r| r.residual < 1e-12);
        ok &= exact && res && dt < Duration::from_secs(1);
        notes.push(format!(
            "eps {e}: {} roots in {:.0} ms",
            s.roots.len(),
            dt.as_secs_f64() * 1e3
        ));
    }
    (ok, notes.join(", "))
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    let mut worst = Vec::new();
    for e in [0.01, 0.05, 0.1] {
        let p = CouplingParams::new(e);
        let eig = |x: f64, y: f64| classify(PhasePoint::new(x, y), &p).unwrap().eigenvalues;
        let pair =
            |got: [f64; 2], want: [f64; 2]| (got[0] - want[0]).abs().max((got[1] - want[1]).abs());
        let saddle = [1.0 + e, 1.0 - 3.0 * e];
        let corner = [1.0 + 3.0 * e; 2];
        let attr = [1.0 - 1.5 * 3f64.sqrt() * e; 2];
        let mut err = pair(eig(PI, PI), saddle);
        for (x, y) in [(0.0, PI), (TWO_PI, PI), (PI, 0.0), (PI, TWO_PI)] {
            err = err.max(pair(eig(x, y), saddle));
        }
        for (x, y) in [(0.0, 0.0), (0.0, TWO_PI), (TWO_PI, 0.0), (TWO_PI, TWO_PI)] {
            err = err.max(pair(eig(x, y), corner));
        }
        let a = eig(upper().x, upper().y);
        let b = eig(lower().x, lower().y);
        let attr_err = pair(a, attr).max(pair(b, attr));
        ok &= err < EIGEN_TOL && attr_err < EIGEN_TOL;
        worst.push(format!(
            "eps {e}: saddles/corners err {err:.1e}; attractors {:.12} vs stated {:.12} (err {attr_err:.1e})",
            a[0], attr[0]
        ));
    }
    (ok, worst.join("; "))
}

fn criterion_3() -> Outcome {
    let p = CouplingParams::new(0.1);
    let checks: Vec<_> = invariant_segments()
        .iter()
        .map(|s| verify_invariance(s, &p, INVARIANCE_SAMPLES))
        .collect();
    let seg_ok = checks.iter().all(|c| c.passed);
    let worst = checks.iter().map(|c| c.max_deviation).fold(0.0, f64::max);
    let third = TWO_PI / 3.0;
    let matches = |got: Vec<f64>, want: &[f64]| {
        got.len() == want.len() && got.iter().zip(want).all(|(a, b)| (a - b).abs() < ROOT_TOL)
    };
    let roots_ok = matches(
        RestrictionMap::G.fixed_points(0.0, TWO_PI, 2000),
        &[0.0, PI, TWO_PI],
    ) && matches(
        RestrictionMap::H1.fixed_points(0.0, TWO_PI, 2000),
        &[0.0, third, PI, 2.0 * third, TWO_PI],
    ) && matches(
        RestrictionMap::H2.fixed_points(0.0, third, 2000),
        &[0.0, third],
    );
    (
        seg_ok && roots_ok,
        format!(
            "{} of 10 segments invariant (worst deviation {worst:.1e}), restriction fixed points {}",
            checks.iter().filter(|c| c.passed).count(),
            if roots_ok { "match" } else { "differ" }
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let expected = [
        (PhasePoint::new(0.0, PI), upper()),
        (PhasePoint::new(PI, TWO_PI), upper()),
        (PhasePoint::new(TWO_PI, PI), lower()),
        (PhasePoint::new(PI, 0.0), lower()),
        (PhasePoint::new(PI, PI), upper()),
        (PhasePoint::new(PI, PI), lower()),
    ];
    for e in [0.01, 0.05, 0.1] {
        let cap = (60.0f64 / e).ceil() as usize;
        let p = CouplingParams::new(e);
        let census = match heteroclinic_census(&p, cap) {
            Ok(c) => c,
            Err(err) => return (false, format!("eps {e}: {err}")),
        };
        let sa: Vec<_> = census
            .orbits
            .iter()
            .filter(|o| o.kind == HeteroclinicKind::Sa)
            .collect();
        let mut pairs_ok = sa.len() == 6;
        for (s, t) in expected {
            pairs_ok &= sa
                .iter()
                .any(|o| o.source.location.dist(s) < 1e-12 && o.target.location.dist(t) < 1e-12);
        }
        let arrive_ok = sa.iter().all(|o| {
            o.samples.last().unwrap().dist(o.target.location) < ARRIVAL && o.iterations() <= cap
        });
        let most = sa.iter().map(|o| o.iterations()).max().unwrap_or(0);
        ok &= pairs_ok && arrive_ok;
        notes.push(format!(
            "eps {e}: {} sa, longest {most}/{cap} iterations",
            sa.len()
        ));
    }
    (ok, notes.join(", "))
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let starts: Vec<PhasePoint> = (0..100)
        .map(|_| loop {
            let x: f64 = rng.gen_range(0.0..TWO_PI);
            let y: f64 = rng.gen_range(0.0..TWO_PI);
            if 0.0 < x && x < y {
                break PhasePoint::new(x, y);
            }
        })
        .collect();
    let errs: Vec<f64> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|&e| {
            let p = CouplingParams::new(e);
            starts
                .iter()
                .map(|&s| {
                    exact_cycle_map(s, &p)
                        .unwrap()
                        .dist_inf(three_clock_step(s, &p))
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let ratios = [errs[0] / errs[1], errs[1] / errs[2]];
    let dt = t.elapsed();
    let ok = ratios
        .iter()
        .all(|r| (ORACLE_RATIO.0..=ORACLE_RATIO.1).contains(r))
        && dt < Duration::from_secs(10);
    (
        ok,
        format!(
            "max errors {:.3e} {:.3e} {:.3e}, ratios {:.3} {:.3}, {:.2} s",
            errs[0],
            errs[1],
            errs[2],
            ratios[0],
            ratios[1],
            dt.as_secs_f64()
        ),
    )
}

fn criterion_6() -> Outcome {
    let p = CouplingParams::new(0.05);
    let m = default_max_iter(0.05);
    let t = Instant::now();
    let single = rasterize_with_workers(200, &p, 1e-6, m, 1).unwrap();
    let dt = t.elapsed();
    let multi = rasterize_with_workers(200, &p, 1e-6, m, 4).unwrap();
    let identical = single == multi;
    let cell = single.cell_size();
    let (mut up_total, mut up_hit, mut lo_total, mut lo_hit) = (0, 0, 0, 0);
    for row in 0..200 {
        for col in 0..200 {
            let c = single.cell_center(col, row);
            if c.on_boundary() {
                continue;
            }
            let l = single.label(col, row);
            if c.y - c.x > 2.0 * cell {
                up_total += 1;
                up_hit += (l == BasinLabel::Upper) as usize;
            } else if c.x - c.y > 2.0 * cell {
                lo_total += 1;
                lo_hit += (l == BasinLabel::Lower) as usize;
            }
        }
    }
    let fu = up_hit as f64 / up_total as f64;
    let fl = lo_hit as f64 / lo_total as f64;
    let (nu, nl) = (
        single.count(BasinLabel::Upper),
        single.count(BasinLabel::Lower),
    );
    let balance = (nu as f64 - nl as f64).abs() / nu.max(nl) as f64;
    let ok = fu >= BASIN_FRACTION
        && fl >= BASIN_FRACTION
        && balance <= BASIN_BALANCE
        && dt < Duration::from_secs(30)
        && identical;
    (
        ok,
        format!(
            "upper {:.4} lower {:.4} of interior cells, counts {nu}/{nl}, single worker {:.2} s, 4 workers identical: {identical}",
            fu,
            fl,
            dt.as_secs_f64()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for e in [0.01, 0.05] {
        for r in [Region::Upper, Region::Lower] {
            let rep = orbital_derivative_scan(r, &CouplingParams::new(e), 300).unwrap();
            assert_eq!(triclock::analysis::LYAPUNOV_FAR_RADIUS, LYAP_FAR_RADIUS);
            ok &= rep.max_df <= LYAP_MAX && rep.max_df_far < LYAP_FAR;
            notes.push(format!(
                "eps {e} {r:?}: max {:.1e}, far max {:.2e}",
                rep.max_df, rep.max_df_far
            ));
        }
    }
    (ok, notes.join(", "))
}

fn criterion_8() -> Outcome {
    let p = CouplingParams::new(0.05);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut locked, mut asc, mut desc, mut worst, mut most) = (0, 0, 0, 0.0f64, 0);
    let total = 500;
    for _ in 0..total {
        let (x, y) = loop {
            let x: f64 = rng.gen_range(0.0..TWO_PI);
            let y: f64 = rng.gen_range(0.0..TWO_PI);
            if x > 0.0 && y > 0.0 && x != y {
                break (x, y);
            }
        };
        let ens = ClockEnsemble::new(vec![0.0, x, y], p).unwrap();
        let r = run_until_locked(&ens, LOCK_TOL, 2000).unwrap();
        if r.locked && r.splay_error < LOCK_TOL {
            locked += 1;
        }
        worst = worst.max(r.splay_error);
        most = most.max(r.cycles);
        match r.orientation {
            Orientation::Ascending => asc += 1,
            Orientation::Descending => desc += 1,
            Orientation::Other => {}
        }
    }
    (
        locked == total && asc > 0 && desc > 0,
        format!(
            "{locked}/{total} locked to equal kick spacing (worst gap error {worst:.1e}, at most {most} cycles), orientations {asc} ascending / {desc} descending"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (mu, h) in [(0.1, 1.0), (0.125, 1.0)] {
        let p = CouplingParams::default().with_clock(mu, h);
        let vf = andronov_fixed_point(&p).unwrap().v;
        for v0 in [4.0 * mu + 0.01, 10.0] {
            let orbit = andronov_orbit(v0, &p, 200).unwrap();
            let hit = orbit.iter().position(|v| (v - vf).abs() < ANDRONOV_TOL);
            ok &= hit.is_some();
            notes.push(format!(
                "mu {mu} v0 {v0}: {}",
                hit.map_or("no convergence".to_string(), |n| format!("{n} steps"))
            ));
        }
    }
    (ok, notes.join(", "))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("n4.json");
    let status = Command::new(env!("CARGO_BIN_EXE_triclock"))
        .args([
            "simulate", "--clocks", "4", "--starts", "100", "--eps", "0.02", "--seed", "4",
        ])
        .args(["--format", "json", "--output"])
        .arg(&out)
        .status()
        .unwrap();
    if !status.success() {
        return (false, format!("simulate exited with {status}"));
    }
    let report: SimulationReport =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let recorded = report.runs.len() == 100
        && report
            .runs
            .iter()
            .all(|r| r.report.state_differences.len() == 3);
    (
        recorded,
        format!(
            "exploratory: {} runs, {} locked, fraction near the (π/2, π, 3π/2) splay {:.2}",
            report.runs.len(),
            report.locked,
            report.near_splay_fraction
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("fixed-point census", criterion_1),
        ("eigenvalue closed forms", criterion_2),
        ("invariance suite", criterion_3),
        ("heteroclinic census", criterion_4),
        ("oracle agreement", criterion_5),
        ("basin reproduction", criterion_6),
        ("lyapunov scan", criterion_7),
        ("splay locking", criterion_8),
        ("andronov convergence", criterion_9),
        ("N=4 exploratory run", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        println!(
            "criterion {:>2} {:<24} {}  {detail}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" }
        );
        failed += (!ok) as usize;
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
