use std::fmt::Write;

use super::reports::{AndronovRow, FixedPointReport, SimulationReport};
use crate::analysis::{SegmentCheck, StabilityClass};

fn class_name(c: StabilityClass) -> &'static str {
    match c {
        StabilityClass::Attractor => "attractor",
        StabilityClass::Repeller => "repeller",
        StabilityClass::Saddle => "saddle",
        StabilityClass::Unclassified => "unclassified",
    }
}

pub fn fixed_point_text_table(r: &FixedPointReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>10} {:>10}  {:>12} {:>12}  {:<10} {:>9}",
        "x", "y", "lambda_1", "lambda_2", "class", "|Omega|"
    );
    for fp in &r.fixed_points {
        let _ = writeln!(
            s,
            "{:>10.6} {:>10.6}  {:>12.9} {:>12.9}  {:<10} {:>9.2e}",
            fp.location.x,
            fp.location.y,
            fp.eigenvalues[0],
            fp.eigenvalues[1],
            class_name(fp.class),
            fp.residual
        );
    }
    let c = r.counts;
    let _ = writeln!(
        s,
        "{} fixed points: {} attractors, {} repellers, {} saddles",
        r.fixed_points.len(),
        c.attractors,
        c.repellers,
        c.saddles
    );
    if !r.non_convergent.is_empty() {
        let _ = writeln!(s, "{} seeds did not converge", r.non_convergent.len());
    }
    s
}

pub fn segment_text_table(checks: &[SegmentCheck]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<12} {:>7} {:>12} {:>10} {:>9}  result",
        "segment", "samples", "max dev", "min r'", "into"
    );
    for c in checks {
        let _ = writeln!(
            s,
            "{:<12} {:>7} {:>12.3e} {:>10.6} {:>9}  {}",
            c.name.to_string(),
            c.samples,
            c.max_deviation,
            c.min_derivative,
            c.maps_into_domain,
            if c.passed { "pass" } else { "FAIL" }
        );
    }
    s
}

pub fn andronov_text_table(rows: &[AndronovRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>5} {:>22} {:>14}", "n", "v_n", "v_n - v_f");
    for r in rows {
        let _ = writeln!(s, "{:>5} {:>22.15} {:>14.3e}", r.n, r.v, r.deviation);
    }
    s
}

pub fn simulation_text_table(r: &SimulationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} runs of {} clocks at eps = {}: {} locked, {} near the splay ({:.1}%)",
        r.runs.len(),
        r.n_clocks,
        r.epsilon,
        r.locked,
        r.near_splay,
        100.0 * r.near_splay_fraction
    );
    let _ = writeln!(
        s,
        "kick order: {} ascending, {} descending, {} other",
        r.ascending, r.descending, r.other_orientation
    );
    for (i, run) in r.runs.iter().enumerate().take(20) {
        let d: Vec<String> = run
            .report
            .state_differences
            .iter()
            .map(|v| format!("{v:.6}"))
            .collect();
        let _ = writeln!(
            s,
            "{:>4}  cycles {:>5}  differences ({})  splay error {:.2e}",
            i,
            run.report.cycles,
            d.join(", "),
            run.report.splay_error
        );
    }
    if r.runs.len() > 20 {
        let _ = writeln!(s, "  ... {} more", r.runs.len() - 20);
    }
    s
}
