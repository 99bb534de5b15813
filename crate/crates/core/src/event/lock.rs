use serde::{Deserialize, Serialize};

use super::{run_cycle, ClockEnsemble, CycleTrace, SimError};
use crate::phase::{normalize_angle, TWO_PI};

/// A configuration counts as "near the splay" when every normalised gap
/// between consecutive kicks is within this of `2π/N`.
pub const SPLAY_NEAR_TOL: f64 = 1e-3;

/// Cyclic order in which the clocks kick, read from the reference clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// 1, 2, 3, …, N. For three clocks this is the lower attractor
    /// `(4π/3, 2π/3)`.
    Ascending,
    /// 1, N, N−1, …, 2. For three clocks this is the upper attractor
    /// `(2π/3, 4π/3)`.
    Descending,
    /// Anything else, including simultaneous kicks.
    Other,
}

/// Outcome of [`run_until_locked`].
///
/// Two views of the final configuration are reported. `state_differences`
/// are the instantaneous phase differences `ψⱼ − ψ₁` right before the
/// reference kick. `kick_phases` are timing phases: clock `j` kicking at time
/// `tⱼ` of a cycle of length `T` has timing phase `−2π·tⱼ/T mod 2π`. The exact
/// system locks to an equal spacing of kick times; the instantaneous state is
/// offset from it at order `ε` because the kicks themselves move the phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LockReport {
    pub final_state: ClockEnsemble,
    pub cycles: usize,
    pub locked: bool,
    /// Last per-cycle movement of the phase-difference vector (∞-norm).
    pub last_movement: f64,
    pub state_differences: Vec<f64>,
    pub kick_phases: Vec<f64>,
    /// Clocks sorted by kick time within the final cycle, starting with 0.
    pub kick_order: Vec<usize>,
    /// Normalised gaps `2π·Δt/T` between consecutive kicks in `kick_order`.
    pub cyclic_gaps: Vec<f64>,
    pub orientation: Orientation,
    /// `max |gap − 2π/N|`.
    pub splay_error: f64,
    pub near_splay: bool,
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(TWO_PI - d)
}

/// Iterate [`run_cycle`] until the ensemble phase locks.
///
/// A run counts as locked once the per-cycle movement `m` is below `tol`
/// *and* the geometric-tail estimate `m·r/(1−r)` of the remaining distance
/// (with `r` the ratio of the last two movements) is below `tol` too, so the
/// reported configuration is within about `tol` of the limit rather than
/// merely slow. The movement is the larger of the change in the
/// phase-difference vector and the change in the normalised kick gaps, since
/// the gaps are what gets compared with the splay. Reaching `max_cycles` is
/// not an error; `locked` is then false.
pub fn run_until_locked(
    ensemble: &ClockEnsemble,
    tol: f64,
    max_cycles: usize,
) -> Result<LockReport, SimError> {
    let mut state = ensemble.rotated_to_reference();
    let mut prev = state.relative_phases();
    let mut prev_gaps: Option<Vec<f64>> = None;
    let mut prev_move = f64::INFINITY;
    let mut last_trace: Option<CycleTrace> = None;
    let mut locked = false;
    let mut cycles = 0;
    let mut movement = f64::INFINITY;

    while cycles < max_cycles {
        let trace = run_cycle(&state, cycles)?;
        cycles += 1;
        state = trace.end_state.clone();
        let rel = state.relative_phases();
        movement = rel
            .iter()
            .zip(&prev)
            .map(|(a, b)| circular_distance(*a, *b))
            .fold(0.0, f64::max);
        let gaps = kick_gaps(&trace).1;
        movement = match &prev_gaps {
            Some(g) => gaps
                .iter()
                .zip(g)
                .map(|(a, b)| (a - b).abs())
                .fold(movement, f64::max),
            None => f64::INFINITY,
        };
        last_trace = Some(trace);
        let ratio = movement / prev_move;
        if movement == 0.0
            || (movement < tol && ratio < 1.0 && movement * ratio / (1.0 - ratio) < tol)
        {
            locked = true;
            break;
        }
        prev = rel;
        prev_gaps = Some(gaps);
        prev_move = movement;
    }

    let trace = match last_trace {
        Some(t) => t,
        None => run_cycle(&state, 0)?,
    };
    Ok(summarize(&state, &trace, cycles, locked, movement))
}

/// Clocks sorted by kick time within the cycle, and the normalised gaps
/// between consecutive kicks in that order.
fn kick_gaps(trace: &CycleTrace) -> (Vec<usize>, Vec<f64>) {
    let times = trace.kick_times();
    let n = times.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]).then(a.cmp(&b)));
    let gaps = (0..n)
        .map(|k| {
            let t0 = times[order[k]];
            let t1 = if k + 1 < n {
                times[order[k + 1]]
            } else {
                trace.period
            };
            TWO_PI * (t1 - t0) / trace.period
        })
        .collect();
    (order, gaps)
}

fn summarize(
    state: &ClockEnsemble,
    trace: &CycleTrace,
    cycles: usize,
    locked: bool,
    last_movement: f64,
) -> LockReport {
    let n = state.n();
    let period = trace.period;
    let times = trace.kick_times();
    let kick_phases = times[1..]
        .iter()
        .map(|t| normalize_angle(-TWO_PI * t / period))
        .collect();

    let (kick_order, cyclic_gaps) = kick_gaps(trace);
    let target = TWO_PI / n as f64;
    let splay_error = cyclic_gaps
        .iter()
        .map(|g| (g - target).abs())
        .fold(0.0, f64::max);

    let ascending: Vec<usize> = (0..n).collect();
    let descending: Vec<usize> = std::iter::once(0).chain((1..n).rev()).collect();
    let simultaneous = cyclic_gaps.contains(&0.0);
    let orientation = if simultaneous {
        Orientation::Other
    } else if kick_order == ascending {
        Orientation::Ascending
    } else if kick_order == descending {
        Orientation::Descending
    } else {
        Orientation::Other
    };

    LockReport {
        final_state: state.clone(),
        cycles,
        locked,
        last_movement,
        state_differences: state.relative_phases(),
        kick_phases,
        kick_order,
        cyclic_gaps,
        orientation,
        splay_error,
        near_splay: splay_error < SPLAY_NEAR_TOL,
    }
}
