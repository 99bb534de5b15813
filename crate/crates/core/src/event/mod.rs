//! Exact discrete-event simulation of `N` identical impact-coupled clocks.
//!
//! All clocks advance at unit angular speed. A clock kicks when its phase
//! reaches `2π ≡ 0`; at that instant every other clock `j` receives the phase
//! change `P(ψⱼ − ψₖ)` exactly, with no first-order truncation. One cycle is
//! measured between two consecutive kicks of the reference clock (index 0).
//!
//! Phase convention: a stored phase of exactly `0` means the clock has just
//! kicked (or, at the start of [`run_cycle`], is about to), so its time to the
//! next threshold crossing is a full `2π`.

mod export;
mod lock;

pub use export::{write_trace_csv, write_trace_jsonl};
pub use lock::{run_until_locked, LockReport, Orientation, SPLAY_NEAR_TOL};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::perturbation;
use crate::params::{CouplingParams, ParamError};
use crate::phase::{normalize_angle, Phase, PhasePoint, TWO_PI};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("an ensemble needs at least two clocks, got {0}")]
    TooFewClocks(usize),
    #[error("phase {value} of clock {clock} is not finite")]
    NonFinitePhase { clock: usize, value: f64 },
    #[error("phase differences (x, y) need exactly 3 clocks, got {0}")]
    Dimension(usize),
    #[error("clock {clock} kicked twice in cycle {cycle} before the reference clock closed it")]
    DoubleKick { clock: usize, cycle: usize },
    #[error("clock {clock} did not kick during cycle {cycle}")]
    MissedKick { clock: usize, cycle: usize },
    #[error("ensembles of different sizes in one batch: expected {expected} clocks, got {got}")]
    MixedSizes { expected: usize, got: usize },
    #[error("kicker {0} is out of range")]
    BadKicker(usize),
    #[error(transparent)]
    Params(#[from] ParamError),
}

/// Absolute phases of `N ≥ 2` clocks, each in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClockEnsemble {
    phases: Vec<f64>,
    pub params: CouplingParams,
}

impl ClockEnsemble {
    /// Builds an ensemble, wrapping every phase into `[0, 2π)`.
    pub fn new(phases: Vec<f64>, params: CouplingParams) -> Result<Self, SimError> {
        if phases.len() < 2 {
            return Err(SimError::TooFewClocks(phases.len()));
        }
        for (clock, &value) in phases.iter().enumerate() {
            if !value.is_finite() {
                return Err(SimError::NonFinitePhase { clock, value });
            }
        }
        params.validate()?;
        let phases = phases.into_iter().map(normalize_angle).collect();
        Ok(ClockEnsemble { phases, params })
    }

    /// Three clocks with the reference at the kick threshold and the other two
    /// at phase differences `(x, y)`.
    pub fn from_differences(p: PhasePoint, params: CouplingParams) -> Result<Self, SimError> {
        Self::new(vec![0.0, p.x, p.y], params)
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn n(&self) -> usize {
        self.phases.len()
    }

    /// Differences `ψⱼ − ψ₁ mod 2π` for `j = 2..N`.
    pub fn relative_phases(&self) -> Vec<f64> {
        let r = self.phases[0];
        self.phases[1..]
            .iter()
            .map(|p| normalize_angle(p - r))
            .collect()
    }

    /// Copy with every phase shifted so the reference sits at `0`.
    pub fn rotated_to_reference(&self) -> ClockEnsemble {
        let mut out = self.clone();
        let r = self.phases[0];
        for p in out.phases.iter_mut() {
            *p = normalize_angle(*p - r);
        }
        out.phases[0] = 0.0;
        out
    }
}

/// One kick and its effect on the ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KickEvent {
    pub cycle_index: usize,
    pub kicking_clock: usize,
    /// Elapsed time since the reference clock's kick opening the cycle.
    pub time: f64,
    pub phases_before: Vec<f64>,
    pub phases_after: Vec<f64>,
}

/// All kicks of one reference-clock cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleTrace {
    pub cycle_index: usize,
    pub events: Vec<KickEvent>,
    pub start_state: ClockEnsemble,
    pub end_state: ClockEnsemble,
    /// Time between the opening and the closing kick of the reference clock.
    pub period: f64,
}

impl CycleTrace {
    /// Time of the (first) kick of every clock within the cycle.
    pub fn kick_times(&self) -> Vec<f64> {
        let mut t = vec![f64::NAN; self.start_state.n()];
        for e in &self.events {
            if t[e.kicking_clock].is_nan() {
                t[e.kicking_clock] = e.time;
            }
        }
        t
    }
}

/// Result of [`advance_to_next_kick`].
#[derive(Debug, Clone, PartialEq)]
pub struct NextKick {
    pub ensemble: ClockEnsemble,
    /// Lowest-index clock among those reaching the threshold.
    pub kicker: usize,
    /// Every clock reaching the threshold at this instant, ascending.
    pub tied: Vec<usize>,
    /// Common free-running time shift `δ ∈ (0, 2π]`.
    pub shift: f64,
}

fn time_to_threshold(phase: f64) -> f64 {
    // a clock at exactly 0 has just kicked
    TWO_PI - phase
}

/// Free-run all clocks until the next one reaches the kick threshold.
///
/// Clocks reaching the threshold are left at phase `0`.
pub fn advance_to_next_kick(ensemble: &ClockEnsemble) -> NextKick {
    let (phases, tied, shift) = advance_phases(&ensemble.phases);
    NextKick {
        ensemble: ClockEnsemble {
            phases,
            params: ensemble.params,
        },
        kicker: tied[0],
        tied,
        shift,
    }
}

fn advance_phases(phases: &[f64]) -> (Vec<f64>, Vec<usize>, f64) {
    let shift = phases
        .iter()
        .map(|&p| time_to_threshold(p))
        .fold(f64::INFINITY, f64::min);
    let mut tied = Vec::new();
    let out = phases
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let q = p + shift;
            if time_to_threshold(p) == shift || q >= TWO_PI {
                tied.push(i);
                0.0
            } else {
                q
            }
        })
        .collect();
    (out, tied, shift)
}

/// Apply the kick of clock `kicker` to every other clock, exactly.
pub fn apply_kick(ensemble: &ClockEnsemble, kicker: usize) -> Result<ClockEnsemble, SimError> {
    if kicker >= ensemble.n() {
        return Err(SimError::BadKicker(kicker));
    }
    let mut out = ensemble.clone();
    kick_in_place(&mut out.phases, kicker, &ensemble.params);
    Ok(out)
}

/// Returns the clocks pushed across the threshold by this kick.
fn kick_in_place(phases: &mut [f64], kicker: usize, params: &CouplingParams) -> Vec<usize> {
    let source = phases[kicker];
    let mut crossed = Vec::new();
    for (j, p) in phases.iter_mut().enumerate() {
        if j == kicker {
            continue;
        }
        let moved = *p + perturbation(Phase(*p - source), params);
        *p = if moved >= TWO_PI {
            crossed.push(j);
            normalize_angle(moved - TWO_PI)
        } else if moved < 0.0 {
            normalize_angle(moved + TWO_PI)
        } else {
            moved
        };
    }
    crossed
}

/// One full cycle of the reference clock.
///
/// The ensemble is first rotated so the reference clock sits at the kick
/// threshold; it kicks first, followed in ascending index by any clock tied
/// with it. Clocks then kick in order of arrival at the threshold until the
/// reference clock arrives again, which closes the cycle (its kick belongs to
/// the next cycle). The end state has the reference back at `0`.
pub fn run_cycle(ensemble: &ClockEnsemble, cycle_index: usize) -> Result<CycleTrace, SimError> {
    let start = ensemble.rotated_to_reference();
    let n = start.n();
    let params = start.params;
    let mut phases = start.phases.clone();
    let mut fired = vec![false; n];
    let mut events = Vec::with_capacity(n);
    let mut time = 0.0;
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| phases[i] == 0.0).collect();

    loop {
        while let Some(k) = queue.pop_front() {
            if fired[k] {
                return Err(SimError::DoubleKick {
                    clock: k,
                    cycle: cycle_index,
                });
            }
            fired[k] = true;
            let before = phases.clone();
            for j in kick_in_place(&mut phases, k, &params) {
                if !queue.contains(&j) {
                    queue.push_back(j);
                }
            }
            events.push(KickEvent {
                cycle_index,
                kicking_clock: k,
                time,
                phases_before: before,
                phases_after: phases.clone(),
            });
        }

        let (next, tied, shift) = advance_phases(&phases);
        phases = next;
        time += shift;
        if tied.contains(&0) {
            if let Some(clock) = fired.iter().position(|f| !f) {
                return Err(SimError::MissedKick {
                    clock,
                    cycle: cycle_index,
                });
            }
            return Ok(CycleTrace {
                cycle_index,
                events,
                start_state: start,
                end_state: ClockEnsemble { phases, params },
                period: time,
            });
        }
        queue.extend(tied);
    }
}

/// `(ψ₂ − ψ₁ mod 2π, ψ₃ − ψ₁ mod 2π)` of a three-clock ensemble.
pub fn phase_differences(ensemble: &ClockEnsemble) -> Result<PhasePoint, SimError> {
    if ensemble.n() != 3 {
        return Err(SimError::Dimension(ensemble.n()));
    }
    let r = ensemble.relative_phases();
    Ok(PhasePoint::new(r[0], r[1]))
}

/// One exact cycle starting from phase differences `p`, returned as phase
/// differences. This is the event-driven counterpart of `three_clock_step`.
pub fn exact_cycle_map(p: PhasePoint, params: &CouplingParams) -> Result<PhasePoint, SimError> {
    let ens = ClockEnsemble::from_differences(p, *params)?;
    phase_differences(&run_cycle(&ens, 0)?.end_state)
}
