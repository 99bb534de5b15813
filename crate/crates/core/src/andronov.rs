//! Return map of an isolated dry-friction clock at its Poincaré section
//! (velocity measured just after the escapement kick).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::CouplingParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AndronovError {
    #[error("velocity {v} is not above 4·mu = {limit}; the clock stops before the next kick")]
    Stopped { v: f64, limit: f64 },
    #[error("invalid clock constants: mu = {mu}, h = {h}")]
    Constants { mu: f64, h: f64 },
}

/// Velocity `v` at the section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AndronovState {
    pub v: f64,
}

/// `v ↦ sqrt((v − 4μ)² + h²)`.
///
/// `mu = 0` (no friction) is accepted as the degenerate limit.
pub fn andronov_step(
    state: AndronovState,
    params: &CouplingParams,
) -> Result<AndronovState, AndronovError> {
    let (mu, h) = (params.mu, params.h);
    if !(mu >= 0.0 && h > 0.0 && mu.is_finite() && h.is_finite()) {
        return Err(AndronovError::Constants { mu, h });
    }
    let limit = 4.0 * mu;
    if !(state.v > limit) {
        return Err(AndronovError::Stopped { v: state.v, limit });
    }
    Ok(AndronovState {
        v: (state.v - limit).hypot(h),
    })
}

/// The attracting velocity `h²/(8μ) + 2μ`.
pub fn andronov_fixed_point(params: &CouplingParams) -> Result<AndronovState, AndronovError> {
    let (mu, h) = (params.mu, params.h);
    if !(mu > 0.0 && h > 0.0 && mu.is_finite() && h.is_finite()) {
        return Err(AndronovError::Constants { mu, h });
    }
    Ok(AndronovState {
        v: h * h / (8.0 * mu) + 2.0 * mu,
    })
}

/// Iterate the return map `steps` times; the first entry is `v0`.
pub fn andronov_orbit(
    v0: f64,
    params: &CouplingParams,
    steps: usize,
) -> Result<Vec<f64>, AndronovError> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut s = AndronovState { v: v0 };
    // validate v0 even for zero steps
    andronov_step(s, params)?;
    out.push(v0);
    for _ in 0..steps {
        s = andronov_step(s, params)?;
        out.push(s.v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clock(mu: f64, h: f64) -> CouplingParams {
        CouplingParams::new(0.0).with_clock(mu, h)
    }

    #[test]
    fn step_examples() {
        let p = clock(0.0, 4.0);
        assert_eq!(andronov_step(AndronovState { v: 3.0 }, &p).unwrap().v, 5.0);
        let p = clock(0.1, 1.0);
        let v = andronov_step(AndronovState { v: 2.0 }, &p).unwrap().v;
        assert!((v - (1.6f64 * 1.6 + 1.0).sqrt()).abs() < 1e-15);
        assert!((v - 1.886796).abs() < 1e-6);
    }

    #[test]
    fn fixed_point_examples() {
        let vf = andronov_fixed_point(&clock(0.1, 1.0)).unwrap().v;
        assert!((vf - 1.45).abs() < 1e-15);
        let vf = andronov_fixed_point(&clock(0.125, 1.0)).unwrap().v;
        assert!((vf - 1.25).abs() < 1e-15);
        for (mu, h) in [(0.1, 1.0), (0.125, 1.0), (0.03, 0.7)] {
            let p = clock(mu, h);
            let vf = andronov_fixed_point(&p).unwrap();
            let next = andronov_step(vf, &p).unwrap();
            assert!((next.v - vf.v).abs() < 1e-14 * vf.v);
        }
    }

    #[test]
    fn domain_errors() {
        let p = clock(0.1, 1.0);
        assert!(matches!(
            andronov_step(AndronovState { v: 0.4 }, &p),
            Err(AndronovError::Stopped { .. })
        ));
        assert!(andronov_step(AndronovState { v: 0.3 }, &p).is_err());
        assert!(andronov_fixed_point(&clock(0.0, 1.0)).is_err());
        assert!(andronov_orbit(0.4, &p, 0).is_err());
    }

    #[test]
    fn convergence_is_monotone() {
        for (mu, h) in [(0.1, 1.0), (0.125, 1.0)] {
            let p = clock(mu, h);
            let vf = andronov_fixed_point(&p).unwrap().v;
            for v0 in [4.0 * mu + 0.01, 10.0, 100.0] {
                let orbit = andronov_orbit(v0, &p, 400).unwrap();
                let errs: Vec<f64> = orbit.iter().map(|v| (v - vf).abs()).collect();
                for w in errs.windows(2) {
                    assert!(w[1] <= w[0] + 1e-15, "non-monotone from v0={v0}");
                }
                assert!(*errs.last().unwrap() < 1e-10);
            }
        }
    }
}
