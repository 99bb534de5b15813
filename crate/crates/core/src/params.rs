//! Coupling and clock parameters.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on the coupling strength below which the three-clock map is a
/// homeomorphism of the square and every analysis result holds.
pub const EPSILON_MAX: f64 = 1.0 / 9.0;

/// Below this the map is too close to the identity for any classification.
pub const EPSILON_MIN: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("epsilon = {0} must be finite and non-negative")]
    NegativeEpsilon(f64),
    #[error(
        "epsilon = {0} is not below ε₀ = 1/9; the map is not guaranteed to be a homeomorphism of S"
    )]
    EpsilonTooLarge(f64),
    #[error("epsilon = {0} is below {EPSILON_MIN:e}; the map is non-hyperbolic (identity limit)")]
    EpsilonTooSmall(f64),
    #[error("friction coefficient mu = {0} must be > 0")]
    Mu(f64),
    #[error("kick velocity scale h = {0} must be > 0")]
    H(f64),
    #[error("interaction constant alpha = {0} must be >= 0")]
    Alpha(f64),
}

/// Coupling strength `ε` plus the clock constants it summarises.
///
/// `ε` is the only parameter the phase-difference dynamics depends on. The
/// dry-friction coefficient `mu`, the kick scale `h` and the interaction
/// constant `alpha` are only consumed by the isolated-clock return map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub epsilon: f64,
    pub mu: f64,
    pub h: f64,
    pub alpha: f64,
    /// Natural angular frequency; all clocks are identical and this stays 1.
    pub omega: f64,
}

impl Default for CouplingParams {
    fn default() -> Self {
        CouplingParams {
            epsilon: 0.05,
            mu: 0.1,
            h: 1.0,
            alpha: 0.0,
            omega: 1.0,
        }
    }
}

impl CouplingParams {
    pub fn new(epsilon: f64) -> Self {
        CouplingParams {
            epsilon,
            ..Default::default()
        }
    }

    pub fn with_clock(mut self, mu: f64, h: f64) -> Self {
        self.mu = mu;
        self.h = h;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Basic sanity: `ε ≥ 0`, `mu > 0`, `h > 0`, `alpha ≥ 0`.
    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(ParamError::NegativeEpsilon(self.epsilon));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(ParamError::Mu(self.mu));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(ParamError::H(self.h));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(ParamError::Alpha(self.alpha));
        }
        Ok(())
    }

    /// Requirements of every analysis operation: `ε ∈ [1e-8, 1/9)`.
    pub fn validate_for_analysis(&self) -> Result<(), ParamError> {
        self.validate()?;
        if self.epsilon >= EPSILON_MAX {
            return Err(ParamError::EpsilonTooLarge(self.epsilon));
        }
        if self.epsilon < EPSILON_MIN {
            return Err(ParamError::EpsilonTooSmall(self.epsilon));
        }
        Ok(())
    }
}
