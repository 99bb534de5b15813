//! Phase-difference dynamics of three identical clocks hanging from a common
//! support and coupled by the small impacts of their escapements.
//!
//! The state is the pair of phase differences `(x, y) = (ψ₂ − ψ₁, ψ₃ − ψ₁)`
//! in the square `S = [0, 2π]²`, sampled once per cycle of the reference
//! clock. One cycle is the map `F(p) = p + ε·Ω(p)`.
//!
//! - [`map`]: the perturbation, the Adler map, `F`, `Ω` and the Jacobian.
//! - [`andronov`]: the isolated-clock return map.
//! - [`event`]: exact event-driven simulation of `N` clocks.
//! - [`analysis`]: fixed points, invariant segments, heteroclinics and
//!   Lyapunov scans.
//! - [`basin`]: basin-of-attraction rasterization.
//! - [`io`] and [`cli`]: report formats, SVG portraits and the command line.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod andronov;
pub mod basin;
pub mod cli;
pub mod event;
pub mod io;
pub mod linalg;
pub mod map;
pub mod params;
pub mod phase;

pub use linalg::Mat2;
pub use map::{adler_step, jacobian, omega_field, perturbation, three_clock_step};
pub use params::{CouplingParams, ParamError, EPSILON_MAX, EPSILON_MIN};
pub use phase::{Phase, PhasePoint, TWO_PI};
