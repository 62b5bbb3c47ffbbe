//! Extended-Hamiltonian adiabatic search.
//!
//! The initial and final Hamiltonians are built from identity, the two
//! projectors `|psi><psi|`, `|alpha><alpha|` and their cross terms, so the
//! whole problem lives in a two-dimensional invariant subspace plus a
//! degenerate bulk. The crate computes the gap polynomial of
//! `H(s) = (1 - s) H_i + s H_f` in closed form, checks it against dense
//! diagonalization, sizes global and local schedules from the adiabatic
//! condition, integrates the evolution and fits running-time exponents.
//!
//! Modules, bottom up:
//!
//! - [`model`]: instances, coefficient validation, presets, config text
//! - [`spectral`]: gap polynomial, minimum gap, 2x2 block, dense oracle
//! - [`schedule`]: `<dH/ds>` modes, time bounds, schedules, area checks
//! - [`dynamics`]: two-level and dense propagation, success probability
//! - [`experiments`]: sweeps, log-log fits, CSV/SVG reports
//! - [`verify`]: seeded random suites for the oracle comparison

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod format;
pub mod model;
pub mod quadrature;
pub mod schedule;
pub mod spectral;
pub mod two_level;
pub mod verify;

pub use error::{Error, Result};
pub use model::{CoefficientSet, Coefficients, GapParameters, Preset, ProblemInstance};
pub use schedule::{MatrixElementMode, Schedule, ScheduleKind};
pub use spectral::GapPolynomial;
