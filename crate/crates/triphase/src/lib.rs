//! Simulation and estimation toolkit for two-phase interferometry on three
//! bosonic modes.
//!
//! A probe state (an N-particle W-type state or a separable Fock state) is
//! sent through a balanced three-mode splitter (a "tritter"), each output arm
//! is optionally squeezed, and two of the arms pick up the phases to be
//! estimated. The crate provides two independent engines for the photon-number
//! statistics of the output state:
//!
//! * [`cfpoly`] — an exact sparse-polynomial representation of the normally
//!   ordered characteristic function, evolved by linear substitutions in phase
//!   space; and
//! * [`focksim`] — a brute-force truncated Fock-space simulation used as a
//!   numerical oracle.
//!
//! On top of the moments ([`moments`]), [`estimation`] builds the quantum
//! Fisher information matrix and the two-phase quantum Cramér-Rao bound,
//! including a variational lower bound under photon loss. [`scenario`] and
//! [`report`] drive parameter sweeps and emit CSV tables and SVG plots;
//! [`acceptance`] bundles the end-to-end correctness criteria that `selftest`
//! and the integration suite run.

pub mod acceptance;
pub mod cfpoly;
pub mod estimation;
pub mod focksim;
pub mod moments;
pub mod report;
pub mod scenario;

pub use cfpoly::{CFPoly, LinearMap};
pub use estimation::{LossModel, QFIMatrix};
pub use focksim::FockState3;
pub use moments::MomentSet;
pub use scenario::{Engine, Probe, Row, ScenarioConfig, SigmaMode};
