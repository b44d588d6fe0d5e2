//! Effective cohesive (traction–separation) laws of one-dimensional
//! phase-field fracture models.
//!
//! The crate has two halves that are inverses of each other:
//!
//! * [`forward`] evaluates everything a phase-field model determines: the
//!   jump threshold `Φ`, optimal transition profiles, the reduced energies,
//!   and the cohesive law `g` with its derivative.
//! * [`reconstruct`] goes the other way: given a target cohesive law it
//!   solves an Abel integral equation for the missing model ingredient
//!   (damage potential or degradation profile).
//!
//! [`catalog`] holds the closed-form laws and paired ingredients used as
//! ground truth, [`oracle`] re-computes `g` by direct minimization of the
//! discretized profile functional (no Euler–Lagrange shortcuts), and
//! [`numerics`] is the shared substrate: adaptive quadrature aware of
//! endpoint square-root singularities, Brent root finding, shape-preserving
//! tabulation and lower convex envelopes.

pub mod acceptance;
pub mod catalog;
pub mod error;
pub mod forward;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod reconstruct;

pub use error::{Error, Result};
