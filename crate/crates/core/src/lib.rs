//! Exact quadrature rules for rational functions on circles, the segment
//! `[-1, 1]` and the real line, built from the nodes of finite Blaschke
//! products, together with the sharp Nikol'skii-type inequalities they
//! imply and an independent adaptive integrator to certify both.
//!
//! The layers, bottom-up:
//!
//! - [`rational`]: partial-fraction rational functions and pole profiles.
//! - [`blaschke`]: pole configurations, Blaschke products, weights and the
//!   node solver for `B^s(ζ) = e^{iφ}`.
//! - [`quadrature`]: the rules, their admissibility classes and weights.
//! - [`oracle`]: Gauss–Kronrod reference integration, sharing nothing with
//!   the rules.
//! - [`sharp`]: closed-form norms, extremal functions and inequality
//!   reports.
//! - [`verify`]: seeded verification suites and run manifests.

pub mod blaschke;
pub mod chebyshev;
pub mod error;
pub mod json;
pub mod oracle;
pub mod quadrature;
pub mod rational;
pub mod sharp;
pub mod verify;

pub use num_complex::Complex64;
pub use blaschke::{
    BlaschkeSystem, CirclePoleConfig, Domain, HalfPlanePoleConfig, NodeSet, PoleConfig,
    SegmentPoleConfig,
};
pub use error::{Error, Result};
pub use quadrature::{Admissibility, QuadratureRule, RuleKind};
pub use rational::{Evaluate, PartialFractionTerm, Pole, RationalFunction, SimplePartialFraction};
