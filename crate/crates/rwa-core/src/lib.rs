//! Randomly weighted averages of beta-distributed inputs, their additive
//! Stieltjes transforms, and a Monte Carlo engine that verifies the
//! closed-form result laws.
//!
//! The central object is the transform `AST[H; d](z) = E[(1 - zX)^{-d}]` of a
//! law H on a compact interval, at order d > 0 and real z with
//! |z| * max(|a|, |b|) < 1. The crate evaluates it by three independent
//! routes (closed form, tanh-sinh quadrature, moment series), multiplies
//! transforms across independent inputs where the product rule
//! `AST[F_S; sum r_i] = prod AST[F_i; r_i]` applies, and tests predicted
//! result laws by transform identities on a z-grid plus KS and moment checks
//! on simulated averages `S = sum V_j X_j`.

// Negated comparisons like `!(err <= tol)` are load-bearing: a NaN
// statistic must land on the rejecting branch, and `err > tol` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dist;
pub mod error;
pub mod quad;
pub mod rng;
pub mod rwa;
pub mod special;
pub mod suite;
pub mod transform;
pub mod verify;

pub use dist::{CompositionSpec, IntervalBeta, PowerSemicircle, WeightVector};
pub use error::{Error, Result};
pub use rwa::{RwaProblem, TheoremPrediction, TheoremSource, WeightPath};
pub use suite::{ReportLine, SuiteReport, Verdict};
pub use transform::{AstQuery, AstValue, Route};
pub use verify::{VerificationReport, VerifyConfig};
