//! Phantom numbers and phantom probability.
//!
//! A phantom number is `a + p*b` with `p * p = p`. This crate provides the
//! ring arithmetic, calculus along paths, finite phantom probability
//! measures, phantom random variables, the named distributions, checkable
//! inequalities, Monte-Carlo verification of the limit theorems, and the
//! expression language used by the `phantom` command-line tool.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod limits;
pub mod measure;
pub mod randvar;
pub mod ring;

pub use error::{PhantomError, Result};
pub use ring::{compare, Comparison, OrderKind, Phantom, SignClass};
