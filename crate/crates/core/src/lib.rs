//! Inference for two-cause exponential competing-risks data observed under an
//! improved adaptive type-II progressive censoring scheme (IAT-II PCS).
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: the latent exponential failure-time law.
//! - [`censoring`]: experiment plans, sample generation and Case I/II/III classification.
//! - [`estimate`]: maximum likelihood, observed information and asymptotic intervals.
//! - [`bayes`]: conjugate gamma posteriors, SELF/LINEX/GELF estimators and HPD intervals.
//! - [`montecarlo`]: seeded, parallel replication of the bias/MSE/coverage study.
//! - [`dataset`]: CSV ingestion and export, plus the embedded mouse-mortality data.

// `!(x < y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bayes;
pub mod censoring;
pub mod dataset;
pub mod estimate;
pub mod model;
pub mod montecarlo;

mod error;
mod special;

pub use error::{Error, Result};
