//! Federated one-class SVM anomaly detection.
//!
//! Clients train Gaussian-kernel one-class SVMs on the dual with projected
//! stochastic gradient ascent, exchange kernel-space coefficient vectors with
//! a server that averages only the clients at or below the median loss, and
//! finally prune their support vectors to those on the surface of the local
//! data.
//!
//! Modules, bottom up:
//! - [`kernel`]: Gaussian kernel, median-heuristic bandwidth, Gram matrices
//! - [`ocsvm`]: dual training, offset, decision function
//! - [`oracle`]: independent reference solver for the dual
//! - [`federated`]: round protocol and aggregation policies
//! - [`personalize`]: edge support-vector selection
//! - [`data`], [`eval`], [`experiment`]: ingestion, metrics, experiment runner

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod eval;
pub mod experiment;
pub mod federated;
pub mod kernel;
pub mod ocsvm;
pub mod oracle;
pub mod personalize;

pub use error::{Error, Result};
