//! Variance-sensitive confidence bounds for bounded losses, and model
//! selection by sample variance penalization.
//!
//! * [`stats`]: `[0,1]`-valued samples, loss matrices, mean and unbiased variance.
//! * [`bounds`]: Hoeffding, Bennett and empirical Bernstein radii, standard
//!   deviation radii and sample-variance tail bounds.
//! * [`learners`]: ERM and SVP selection, the regularization prescription and
//!   the excess-risk certificate.
//! * [`compression`]: sample compression with variance penalization.
//! * [`experiments`]: seeded, parallel Monte Carlo experiments and coverage checks.
//! * [`report`]: CSV formats.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod compression;
mod error;
pub mod experiments;
pub mod learners;
pub mod normal;
pub mod report;
pub mod stats;

pub use bounds::{BoundKind, ClassComplexity, ConfidenceRadius};
pub use error::{Error, Result};
pub use learners::{CertificateMode, ExcessRiskCertificate, Selection};
pub use stats::{LossMatrix, Sample};
