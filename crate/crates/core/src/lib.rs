//! Optimal crowdsourcing contests.
//!
//! A crowdsourcing contest is an all-pay auction whose principal only values
//! the best submission. This crate computes the contest that maximizes the
//! expected maximum payment for i.i.d. skills: the max-payment virtual value,
//! its ironing in quantile space, the symmetric equilibrium bids, forbidden bid
//! intervals, and exact and Monte Carlo evaluation of maximum payment and
//! revenue.
//!
//! ```
//! use crowdcontest::{contest, Distribution};
//!
//! let d = Distribution::uniform(0.0, 1.0).unwrap();
//! let c = contest::design_optimal_contest(&d, 5).unwrap();
//! let mp = contest::expected_max_payment(&d, 5, &c).unwrap();
//! assert!((mp - 5.0 / 12.0).abs() < 1e-6);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contest;
pub mod distributions;
pub mod equilibrium;
pub mod error;
pub mod io;
pub mod ironing;
pub mod numeric;
pub mod repro;
pub mod simulation;
pub mod virtual_values;

pub use contest::{ContestSpec, EvaluationReport};
pub use distributions::{Distribution, DistributionSpec};
pub use error::{Error, Result};
