//! Ranked-amplitude P&L analysis of risk premia.
//!
//! The central estimator is [`skew::zeta_star`], a low-moment skewness
//! measure read off the curve of cumulated returns sorted by amplitude.
//! Around it sit the series algebra that prepares strategy returns, exact
//! synthetic distributions that make the estimators checkable, long-short
//! portfolio construction, and the cross-sectional Sharpe-versus-skew
//! analysis.

pub mod analysis;
pub mod error;
pub mod io;
pub mod portfolio;
pub mod quad;
pub mod report;
pub mod series;
pub mod skew;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use series::{Period, RateSeries, ReturnSeries};
