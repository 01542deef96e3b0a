//! Performance analysis of a two-user cooperative NOMA downlink in which the
//! near user acts as a decode-and-forward relay, switching between
//! full-duplex (FD) and half-duplex (HD) operation.
//!
//! The crate has two independent evaluation routes for every metric:
//!
//! * **Analytic** — closed-form and asymptotic outage probabilities
//!   ([`outage`]), ergodic rates ([`rate`]), and the throughput / energy
//!   efficiency compositions built on top of them ([`throughput`]).
//! * **Stochastic** — a reproducible Monte Carlo channel simulator
//!   ([`mc`]) that draws the Rayleigh-faded channel power gains directly and
//!   evaluates outage events and instantaneous rates per realization.
//!
//! [`validation`] cross-checks the two routes; [`special`] holds the numeric
//! kernels (exponential integral, Gauss-Chebyshev nodes, adaptive
//! quadrature) the closed forms are built from.
//!
//! All channel gains, SNRs and powers are linear unless a name carries a
//! `_db` suffix. Rates are in bits per channel use.

pub mod mc;
pub mod model;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod outage;
pub mod rate;
pub mod special;
pub mod throughput;
pub mod validation;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `Ei(x)` would overflow an `f64`; evaluate the product through
    /// [`special::expint_ei_scaled`] instead.
    #[error("Ei({x}) overflows f64; use expint_ei_scaled for exp(a)*Ei(x) products")]
    EiOverflow { x: f64 },

    /// An integrand returned a non-finite sample.
    #[error("integrand returned a non-finite value at x = {abscissa}")]
    NonFiniteIntegrand { abscissa: f64 },

    /// Adaptive quadrature exhausted its subdivision budget before reaching
    /// the requested tolerance. Carries the best estimate and its bound.
    #[error("quadrature did not reach tolerance: estimate {estimate}, error bound {error_bound}")]
    QuadratureAccuracy { estimate: f64, error_bound: f64 },

    /// A truncated series did not meet its tail tolerance within the
    /// configured number of terms. Carries the partial result.
    #[error("series did not converge within {terms} terms (partial value {partial})")]
    SeriesNotConverged { partial: f64, terms: usize },

    /// A `SystemConfig` or control structure violates its invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Convert a decibel quantity to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear quantity to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
