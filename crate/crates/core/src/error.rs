// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the solvers.
///
/// Numeric payloads are carried as `f64` so the error type does not depend
/// on the scalar type of the computation that raised it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unstable drive ratio: G+ = {g_plus} must be below G- = {g_minus}")]
    UnstableRatio { g_plus: f64, g_minus: f64 },

    #[error("drift matrix is not Hurwitz (largest eigenvalue real part {max_real_part})")]
    NotHurwitz { max_real_part: f64 },

    #[error("linear system is numerically singular")]
    SingularSystem,

    #[error("frequency response is singular at omega = {omega}")]
    SingularResponse { omega: f64 },

    #[error("non-finite value encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error(
        "time-periodic dynamics are unstable (largest Floquet multiplier modulus {multiplier})"
    )]
    ParametricInstability { multiplier: f64 },

    #[error("periodic steady state not converged after {periods} periods (last change {change})")]
    NotConverged { periods: usize, change: f64 },

    #[error("reduced master-equation dynamics are unstable (gamma_down = {gamma_down}, gamma_up = {gamma_up})")]
    UnstableReduced { gamma_down: f64, gamma_up: f64 },

    #[error("quadrature did not converge (last tail contribution {tail})")]
    QuadratureNotConverged { tail: f64 },

    #[error("no interior minimum: best value {value} found at bound ratio {ratio}")]
    NoInteriorMinimum { ratio: f64, value: f64 },
}

impl Error {
    /// True for errors caused by bad user input rather than numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::UnstableRatio { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn to_f64<T: num_traits::ToPrimitive>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
