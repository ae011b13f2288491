// SPDX-License-Identifier: Apache-2.0

//! Dissipative squeezing of a mechanical resonator by two-tone driving of an
//! optomechanical cavity.
//!
//! The crate computes Gaussian steady states of the linearised model in the
//! rotating-wave approximation ([`rwa`]), under the reduced master equation
//! ([`lindblad`]) and with the full time-periodic drive ([`floquet`]); it also
//! evaluates cavity output spectra ([`spectra`]) and optimizes the blue/red
//! drive ratio ([`optimize`]).
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`). The aliases at
//! the crate root fix `f64`.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod floquet;
pub mod linalg;
pub mod lindblad;
pub mod model;
pub mod optimize;
pub mod rwa;
pub mod scalar;
pub mod spectra;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Params = model::SystemParams<f64>;
pub type Derived = model::DerivedQuantities<f64>;
pub type Report = rwa::SteadyStateReport<f64>;
pub type Matrix64 = linalg::RealMatrix<f64>;
pub type Spectrum = spectra::SpectrumSeries<f64>;
pub type Floquet = floquet::FloquetResult<f64>;
pub type Record = optimize::SweepRecord<f64>;
