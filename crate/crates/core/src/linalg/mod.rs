// SPDX-License-Identifier: Apache-2.0

//! Dense linear algebra for the small systems in this crate.

mod eigen;
mod lyapunov;
mod matrix;
mod ode;
mod solve;

pub use eigen::{eigenvalues, spectral_abscissa, spectral_radius};
pub use lyapunov::{is_hurwitz, lyapunov_residual, solve_lyapunov, solve_stein, LyapunovSolution};
pub use matrix::{ComplexMatrix, Element, Matrix, RealMatrix};
pub use ode::{covariance_rhs, integrate_covariance_ode, rk4_step};
pub use solve::{inverse, solve, Lu};
