// SPDX-License-Identifier: Apache-2.0

//! Continuous-time Lyapunov equation `A V + V Aᵀ + D = 0`.
//!
//! The equation is vectorised into the `n² × n²` system
//! `(A ⊗ I + I ⊗ A) vec(V) = -vec(D)` (row-major `vec`) and solved densely.
//! For the 4×4 problems in this crate that is a 16×16 solve.

use serde::{Deserialize, Serialize};

use super::eigen::spectral_abscissa;
use super::matrix::RealMatrix;
use super::solve::Lu;
use crate::error::{to_f64, Error, Result};
use crate::scalar::Real;

/// Steady-state covariance together with the achieved residual.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LyapunovSolution<T> {
    /// Symmetric solution.
    pub v: RealMatrix<T>,
    /// `max |A V + V Aᵀ + D|` after symmetrisation.
    pub residual_norm: T,
}

/// True iff every eigenvalue of `a` has real part below `-T::hurwitz_margin()`.
pub fn is_hurwitz<T: Real>(a: &RealMatrix<T>) -> bool {
    match spectral_abscissa(a) {
        Ok(x) => x < -T::hurwitz_margin(),
        Err(_) => false,
    }
}

/// `A V + V Aᵀ + D`.
pub fn lyapunov_residual<T: Real>(
    a: &RealMatrix<T>,
    v: &RealMatrix<T>,
    d: &RealMatrix<T>,
) -> RealMatrix<T> {
    let av = a * v;
    let vat = v * &a.transpose();
    &(&av + &vat) + d
}

fn vectorised_operator<T: Real>(a: &RealMatrix<T>) -> RealMatrix<T> {
    let n = a.rows();
    let mut op = RealMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                // (A V)_ij picks V_kj, (V Aᵀ)_ij picks V_ik
                op[(row, k * n + j)] += a[(i, k)];
                op[(row, i * n + k)] += a[(j, k)];
            }
        }
    }
    op
}

/// Solves `A V + V Aᵀ + D = 0` for a Hurwitz `A`.
pub fn solve_lyapunov<T: Real>(
    a: &RealMatrix<T>,
    d: &RealMatrix<T>,
) -> Result<LyapunovSolution<T>> {
    assert!(
        a.is_square() && d.is_square() && a.rows() == d.rows(),
        "dimension mismatch"
    );
    let abscissa = spectral_abscissa(a)?;
    if !(abscissa < -T::hurwitz_margin()) {
        return Err(Error::NotHurwitz {
            max_real_part: to_f64(abscissa),
        });
    }
    let n = a.rows();
    let lu = Lu::factor(&vectorised_operator(a))?;
    let rhs: Vec<T> = d.as_slice().iter().map(|&x| -x).collect();
    let mut x = lu.solve(&rhs);

    // one round of iterative refinement
    let mut v = RealMatrix::from_fn(n, n, |i, j| x[i * n + j]);
    let res = lyapunov_residual(a, &v, d);
    let corr = lu.solve(&res.as_slice().iter().map(|&r| -r).collect::<Vec<_>>());
    for (xi, ci) in x.iter_mut().zip(corr) {
        *xi += ci;
    }
    v = RealMatrix::from_fn(n, n, |i, j| x[i * n + j]);
    v.symmetrize();
    if !v.is_finite() {
        return Err(Error::SingularSystem);
    }
    let residual_norm = lyapunov_residual(a, &v, d).max_abs();
    Ok(LyapunovSolution { v, residual_norm })
}

/// Solves the discrete Lyapunov (Stein) equation `V = Φ V Φᵀ + Q`.
///
/// Used for periodic steady states, where `Φ` is the one-period propagator.
/// Requires the spectral radius of `Φ` to be below one.
pub fn solve_stein<T: Real>(phi: &RealMatrix<T>, q: &RealMatrix<T>) -> Result<RealMatrix<T>> {
    let n = phi.rows();
    let op = &RealMatrix::identity(n * n) - &phi.kron(phi);
    let x = Lu::factor(&op)?.solve(q.as_slice());
    let mut v = RealMatrix::from_fn(n, n, |i, j| x[i * n + j]);
    v.symmetrize();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn scaled_identity() {
        let a = Matrix::<f64>::identity(4).scale(-0.5);
        let d = Matrix::<f64>::identity(4).scale(0.5);
        let sol = solve_lyapunov(&a, &d).unwrap();
        assert!((&sol.v - &Matrix::identity(4).scale(0.5)).max_abs() < 1e-15);
    }

    #[test]
    fn lower_triangular_two_by_two() {
        // hand elimination: -2 v11 + 1 = 0, v11 - 3 v12 = 0, 2 v12 - 4 v22 + 1 = 0
        let a = Matrix::from_rows(&[[-1.0, 0.0], [1.0, -2.0]]);
        let d = Matrix::<f64>::identity(2);
        let v = solve_lyapunov(&a, &d).unwrap().v;
        assert!((v[(0, 0)] - 0.5).abs() < 1e-14);
        assert!((v[(0, 1)] - 1.0 / 6.0).abs() < 1e-14);
        assert!((v[(1, 0)] - 1.0 / 6.0).abs() < 1e-14);
        assert!((v[(1, 1)] - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn zero_diffusion_gives_zero() {
        let a = Matrix::from_rows(&[[-1.0, 3.0], [-3.0, -0.1]]);
        let v = solve_lyapunov(&a, &Matrix::zeros(2, 2)).unwrap().v;
        assert_eq!(v.max_abs(), 0.0);
    }

    #[test]
    fn non_hurwitz_rejected() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        assert!(!is_hurwitz(&a));
        assert!(matches!(
            solve_lyapunov(&a, &Matrix::identity(2)),
            Err(Error::NotHurwitz { .. })
        ));
        assert!(is_hurwitz(&Matrix::<f64>::identity(3).scale(-1.0)));
    }

    #[test]
    fn stein_matches_series() {
        let phi = Matrix::from_rows(&[[0.5, 0.1], [0.0, 0.3]]);
        let q = Matrix::<f64>::identity(2);
        let v = solve_stein(&phi, &q).unwrap();
        // sum_k Φ^k Q Φᵀ^k
        let mut acc = Matrix::zeros(2, 2);
        let mut term = q.clone();
        for _ in 0..200 {
            acc = &acc + &term;
            term = &(&phi * &term) * &phi.transpose();
        }
        assert!((&v - &acc).max_abs() < 1e-13);
    }
}
