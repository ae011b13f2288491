// SPDX-License-Identifier: Apache-2.0

//! LU factorisation with partial pivoting for real and complex systems.

use num_traits::Zero;

use super::matrix::{Element, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// LU factors of a square matrix, `P A = L U`, stored compactly.
#[derive(Debug, Clone)]
pub struct Lu<E> {
    lu: Matrix<E>,
    perm: Vec<usize>,
}

impl<E: Element> Lu<E> {
    /// Factorises `a`.
    ///
    /// Fails with [`Error::SingularSystem`] when a pivot falls below
    /// `singular_pivot() * max|a|`.
    pub fn factor(a: &Matrix<E>) -> Result<Self> {
        assert!(a.is_square(), "LU needs a square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        if scale == E::Real::zero() && n > 0 {
            return Err(Error::SingularSystem);
        }
        let threshold = scale * <E::Real as Real>::singular_pivot();

        for k in 0..n {
            let (p, pivot_mod) = (k..n).map(|i| (i, lu[(i, k)].modulus())).fold(
                (k, E::Real::zero()),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
            if !(pivot_mod > threshold) {
                return Err(Error::SingularSystem);
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == E::zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[E]) -> Vec<E> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<E> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[(i, k)] * x[k];
                x[i] -= l;
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let u = self.lu[(i, k)] * x[k];
                x[i] -= u;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Solves for every column of `b`.
    pub fn solve_matrix(&self, b: &Matrix<E>) -> Matrix<E> {
        let n = self.lu.rows();
        assert_eq!(b.rows(), n);
        let mut out = Matrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let col: Vec<E> = (0..n).map(|i| b[(i, j)]).collect();
            for (i, v) in self.solve(&col).into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }
}

/// Solves `a x = b`.
pub fn solve<E: Element>(a: &Matrix<E>, b: &[E]) -> Result<Vec<E>> {
    Ok(Lu::factor(a)?.solve(b))
}

/// Matrix inverse via LU.
pub fn inverse<E: Element>(a: &Matrix<E>) -> Result<Matrix<E>> {
    let lu = Lu::factor(a)?;
    Ok(lu.solve_matrix(&Matrix::identity(a.rows())))
}
