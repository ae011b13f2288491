// SPDX-License-Identifier: Apache-2.0

//! Classical fourth-order Runge–Kutta for matrix-valued ODEs.

use super::matrix::RealMatrix;
use crate::error::{to_f64, Error, Result};
use crate::scalar::{count, lit, Real};

/// One RK4 step of `dM/dt = f(t, M)`.
pub fn rk4_step<T, F>(f: &mut F, t: T, m: &RealMatrix<T>, h: T) -> RealMatrix<T>
where
    T: Real,
    F: FnMut(T, &RealMatrix<T>) -> RealMatrix<T>,
{
    let half = lit::<T>(0.5);
    let k1 = f(t, m);
    let mut y = m.clone();
    y.axpy(h * half, &k1);
    let k2 = f(t + h * half, &y);
    let mut y = m.clone();
    y.axpy(h * half, &k2);
    let k3 = f(t + h * half, &y);
    let mut y = m.clone();
    y.axpy(h, &k3);
    let k4 = f(t + h, &y);

    let sixth = h / lit::<T>(6.0);
    let mut out = m.clone();
    out.axpy(sixth, &k1);
    out.axpy(sixth * lit::<T>(2.0), &k2);
    out.axpy(sixth * lit::<T>(2.0), &k3);
    out.axpy(sixth, &k4);
    out
}

/// Right-hand side of the covariance equation `A V + V Aᵀ + D`.
pub fn covariance_rhs<T: Real>(
    a: &RealMatrix<T>,
    v: &RealMatrix<T>,
    d: &RealMatrix<T>,
) -> RealMatrix<T> {
    let av = a * v;
    let mut out = &av + &av.transpose();
    out.axpy(T::one(), d);
    out
}

/// Integrates `dV/dt = A(t) V + V A(t)ᵀ + D` from `t0` to `t1`.
///
/// The step is shrunk so an integer number of steps lands exactly on `t1`.
/// `V` is re-symmetrised after every step.
pub fn integrate_covariance_ode<T, A>(
    mut drift: A,
    d: &RealMatrix<T>,
    v0: &RealMatrix<T>,
    t0: T,
    t1: T,
    dt: T,
) -> Result<RealMatrix<T>>
where
    T: Real,
    A: FnMut(T) -> RealMatrix<T>,
{
    if !(dt > T::zero()) || !(t1 > t0) {
        return Err(Error::InvalidInput(format!(
            "need dt > 0 and t1 > t0 (dt = {dt}, t0 = {t0}, t1 = {t1})"
        )));
    }
    let steps = ((t1 - t0) / dt)
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX)
        .max(1);
    let h = (t1 - t0) / count::<T>(steps);
    let mut rhs = |t: T, v: &RealMatrix<T>| covariance_rhs(&drift(t), v, d);
    let mut v = v0.clone();
    for k in 0..steps {
        let t = t0 + h * count::<T>(k);
        v = rk4_step(&mut rhs, t, &v, h);
        v.symmetrize();
        if !v.is_finite() {
            return Err(Error::NonFinite {
                time: to_f64(t + h),
            });
        }
    }
    Ok(v)
}
