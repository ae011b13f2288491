// SPDX-License-Identifier: Apache-2.0

//! Eigenvalues of small real nonsymmetric matrices.
//!
//! Balancing, reduction to upper Hessenberg form by stabilised elementary
//! similarity transforms, then the Francis double-shift QR iteration.

use num_complex::Complex;

use super::matrix::RealMatrix;
use crate::error::{Error, Result};
use crate::scalar::{count, lit, Real};

/// Per-eigenvalue cap on QR sweeps.
const MAX_ITERATIONS: usize = 120;

/// All eigenvalues of a square real matrix, in no particular order.
///
/// Fails with [`Error::NonFinite`] for matrices containing NaN/inf and with
/// [`Error::NotConverged`] if the QR iteration stalls.
pub fn eigenvalues<T: Real>(a: &RealMatrix<T>) -> Result<Vec<Complex<T>>> {
    assert!(a.is_square(), "eigenvalues need a square matrix");
    if !a.is_finite() {
        return Err(Error::NonFinite { time: f64::NAN });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    // Centre the spectrum first: clusters far from the origin (a monodromy
    // matrix close to the identity) otherwise defeat the deflation test.
    let shift = a.trace() / count::<T>(n);
    let mut h = a.clone();
    for i in 0..n {
        h[(i, i)] -= shift;
    }
    balance(&mut h);
    to_hessenberg(&mut h);
    let mut values = hessenberg_qr(&mut h, n)?;
    for z in &mut values {
        z.re += shift;
    }
    Ok(values)
}

/// Largest real part among the eigenvalues.
pub fn spectral_abscissa<T: Real>(a: &RealMatrix<T>) -> Result<T> {
    Ok(eigenvalues(a)?
        .into_iter()
        .map(|z| z.re)
        .fold(T::neg_infinity(), T::max))
}

/// Largest eigenvalue modulus.
pub fn spectral_radius<T: Real>(a: &RealMatrix<T>) -> Result<T> {
    Ok(eigenvalues(a)?
        .into_iter()
        .map(|z| z.norm())
        .fold(T::zero(), T::max))
}

fn balance<T: Real>(a: &mut RealMatrix<T>) {
    let n = a.rows();
    let radix = lit::<T>(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != T::zero() && r != T::zero() {
                let mut g = r / radix;
                let mut f = T::one();
                let s = c + r;
                while c < g {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while c > g {
                    f /= radix;
                    c /= sqrdx;
                }
                if (c + r) / f < lit::<T>(0.95) * s {
                    done = false;
                    let g = T::one() / f;
                    for j in 0..n {
                        a[(i, j)] *= g;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

fn to_hessenberg<T: Real>(a: &mut RealMatrix<T>) {
    let n = a.rows();
    for m in 1..n.saturating_sub(1) {
        let mut x = T::zero();
        let mut i = m;
        for j in m..n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..n {
                let tmp = a[(i, j)];
                a[(i, j)] = a[(m, j)];
                a[(m, j)] = tmp;
            }
            for j in 0..n {
                let tmp = a[(j, i)];
                a[(j, i)] = a[(j, m)];
                a[(j, m)] = tmp;
            }
        }
        if x != T::zero() {
            for i in (m + 1)..n {
                let mut y = a[(i, m - 1)];
                if y != T::zero() {
                    y /= x;
                    a[(i, m - 1)] = y;
                    for j in m..n {
                        let v = a[(m, j)];
                        a[(i, j)] -= y * v;
                    }
                    for j in 0..n {
                        let v = a[(j, i)];
                        a[(j, m)] += y * v;
                    }
                }
            }
        }
    }
    // the multipliers left below the subdiagonal are not part of H
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            a[(i, j)] = T::zero();
        }
    }
}

fn sign<T: Real>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

fn hessenberg_qr<T: Real>(a: &mut RealMatrix<T>, n: usize) -> Result<Vec<Complex<T>>> {
    let mut wr = vec![Complex::new(T::zero(), T::zero()); n];
    if n == 0 {
        return Ok(wr);
    }
    let eps = T::epsilon();
    let mut anorm = T::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }

    // `nn` is the index of the bottom row of the active block; isize so the
    // loop can run it below zero on completion.
    let mut nn: isize = n as isize - 1;
    let mut t = T::zero();
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nu = nn as usize;
            // look for a single small subdiagonal element
            let mut l = nu;
            while l > 0 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == T::zero() {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= eps * s {
                    a[(l, l - 1)] = T::zero();
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nu, nu)];
            if l == nu {
                wr[nu] = Complex::new(x + t, T::zero());
                nn -= 1;
            } else {
                let mut y = a[(nu - 1, nu - 1)];
                let mut w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
                if l == nu - 1 {
                    let p = lit::<T>(0.5) * (y - x);
                    let q = p * p + w;
                    let z = q.abs().sqrt();
                    x += t;
                    if q >= T::zero() {
                        let z = p + sign(z, p);
                        let lo = x + z;
                        let hi = if z != T::zero() { x - w / z } else { lo };
                        wr[nu - 1] = Complex::new(lo, T::zero());
                        wr[nu] = Complex::new(hi, T::zero());
                    } else {
                        wr[nu] = Complex::new(x + p, -z);
                        wr[nu - 1] = Complex::new(x + p, z);
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITERATIONS {
                        return Err(Error::NotConverged {
                            periods: its,
                            change: f64::NAN,
                        });
                    }
                    if its > 0 && its.is_multiple_of(10) {
                        // exceptional shift
                        t += x;
                        for i in 0..=nu {
                            a[(i, i)] -= x;
                        }
                        let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
                        x = lit::<T>(0.75) * s;
                        y = x;
                        w = lit::<T>(-0.4375) * s * s;
                    }
                    its += 1;
                    let (mut p, mut q, mut r): (T, T, T);
                    let mut m = nu - 2;
                    loop {
                        let z = a[(m, m)];
                        let rr = x - z;
                        let ss = y - z;
                        p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
                        q = a[(m + 1, m + 1)] - z - rr - ss;
                        r = a[(m + 2, m + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                        let v =
                            p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                        if u <= eps * v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m..nu - 1 {
                        a[(i + 2, i)] = T::zero();
                        if i != m {
                            a[(i + 2, i - 1)] = T::zero();
                        }
                    }
                    let mut k = m;
                    while k < nu {
                        if k != m {
                            p = a[(k, k - 1)];
                            q = a[(k + 1, k - 1)];
                            r = T::zero();
                            if k + 1 != nu {
                                r = a[(k + 2, k - 1)];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != T::zero() {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != T::zero() {
                            if k == m {
                                if l != m {
                                    a[(k, k - 1)] = -a[(k, k - 1)];
                                }
                            } else {
                                a[(k, k - 1)] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            let z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nu {
                                let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                                if k + 1 != nu {
                                    pp += r * a[(k + 2, j)];
                                    a[(k + 2, j)] -= pp * z;
                                }
                                a[(k + 1, j)] -= pp * y;
                                a[(k, j)] -= pp * x;
                            }
                            let mmin = if nu < k + 3 { nu } else { k + 3 };
                            for i in l..=mmin {
                                let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                                if k + 1 != nu {
                                    pp += z * a[(i, k + 2)];
                                    a[(i, k + 2)] -= pp * r;
                                }
                                a[(i, k + 1)] -= pp * q;
                                a[(i, k)] -= pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if !((l as isize) + 1 < nn) {
                break;
            }
        }
    }
    Ok(wr)
}
