// SPDX-License-Identifier: Apache-2.0

//! Time-periodic covariance dynamics beyond the rotating-wave approximation.
//!
//! In the interaction picture the two drive tones produce couplings that
//! oscillate at 2Ω (and 4Ω once the auxiliary tone at ω_cav − 3Ω is on). All
//! of them share the period T = π/Ω. The periodic steady state is found by
//! shooting: the fixed point of the discrete one-period map of the RK4
//! integrator is solved directly, then confirmed by propagating further
//! periods until the period average is stationary.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{to_f64, Error, Result};
use crate::linalg::{solve_lyapunov, spectral_radius, ComplexMatrix, Lu, RealMatrix};
use crate::model::SystemParams;
use crate::optimize::{sweep, Backend, RatioSearch, SweepBase, SweepRecord};
use crate::rwa::{
    build_rwa_drift_diffusion, diffusion_matrix, squeeze_parameter, SteadyStateReport,
};
use crate::scalar::{count, lit, Real};

/// Effective beam-splitter (`alpha`) and two-mode-squeezing (`gamma`)
/// coefficients at time `t`, entering `H = ℏ d†(α b + γ b†) + h.c.`.
///
/// In the RWA `alpha = −G₋` and `gamma = −G₊`.
pub fn coupling_coefficients<T: Real>(p: &SystemParams<T>, t: T) -> (Complex<T>, Complex<T>) {
    let g_minus = Complex::from(p.g_minus);
    let g_plus = Complex::from(p.g_plus);
    if p.is_rwa() {
        return (-g_minus, -g_plus);
    }
    let phase = p.omega_m * t;
    let two = lit::<T>(2.0);
    let e2 = Complex::cis(two * phase);
    let e4 = Complex::cis(lit::<T>(4.0) * phase);
    let g3 = Complex::from(p.g_three);
    let alpha = -g_minus - g_plus * e2.conj() + g3 * e2;
    let gamma = -g_plus - g_minus * e2 + g3 * e4;
    (alpha, gamma)
}

/// Drift in the mode basis (d, d†, b, b†) for the given coefficients.
pub fn mode_basis_drift<T: Real>(
    kappa: T,
    gamma_m: T,
    alpha: Complex<T>,
    gamma: Complex<T>,
) -> ComplexMatrix<T> {
    let half = lit::<T>(0.5);
    let i = Complex::<T>::i();
    let mut m = ComplexMatrix::zeros(4, 4);
    let cav = Complex::from(-half * kappa);
    let mech = Complex::from(-half * gamma_m);
    // ḋ
    m[(0, 0)] = cav;
    m[(0, 2)] = -i * alpha;
    m[(0, 3)] = -i * gamma;
    // ḋ†
    m[(1, 1)] = cav;
    m[(1, 3)] = i * alpha.conj();
    m[(1, 2)] = i * gamma.conj();
    // ḃ
    m[(2, 2)] = mech;
    m[(2, 0)] = -i * alpha.conj();
    m[(2, 1)] = -i * gamma;
    // ḃ†
    m[(3, 3)] = mech;
    m[(3, 1)] = i * alpha;
    m[(3, 0)] = i * gamma.conj();
    m
}

/// Real quadrature drift (X₁, X₂, U₁, U₂) for the given coefficients.
pub fn quadrature_drift<T: Real>(
    kappa: T,
    gamma_m: T,
    alpha: Complex<T>,
    gamma: Complex<T>,
) -> RealMatrix<T> {
    let half = lit::<T>(0.5);
    let ac = alpha.conj();
    let (sum_c, diff_c) = (ac + gamma, ac - gamma);
    let (sum, diff) = (alpha + gamma, alpha - gamma);
    let z = T::zero();
    RealMatrix::from_rows(&[
        [-half * gamma_m, z, sum_c.im, diff_c.re],
        [z, -half * gamma_m, -sum_c.re, diff_c.im],
        [sum.im, diff.re, -half * kappa, z],
        [-sum.re, diff.im, z, -half * kappa],
    ])
}

/// Drift A(t) including counter-rotating and auxiliary-tone terms.
/// Reduces to the RWA drift when `omega_m` is infinite.
pub fn build_time_dependent_drift<T: Real>(p: &SystemParams<T>, t: T) -> RealMatrix<T> {
    if p.is_rwa() {
        return build_rwa_drift_diffusion(p).drift;
    }
    let (alpha, gamma) = coupling_coefficients(p, t);
    quadrature_drift(p.kappa, p.gamma_m, alpha, gamma)
}

/// Common period π/Ω of every oscillating term.
pub fn drive_period<T: Real>(p: &SystemParams<T>) -> T {
    T::PI() / p.omega_m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialCondition {
    /// Solve for the fixed point of the one-period map, then verify.
    Shooting,
    /// Start from the RWA steady state and relax period by period.
    Rwa,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloquetOptions<T> {
    /// Bound on the max-abs relative change of the period average.
    pub tolerance: T,
    pub max_periods: usize,
    pub steps_per_period: usize,
    pub initial: InitialCondition,
    /// Number of equally spaced phases at which V(t) is kept.
    pub phase_samples: usize,
}

impl<T: Real> Default for FloquetOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: lit(1e-8),
            max_periods: 100_000,
            steps_per_period: 256,
            initial: InitialCondition::Shooting,
            phase_samples: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloquetResult<T> {
    /// Period-averaged covariance.
    pub v_avg: RealMatrix<T>,
    /// Period average of 2⟨X₁²⟩.
    pub var_x1_avg: T,
    pub var_x1_min: T,
    pub var_x1_max: T,
    /// 2⟨X₁²⟩ at the start of a period, t ≡ 0 mod π/Ω.
    pub var_x1_start: T,
    pub periods_to_converge: usize,
    pub converged: bool,
    /// Largest Floquet multiplier modulus; `None` in the RWA limit.
    pub max_multiplier: Option<T>,
    /// V(t) at `phase_samples` equally spaced phases of the last period.
    pub phase_covariances: Vec<RealMatrix<T>>,
    /// Mechanical report built from `v_avg`.
    pub report: SteadyStateReport<T>,
}

/// Statistics of one propagated period.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodStats<T> {
    pub v_end: RealMatrix<T>,
    pub v_avg: RealMatrix<T>,
    pub var_x1_min: T,
    pub var_x1_max: T,
    pub samples: Vec<RealMatrix<T>>,
}

/// Fixed-step RK4 propagator over one period with the drift cached at every
/// node and half node.
#[derive(Debug, Clone)]
pub struct PeriodPropagator<T> {
    nodes: Vec<RealMatrix<T>>,
    diffusion: RealMatrix<T>,
    h: T,
    steps: usize,
    sample_every: Vec<usize>,
}

impl<T: Real> PeriodPropagator<T> {
    pub fn new(
        drift: impl Fn(T) -> RealMatrix<T>,
        diffusion: RealMatrix<T>,
        period: T,
        steps: usize,
        samples: usize,
    ) -> Result<Self> {
        if steps == 0 || !(period > T::zero()) || !period.is_finite() {
            return Err(Error::InvalidInput(format!(
                "need a positive finite period and at least one step (period {period}, steps {steps})"
            )));
        }
        let h = period / count::<T>(steps);
        let half = lit::<T>(0.5);
        let nodes = (0..=2 * steps)
            .map(|k| drift(h * half * count::<T>(k)))
            .collect();
        let sample_every = (0..samples).map(|k| k * steps / samples).collect();
        Ok(Self {
            nodes,
            diffusion,
            h,
            steps,
            sample_every,
        })
    }

    pub fn period(&self) -> T {
        self.h * count::<T>(self.steps)
    }

    fn rhs(&self, node: usize, v: &RealMatrix<T>, diffusion: bool) -> RealMatrix<T> {
        let av = &self.nodes[node] * v;
        let mut out = &av + &av.transpose();
        if diffusion {
            out.axpy(T::one(), &self.diffusion);
        }
        out
    }

    fn step(&self, k: usize, v: &RealMatrix<T>, diffusion: bool) -> RealMatrix<T> {
        let (h, half) = (self.h, lit::<T>(0.5));
        let k1 = self.rhs(2 * k, v, diffusion);
        let mut y = v.clone();
        y.axpy(h * half, &k1);
        let k2 = self.rhs(2 * k + 1, &y, diffusion);
        let mut y = v.clone();
        y.axpy(h * half, &k2);
        let k3 = self.rhs(2 * k + 1, &y, diffusion);
        let mut y = v.clone();
        y.axpy(h, &k3);
        let k4 = self.rhs(2 * k + 2, &y, diffusion);
        let sixth = h / lit::<T>(6.0);
        let mut out = v.clone();
        out.axpy(sixth, &k1);
        out.axpy(sixth * lit::<T>(2.0), &k2);
        out.axpy(sixth * lit::<T>(2.0), &k3);
        out.axpy(sixth, &k4);
        out
    }

    /// Propagates V over one period without diffusion when `diffusion` is
    /// false (the linear part of the period map).
    fn map(&self, v: &RealMatrix<T>, diffusion: bool) -> RealMatrix<T> {
        (0..self.steps).fold(v.clone(), |v, k| self.step(k, &v, diffusion))
    }

    /// One-period state transition Φ of `dx/dt = A(t) x`.
    pub fn monodromy(&self) -> RealMatrix<T> {
        let (h, half) = (self.h, lit::<T>(0.5));
        let mut phi = RealMatrix::identity(self.nodes[0].rows());
        for k in 0..self.steps {
            let (a0, am, a1) = (
                &self.nodes[2 * k],
                &self.nodes[2 * k + 1],
                &self.nodes[2 * k + 2],
            );
            let k1 = a0 * &phi;
            let mut y = phi.clone();
            y.axpy(h * half, &k1);
            let k2 = am * &y;
            let mut y = phi.clone();
            y.axpy(h * half, &k2);
            let k3 = am * &y;
            let mut y = phi.clone();
            y.axpy(h, &k3);
            let k4 = a1 * &y;
            let sixth = h / lit::<T>(6.0);
            phi.axpy(sixth, &k1);
            phi.axpy(sixth * lit::<T>(2.0), &k2);
            phi.axpy(sixth * lit::<T>(2.0), &k3);
            phi.axpy(sixth, &k4);
        }
        phi
    }

    /// Fixed point of the discrete period map `V ↦ L(V) + Q`.
    pub fn fixed_point(&self) -> Result<RealMatrix<T>> {
        let n = self.nodes[0].rows();
        // coordinates: the upper triangle of a symmetric V
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let q = self.map(&RealMatrix::zeros(n, n), true);
        let mut op = RealMatrix::identity(pairs.len());
        for (col, &(i, j)) in pairs.iter().enumerate() {
            let mut unit = RealMatrix::zeros(n, n);
            unit[(i, j)] = T::one();
            unit[(j, i)] = T::one();
            let image = self.map(&unit, false);
            for (row, &(k, l)) in pairs.iter().enumerate() {
                op[(row, col)] -= image[(k, l)];
            }
        }
        let rhs: Vec<T> = pairs.iter().map(|&(k, l)| q[(k, l)]).collect();
        let x = Lu::factor(&op)?.solve(&rhs);
        let mut v = RealMatrix::zeros(n, n);
        for (&(i, j), &value) in pairs.iter().zip(&x) {
            v[(i, j)] = value;
            v[(j, i)] = value;
        }
        if !v.is_finite() {
            return Err(Error::NonFinite { time: 0.0 });
        }
        Ok(v)
    }

    /// Propagates one full period from `v0` (taken at phase 0).
    pub fn advance(&self, v0: &RealMatrix<T>, period_index: usize) -> Result<PeriodStats<T>> {
        let two = lit::<T>(2.0);
        let mut v = v0.clone();
        let mut sum = RealMatrix::zeros(v.rows(), v.cols());
        let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
        let mut samples = Vec::with_capacity(self.sample_every.len());
        let mut next = 0;
        for k in 0..self.steps {
            if next < self.sample_every.len() && self.sample_every[next] == k {
                samples.push(v.clone());
                next += 1;
            }
            sum.axpy(T::one(), &v);
            let x1 = two * v[(0, 0)];
            lo = lo.min(x1);
            hi = hi.max(x1);
            v = self.step(k, &v, true);
            v.symmetrize();
            if !v.is_finite() {
                let t = self.period() * count::<T>(period_index) + self.h * count::<T>(k + 1);
                return Err(Error::NonFinite { time: to_f64(t) });
            }
        }
        // periodic trapezoid rule on the step nodes
        let v_avg = sum.scale(T::one() / count::<T>(self.steps));
        Ok(PeriodStats {
            v_end: v,
            v_avg,
            var_x1_min: lo,
            var_x1_max: hi,
            samples,
        })
    }
}

fn relative_change<T: Real>(new: &RealMatrix<T>, old: &RealMatrix<T>) -> T {
    let scale = new.max_abs();
    let diff = (new - old).max_abs();
    if scale > T::zero() {
        diff / scale
    } else {
        diff
    }
}

/// Periodic steady state of a generic T-periodic linear system.
pub fn solve_periodic<T: Real>(
    propagator: &PeriodPropagator<T>,
    v0: Option<RealMatrix<T>>,
    squeeze: Option<T>,
    options: &FloquetOptions<T>,
) -> Result<FloquetResult<T>> {
    let multiplier = spectral_radius(&propagator.monodromy())?;
    if !(multiplier < T::one()) {
        return Err(Error::ParametricInstability {
            multiplier: to_f64(multiplier),
        });
    }
    let start = match v0 {
        Some(v) => v,
        None => propagator.fixed_point()?,
    };
    let mut stats = propagator.advance(&start, 0)?;
    let mut var_x1_start: T;
    let mut change = T::infinity();
    let mut periods = 1;
    while periods < options.max_periods.max(2) {
        let next = propagator.advance(&stats.v_end, periods)?;
        periods += 1;
        change = relative_change(&next.v_avg, &stats.v_avg);
        var_x1_start = lit::<T>(2.0) * stats.v_end[(0, 0)];
        stats = next;
        if change < options.tolerance {
            let report = SteadyStateReport::from_covariance(&stats.v_avg, squeeze);
            return Ok(FloquetResult {
                var_x1_avg: report.var_x1,
                v_avg: stats.v_avg,
                var_x1_min: stats.var_x1_min,
                var_x1_max: stats.var_x1_max,
                var_x1_start,
                periods_to_converge: periods,
                converged: true,
                max_multiplier: Some(multiplier),
                phase_covariances: stats.samples,
                report,
            });
        }
    }
    Err(Error::NotConverged {
        periods,
        change: to_f64(change),
    })
}

fn validate_options<T: Real>(options: &FloquetOptions<T>) -> Result<()> {
    if !(options.tolerance > T::zero()) || options.steps_per_period == 0 || options.max_periods == 0
    {
        return Err(Error::InvalidInput(
            "floquet options need tolerance > 0, steps_per_period > 0 and max_periods > 0".into(),
        ));
    }
    Ok(())
}

/// Periodic steady state of the full drive model.
///
/// An infinite `omega_m` short-circuits to the Lyapunov steady state.
pub fn periodic_steady_state<T: Real>(
    p: &SystemParams<T>,
    options: &FloquetOptions<T>,
) -> Result<FloquetResult<T>> {
    p.validate()?;
    validate_options(options)?;
    let squeeze = squeeze_parameter(p);
    if p.is_rwa() {
        let dd = build_rwa_drift_diffusion(p);
        let v = solve_lyapunov(&dd.drift, &dd.diffusion)?.v;
        let report = SteadyStateReport::from_covariance(&v, squeeze);
        return Ok(FloquetResult {
            var_x1_avg: report.var_x1,
            var_x1_min: report.var_x1,
            var_x1_max: report.var_x1,
            var_x1_start: report.var_x1,
            v_avg: v.clone(),
            periods_to_converge: 0,
            converged: true,
            max_multiplier: None,
            phase_covariances: vec![v; options.phase_samples],
            report,
        });
    }
    let propagator = PeriodPropagator::new(
        |t| build_time_dependent_drift(p, t),
        diffusion_matrix(p),
        drive_period(p),
        options.steps_per_period,
        options.phase_samples,
    )?;
    let v0 = match options.initial {
        InitialCondition::Shooting => None,
        InitialCondition::Rwa => {
            let dd = build_rwa_drift_diffusion(p);
            Some(solve_lyapunov(&dd.drift, &dd.diffusion)?.v)
        }
    };
    solve_periodic(&propagator, v0, squeeze, options)
}

/// Optimized Floquet variance for each cooperativity of the grid.
pub fn optimized_squeezing_vs_cooperativity<T: Real>(
    base: &SweepBase<T>,
    coop_grid: &[T],
    options: &FloquetOptions<T>,
    search: &RatioSearch<T>,
) -> Vec<SweepRecord<T>> {
    sweep(&Backend::Floquet(*options), coop_grid, base, search)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inverse;
    use crate::model::params_from_cooperativity;
    use crate::rwa::steady_state;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn bad_cavity(coop: f64, q: f64, n_th: f64, omega: f64) -> SystemParams<f64> {
        params_from_cooperativity(coop, q, 1.0, 1e-4, n_th, omega).unwrap()
    }

    /// Quadrature-from-mode transform for the (d, d†, b, b†) basis.
    fn mode_to_quadrature() -> ComplexMatrix<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex::new(re * s, im * s);
        let z = c(0.0, 0.0);
        ComplexMatrix::from_rows(&[
            [z, z, c(1.0, 0.0), c(1.0, 0.0)],
            [z, z, c(0.0, -1.0), c(0.0, 1.0)],
            [c(1.0, 0.0), c(1.0, 0.0), z, z],
            [c(0.0, -1.0), c(0.0, 1.0), z, z],
        ])
    }

    #[test]
    fn quadrature_drift_is_similarity_of_mode_drift() {
        let p = SystemParams::new(1.0, 1e-3, 7.0, 3.0, 0.4, 0.6, 0.3).unwrap();
        let t = mode_to_quadrature();
        let t_inv = inverse(&t).unwrap();
        for k in 0..7 {
            let time = 0.1 * k as f64;
            let (alpha, gamma) = coupling_coefficients(&p, time);
            let m = mode_basis_drift(p.kappa, p.gamma_m, alpha, gamma);
            let transformed = &(&t * &m) * &t_inv;
            let a = build_time_dependent_drift(&p, time);
            for i in 0..4 {
                for j in 0..4 {
                    let z = transformed[(i, j)];
                    assert!(z.im.abs() < 1e-14);
                    assert!(
                        (z.re - a[(i, j)]).abs() < 1e-14,
                        "({i},{j}) {z} vs {}",
                        a[(i, j)]
                    );
                }
            }
        }
    }

    #[test]
    fn rwa_sentinel_and_period_average() {
        let mut p = bad_cavity(1e4, 0.9, 10.0, f64::INFINITY);
        let rwa = build_rwa_drift_diffusion(&p).drift;
        assert_eq!(build_time_dependent_drift(&p, 0.37), rwa);

        p.omega_m = 50.0;
        let period = drive_period(&p);
        let n = 64;
        let mut avg = RealMatrix::zeros(4, 4);
        for k in 0..n {
            avg.axpy(
                1.0 / n as f64,
                &build_time_dependent_drift(&p, period * k as f64 / n as f64),
            );
        }
        assert!((&avg - &rwa).max_abs() < 1e-14);
        let shifted = build_time_dependent_drift(&p, 0.3 + period);
        assert!((&shifted - &build_time_dependent_drift(&p, 0.3)).max_abs() < 1e-12);
    }

    /// Fourier component of A(t) at 2Ω.
    fn second_harmonic(p: &SystemParams<f64>) -> Vec<Complex<f64>> {
        let period = drive_period(p);
        let n = 64;
        let mut acc = vec![Complex::new(0.0, 0.0); 16];
        for k in 0..n {
            let t = period * k as f64 / n as f64;
            let a = build_time_dependent_drift(p, t);
            let w = Complex::cis(-2.0 * p.omega_m * t) / n as f64;
            for (slot, &x) in acc.iter_mut().zip(a.as_slice()) {
                *slot += w * x;
            }
        }
        acc
    }

    #[test]
    fn third_tone_reshapes_second_harmonic() {
        let p = bad_cavity(1e4, 0.9, 50.0, 50.0);
        let plain = second_harmonic(&p);
        let tone = second_harmonic(&p.with_matched_third_tone());
        let diff: f64 = plain.iter().zip(&tone).map(|(a, b)| (a - b).norm()).sum();
        assert!(diff > 1e-3);
        // the averaged drift is still the RWA one
        let (alpha, gamma) = (0..64).fold(
            (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)),
            |acc, k| {
                let (a, g) = coupling_coefficients(
                    &p.with_matched_third_tone(),
                    drive_period(&p) * k as f64 / 64.0,
                );
                (acc.0 + a / 64.0, acc.1 + g / 64.0)
            },
        );
        assert!((alpha + p.g_minus).norm() < 1e-14 && (gamma + p.g_plus).norm() < 1e-14);
    }

    #[test]
    fn near_rwa_limit_matches_lyapunov() {
        let p = bad_cavity(1e4, 0.954174, 10.0, 1e4);
        let f = periodic_steady_state(&p, &FloquetOptions::default()).unwrap();
        let s = steady_state(&p).unwrap();
        assert!(
            rel(f.var_x1_avg, s.var_x1) < 1e-3,
            "{} {}",
            f.var_x1_avg,
            s.var_x1
        );
        assert!(f.var_x1_min <= f.var_x1_avg && f.var_x1_avg <= f.var_x1_max);
    }

    #[test]
    fn zeroed_oscillations_reproduce_lyapunov() {
        let p = bad_cavity(1e3, 0.95, 5.0, 50.0);
        let dd = build_rwa_drift_diffusion(&p);
        let prop = PeriodPropagator::new(
            |_| dd.drift.clone(),
            dd.diffusion.clone(),
            drive_period(&p),
            256,
            16,
        )
        .unwrap();
        let f = solve_periodic(&prop, None, None, &FloquetOptions::default()).unwrap();
        let v = solve_lyapunov(&dd.drift, &dd.diffusion).unwrap().v;
        assert!((&f.v_avg - &v).max_abs() < 1e-8 * v.max_abs());
    }

    #[test]
    fn rwa_start_agrees_with_shooting() {
        // fast relaxation so the literal start converges quickly
        let p = params_from_cooperativity(50.0, 0.5, 1.0, 0.05, 2.0, 5.0).unwrap();
        let shoot = periodic_steady_state(&p, &FloquetOptions::default()).unwrap();
        let opts = FloquetOptions {
            initial: InitialCondition::Rwa,
            ..FloquetOptions::default()
        };
        let relax = periodic_steady_state(&p, &opts).unwrap();
        assert!(relax.periods_to_converge > shoot.periods_to_converge);
        assert!(rel(relax.var_x1_avg, shoot.var_x1_avg) < 1e-6);
    }

    #[test]
    fn periodic_and_physical_at_every_phase() {
        let p = bad_cavity(5e6, 0.999, 100.0, 50.0);
        let f = periodic_steady_state(&p, &FloquetOptions::default()).unwrap();
        assert!(f.var_x1_avg < 0.5);
        assert_eq!(f.phase_covariances.len(), 16);
        let prop = PeriodPropagator::new(
            |t| build_time_dependent_drift(&p, t),
            diffusion_matrix(&p),
            drive_period(&p),
            256,
            16,
        )
        .unwrap();
        let again = prop.advance(&f.phase_covariances[0], 0).unwrap();
        for (a, b) in again.samples.iter().zip(&f.phase_covariances) {
            assert!((a - b).max_abs() < 1e-8 * b.max_abs());
        }
        for v in &f.phase_covariances {
            let s = SteadyStateReport::from_covariance(v, None);
            assert!(s.var_x1 > 0.0 && s.purity_squared() >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn unstable_drive_is_reported() {
        let p = SystemParams::new(1.0, 1e-4, 5.0, 0.0, 1.2, 0.5, 0.0).unwrap();
        assert!(matches!(
            periodic_steady_state(&p, &FloquetOptions::default()),
            Err(Error::ParametricInstability { .. })
        ));
    }
}
