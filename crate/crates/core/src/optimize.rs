// SPDX-License-Identifier: Apache-2.0

//! Drive-ratio optimization and cooperativity sweeps.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{to_f64, Error, Result};
use crate::floquet::{periodic_steady_state, FloquetOptions};
use crate::lindblad::lindblad_steady_state;
use crate::model::{check_bad_cavity_condition, params_from_cooperativity, SystemParams};
use crate::rwa::{min_variance_analytic, optimal_ratio_analytic, steady_state, SteadyStateReport};
use crate::scalar::{count, lit, Real};

/// Values closer than this are treated as equal during the coarse scan.
pub const TIE_TOLERANCE: f64 = 1e-15;

/// Bracketing scan plus golden-section refinement settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSearch<T> {
    pub lower: T,
    pub upper: T,
    pub grid_points: usize,
    /// Final bracket width in the ratio.
    pub tolerance: T,
}

impl<T: Real> Default for RatioSearch<T> {
    fn default() -> Self {
        Self {
            lower: lit(1e-3),
            upper: lit(1.0 - 1e-7),
            grid_points: 200,
            tolerance: lit(1e-6),
        }
    }
}

impl<T: Real> RatioSearch<T> {
    pub fn validate(&self) -> Result<()> {
        let ok = self.lower > T::zero()
            && self.upper < T::one()
            && self.lower < self.upper
            && self.grid_points >= 3
            && self.tolerance > T::zero();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "ratio search needs 0 < lower < upper < 1, at least 3 grid points and tolerance > 0 (got {}..{}, {} points, tol {})",
                self.lower, self.upper, self.grid_points, self.tolerance
            )))
        }
    }

    /// Scan nodes, equally spaced in the squeeze parameter
    /// 2r = ln((1 + q)/(1 − q)) so the sharp minimum close to q = 1 is
    /// resolved at large cooperativity.
    pub fn grid(&self) -> Vec<T> {
        let warp = |q: T| ((T::one() + q) / (T::one() - q)).ln();
        let (a, b) = (warp(self.lower), warp(self.upper));
        let last = self.grid_points - 1;
        (0..self.grid_points)
            .map(|k| {
                if k == 0 {
                    return self.lower;
                }
                if k == last {
                    return self.upper;
                }
                let x = a + (b - a) * count::<T>(k) / count::<T>(last);
                x.tanh_half()
            })
            .collect()
    }
}

trait TanhHalf {
    fn tanh_half(self) -> Self;
}

impl<T: Real> TanhHalf for T {
    /// Inverse of the grid warp: q = tanh(x/2).
    fn tanh_half(self) -> Self {
        (self * lit::<T>(0.5)).tanh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioOptimum<T> {
    pub ratio: T,
    pub value: T,
    pub evaluations: usize,
}

/// Golden-section minimisation of a unimodal `f` on `[a, b]` down to a
/// bracket narrower than `tol`.
pub fn golden_section<T, F>(mut f: F, mut a: T, mut b: T, tol: T) -> Result<RatioOptimum<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let inv_phi = (lit::<T>(5.0).sqrt() - T::one()) / lit::<T>(2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evaluations = 2;
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        evaluations += 1;
    }
    let (ratio, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    Ok(RatioOptimum {
        ratio,
        value,
        evaluations,
    })
}

/// Errors that only say the dynamics are unstable at this ratio; the scan
/// treats such points as infinitely bad instead of aborting.
fn is_infeasible(e: &Error) -> bool {
    matches!(
        e,
        Error::NotHurwitz { .. }
            | Error::UnstableRatio { .. }
            | Error::UnstableReduced { .. }
            | Error::ParametricInstability { .. }
    )
}

/// Minimises `variance(ratio)`: coarse scan to bracket the global minimum,
/// then golden-section refinement inside the bracket.
pub fn optimize_ratio<T, F>(mut variance: F, search: &RatioSearch<T>) -> Result<RatioOptimum<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    search.validate()?;
    let grid = search.grid();
    let mut values = Vec::with_capacity(grid.len());
    let mut first_error = None;
    for &q in &grid {
        match variance(q) {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => values.push(T::infinity()),
            Err(e) if is_infeasible(&e) => {
                first_error.get_or_insert(e);
                values.push(T::infinity());
            }
            Err(e) => return Err(e),
        }
    }
    let tie = lit::<T>(TIE_TOLERANCE);
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] - tie {
            best = i;
        }
    }
    if !values[best].is_finite() {
        return Err(first_error.unwrap_or(Error::NonFinite { time: 0.0 }));
    }
    if best == 0 || best == grid.len() - 1 {
        return Err(Error::NoInteriorMinimum {
            ratio: to_f64(grid[best]),
            value: to_f64(values[best]),
        });
    }
    let (lo, hi) = (grid[best - 1], grid[best + 1]);
    let refine = |q: T| match variance(q) {
        Ok(v) => Ok(v),
        Err(e) if is_infeasible(&e) => Ok(T::infinity()),
        Err(e) => Err(e),
    };
    let mut refined = golden_section(refine, lo, hi, search.tolerance)?;
    if values[best] < refined.value {
        // the bracket is too coarse for a kink; keep the scan point
        refined.ratio = grid[best];
        refined.value = values[best];
    }
    refined.evaluations += grid.len();
    Ok(refined)
}

/// Which model supplies the variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Backend<T> {
    Rwa,
    Lindblad,
    Floquet(FloquetOptions<T>),
}

impl<T: Real> Backend<T> {
    pub fn tag(&self) -> &'static str {
        match self {
            Backend::Rwa => "rwa",
            Backend::Lindblad => "lindblad",
            Backend::Floquet(_) => "floquet",
        }
    }

    /// Steady-state report; the Floquet backend reports the period average.
    pub fn evaluate(&self, p: &SystemParams<T>) -> Result<SteadyStateReport<T>> {
        match self {
            Backend::Rwa => steady_state(p),
            Backend::Lindblad => lindblad_steady_state(p),
            Backend::Floquet(opts) => periodic_steady_state(p, opts).map(|f| f.report),
        }
    }
}

/// How the auxiliary tone follows the blue coupling during a ratio scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThirdTone {
    Off,
    /// G₃ = G₊ at every ratio.
    MatchBlue,
}

/// Everything held fixed while 𝒞 and G₊/G₋ vary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepBase<T> {
    pub kappa: T,
    pub gamma_m: T,
    pub n_th: T,
    pub omega_m: T,
    pub third_tone: ThirdTone,
}

impl<T: Real> SweepBase<T> {
    /// κ = 1 units with the given Γ_M/κ and κ/Ω (0 selects the RWA).
    pub fn dimensionless(gamma_over_kappa: T, n_th: T, kappa_over_omega: T) -> Self {
        let omega_m = if kappa_over_omega > T::zero() {
            T::one() / kappa_over_omega
        } else {
            T::infinity()
        };
        Self {
            kappa: T::one(),
            gamma_m: gamma_over_kappa,
            n_th,
            omega_m,
            third_tone: ThirdTone::Off,
        }
    }

    pub fn params(&self, coop: T, ratio: T) -> Result<SystemParams<T>> {
        let p = params_from_cooperativity(
            coop,
            ratio,
            self.kappa,
            self.gamma_m,
            self.n_th,
            self.omega_m,
        )?;
        Ok(match self.third_tone {
            ThirdTone::Off => p,
            ThirdTone::MatchBlue => p.with_matched_third_tone(),
        })
    }
}

/// Optimizes the ratio at one cooperativity and returns the report there.
pub fn optimize_at<T: Real>(
    backend: &Backend<T>,
    base: &SweepBase<T>,
    coop: T,
    search: &RatioSearch<T>,
) -> Result<(RatioOptimum<T>, SteadyStateReport<T>)> {
    let opt = optimize_ratio(
        |q| Ok(backend.evaluate(&base.params(coop, q)?)?.var_x1),
        search,
    )?;
    let report = backend.evaluate(&base.params(coop, opt.ratio)?)?;
    Ok((opt, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PointStatus {
    Ok,
    Failed { kind: String, message: String },
}

impl PointStatus {
    pub fn from_error(e: &Error) -> Self {
        let kind = format!("{e:?}");
        let kind = kind
            .split([' ', '(', '{'])
            .next()
            .unwrap_or("Error")
            .to_string();
        PointStatus::Failed {
            kind,
            message: e.to_string(),
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self, PointStatus::Ok)
    }
}

/// One optimized point of a cooperativity sweep. Numeric fields are NaN for
/// failed points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord<T> {
    pub coop: T,
    pub ratio_opt: T,
    pub var_x1_opt: T,
    /// Large-𝒞 asymptote `(Γ_M/κ)(1+2n_th) + √((1+2n_th)/𝒞)`.
    pub var_x1_analytic: T,
    pub ratio_analytic: T,
    pub n_eff: T,
    pub beta_occ: Option<T>,
    pub backend: String,
    /// 𝒞 < 100(1 + 2n_th): the asymptotic columns are outside their regime.
    pub regime_warning: bool,
    /// Bad-cavity validity condition at the optimum.
    pub bad_cavity_ok: bool,
    pub status: PointStatus,
    pub wall_time_ms: f64,
}

impl<T: Real> SweepRecord<T> {
    pub fn is_ok(&self) -> bool {
        self.status.is_ok()
    }
}

pub fn sweep_point<T: Real>(
    backend: &Backend<T>,
    coop: T,
    base: &SweepBase<T>,
    search: &RatioSearch<T>,
) -> SweepRecord<T> {
    let started = Instant::now();
    let analytic = optimal_ratio_analytic(coop, base.n_th);
    let var_x1_analytic = min_variance_analytic(base.gamma_m / base.kappa, base.n_th, coop);
    let outcome = optimize_at(backend, base, coop, search).and_then(|(opt, report)| {
        let p = base.params(coop, opt.ratio)?;
        Ok((opt, report, check_bad_cavity_condition(&p).satisfied))
    });
    let nan = T::nan();
    let mut record = SweepRecord {
        coop,
        ratio_opt: nan,
        var_x1_opt: nan,
        var_x1_analytic,
        ratio_analytic: analytic.ratio,
        n_eff: nan,
        beta_occ: None,
        backend: backend.tag().to_string(),
        regime_warning: analytic.regime_warning,
        bad_cavity_ok: false,
        status: PointStatus::Ok,
        wall_time_ms: 0.0,
    };
    match outcome {
        Ok((opt, report, bad_cavity_ok)) => {
            record.ratio_opt = opt.ratio;
            record.var_x1_opt = report.var_x1;
            record.n_eff = report.n_eff;
            record.beta_occ = report.beta_occupancy;
            record.bad_cavity_ok = bad_cavity_ok;
        }
        Err(e) => record.status = PointStatus::from_error(&e),
    }
    record.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    record
}

/// Sequential sweep; one record per grid entry, in grid order.
pub fn sweep<T: Real>(
    backend: &Backend<T>,
    coop_grid: &[T],
    base: &SweepBase<T>,
    search: &RatioSearch<T>,
) -> Vec<SweepRecord<T>> {
    coop_grid
        .iter()
        .map(|&c| sweep_point(backend, c, base, search))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_on_parabola() {
        let opt = golden_section(|x: f64| Ok((x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-8).unwrap();
        assert!((opt.ratio - 0.3).abs() < 1e-8);
    }

    #[test]
    fn monotone_objective_has_no_interior_minimum() {
        let err = optimize_ratio(|q: f64| Ok(q * q), &RatioSearch::default()).unwrap_err();
        match err {
            Error::NoInteriorMinimum { ratio, .. } => assert!((ratio - 1e-3).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grid_is_increasing_and_spans_bounds() {
        let s = RatioSearch::<f64>::default();
        let g = s.grid();
        assert_eq!(g.len(), 200);
        assert_eq!((g[0], g[199]), (s.lower, s.upper));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn ties_prefer_smaller_ratio() {
        // flat valley: every interior value equal, so the first interior node wins
        let opt = optimize_ratio(
            |q: f64| {
                Ok(if !(0.01..=0.99999).contains(&q) {
                    2.0
                } else {
                    1.0
                })
            },
            &RatioSearch::default(),
        )
        .unwrap();
        assert!(opt.ratio < 0.02, "{}", opt.ratio);
    }

    #[test]
    fn rwa_optimum_matches_asymptote() {
        let base = SweepBase::dimensionless(1e-4f64, 10.0, 0.0);
        let (opt, report) =
            optimize_at(&Backend::Rwa, &base, 1e4, &RatioSearch::default()).unwrap();
        assert!((opt.ratio - 0.954174).abs() < 5e-3);
        assert!(((report.var_x1 - 0.04793) / 0.04793).abs() < 0.1);
    }

    #[test]
    fn infeasible_points_do_not_abort() {
        let opt = optimize_ratio(
            |q: f64| {
                if q > 0.9 {
                    Err(Error::NotHurwitz { max_real_part: 1.0 })
                } else {
                    Ok((q - 0.5).powi(2))
                }
            },
            &RatioSearch::default(),
        )
        .unwrap();
        assert!((opt.ratio - 0.5).abs() < 1e-6);
        let err = optimize_ratio(
            |_: f64| Err(Error::InvalidInput("x".into())),
            &RatioSearch::default(),
        )
        .unwrap_err();
        assert!(err.is_input_error());
    }

    #[test]
    fn sweep_records_and_failures() {
        let base = SweepBase::dimensionless(1e-4f64, 10.0, 0.0);
        assert!(sweep(&Backend::Rwa, &[], &base, &RatioSearch::default()).is_empty());
        let recs = sweep(&Backend::Rwa, &[1e3, -1.0], &base, &RatioSearch::default());
        assert!(recs[0].is_ok() && recs[0].ratio_opt > 0.8);
        assert_eq!(recs[0].backend, "rwa");
        match &recs[1].status {
            PointStatus::Failed { kind, .. } => assert_eq!(kind, "InvalidInput"),
            s => panic!("{s:?}"),
        }
        assert!(recs[1].var_x1_opt.is_nan());
    }
}
