// SPDX-License-Identifier: Apache-2.0

//! Cavity output spectrum in the rotating-wave approximation, thermometry of
//! the Bogoliubov mode from its integrated weight, and the resulting bounds
//! on the mechanical variance.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{to_f64, Error, Result};
use crate::floquet::mode_basis_drift;
use crate::linalg::{ComplexMatrix, Lu};
use crate::model::{derive, SystemParams};
use crate::scalar::{count, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    Analytic,
    TransferMatrix,
}

/// Normally ordered output spectrum ⟨δa_out† δa_out⟩[ω] on a frequency grid
/// (ω measured from the cavity resonance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSeries<T> {
    pub omega_grid: Vec<T>,
    pub s_values: Vec<T>,
    pub params: SystemParams<T>,
    pub method: SpectrumMethod,
}

impl<T: Real> SpectrumSeries<T> {
    /// Frequencies of strict interior local maxima.
    pub fn local_maxima(&self) -> Vec<T> {
        self.s_values
            .windows(3)
            .enumerate()
            .filter(|(_, w)| w[1] > w[0] && w[1] > w[2])
            .map(|(i, _)| self.omega_grid[i + 1])
            .collect()
    }
}

fn check_grid<T: Real>(grid: &[T]) -> Result<()> {
    if grid.iter().any(|w| !w.is_finite()) || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput(
            "frequency grid must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

fn check_stable<T: Real>(p: &SystemParams<T>) -> Result<()> {
    p.validate()?;
    derive(p).map(|_| ())
}

/// Closed form `16κΓ_M[G₊²(n_th+1) + G₋²n_th] / |4𝒢² + (Γ_M − 2iω)(κ − 2iω)|²`.
pub fn spectrum_point_analytic<T: Real>(p: &SystemParams<T>, omega: T) -> T {
    let two = lit::<T>(2.0);
    let g_sq = (p.g_minus - p.g_plus) * (p.g_minus + p.g_plus);
    let num = lit::<T>(16.0)
        * p.kappa
        * p.gamma_m
        * (p.g_plus * p.g_plus * (p.n_th + T::one()) + p.g_minus * p.g_minus * p.n_th);
    let den = Complex::from(lit::<T>(4.0) * g_sq)
        + Complex::new(p.gamma_m, -two * omega) * Complex::new(p.kappa, -two * omega);
    num / den.norm_sqr()
}

pub fn output_spectrum_analytic<T: Real>(
    p: &SystemParams<T>,
    omega_grid: &[T],
) -> Result<SpectrumSeries<T>> {
    check_stable(p)?;
    check_grid(omega_grid)?;
    Ok(SpectrumSeries {
        omega_grid: omega_grid.to_vec(),
        s_values: omega_grid
            .iter()
            .map(|&w| spectrum_point_analytic(p, w))
            .collect(),
        params: *p,
        method: SpectrumMethod::Analytic,
    })
}

/// Transfer-matrix evaluation at one frequency.
///
/// With `ẋ = M x − L ξ` for x = (d, d†, b, b†) and inputs
/// ξ = (d_in, d_in†, b_in, b_in†), the response is `x[ω] = −χ(ω) L ξ[ω]`,
/// `χ = (−iω − M)⁻¹`. Only the normally ordered input correlators
/// ⟨d_in d_in†⟩ = 1, ⟨b_in† b_in⟩ = n_th, ⟨b_in b_in†⟩ = n_th + 1 survive, and
/// the output `√κ d − d_in` gives `s(ω) = κ Σ_j |χ_{dj}(ω)|² L_j² N_j`; the
/// spectrum at ω reads off s(−ω).
pub fn spectrum_point_numeric<T: Real>(
    p: &SystemParams<T>,
    m: &ComplexMatrix<T>,
    omega: T,
) -> Result<T> {
    let w = -omega;
    let mut resp = m.scale(-Complex::one());
    for i in 0..4 {
        resp[(i, i)] += Complex::new(T::zero(), -w);
    }
    // row 0 of χ = first column of (resp⁻¹)ᵀ
    let lu = Lu::factor(&resp.transpose()).map_err(|_| Error::SingularResponse {
        omega: to_f64(omega),
    })?;
    let mut e0 = vec![Complex::zero(); 4];
    e0[0] = Complex::one();
    let row = lu.solve(&e0);
    let weights = [
        T::zero(),
        p.kappa,
        p.gamma_m * p.n_th,
        p.gamma_m * (p.n_th + T::one()),
    ];
    let total: T = row.iter().zip(weights).map(|(c, w)| c.norm_sqr() * w).sum();
    Ok(p.kappa * total)
}

pub fn output_spectrum_numeric<T: Real>(
    p: &SystemParams<T>,
    omega_grid: &[T],
) -> Result<SpectrumSeries<T>> {
    check_stable(p)?;
    check_grid(omega_grid)?;
    let m = mode_basis_drift(
        p.kappa,
        p.gamma_m,
        Complex::from(-p.g_minus),
        Complex::from(-p.g_plus),
    );
    let s_values = omega_grid
        .iter()
        .map(|&w| spectrum_point_numeric(p, &m, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumSeries {
        omega_grid: omega_grid.to_vec(),
        s_values,
        params: *p,
        method: SpectrumMethod::TransferMatrix,
    })
}

/// Location ±√(𝒢² − κ²/8) of the two maxima once the Bogoliubov mode and
/// the cavity hybridize (Γ_M ≪ κ); `None` for a single peak.
pub fn split_peak_position<T: Real>(p: &SystemParams<T>) -> Result<Option<T>> {
    let d = derive(p)?;
    let x = d.g_eff * d.g_eff - p.kappa * p.kappa / lit::<T>(8.0);
    Ok(if x > T::zero() { Some(x.sqrt()) } else { None })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratedWeight<T> {
    /// ∫ S[ω] dω.
    pub area: T,
    /// ⟨β†β⟩ inferred from the area.
    pub beta_occ_inferred: T,
}

/// Starting half-window, in units of κ.
pub const WINDOW_START: f64 = 50.0;
/// Relative contribution of a window doubling below which the tails are done.
pub const TAIL_TOLERANCE: f64 = 1e-6;
const MAX_DOUBLINGS: usize = 40;
const PANEL_TOLERANCE: f64 = 1e-10;
const MAX_PANEL_REFINEMENTS: usize = 16;

/// Composite Simpson on [a, b] with `m` (even) subintervals.
fn simpson<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, m: usize) -> T {
    let h = (b - a) / count::<T>(m);
    let mut acc = f(a) + f(b);
    for k in 1..m {
        let w = if k % 2 == 1 {
            lit::<T>(4.0)
        } else {
            lit::<T>(2.0)
        };
        acc += w * f(a + h * count::<T>(k));
    }
    acc * h / lit::<T>(3.0)
}

/// Composite Simpson over each panel, doubling the subinterval count until
/// successive estimates agree to `tol` (absolute).
fn panel_integral<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, tol: T) -> T {
    let mut m = 8;
    let mut prev = simpson(f, a, b, m);
    for _ in 0..MAX_PANEL_REFINEMENTS {
        m *= 2;
        let next = simpson(f, a, b, m);
        if (next - prev).abs() <= tol {
            return next;
        }
        prev = next;
    }
    prev
}

/// Symmetric breakpoints that grow geometrically from the narrowest
/// resonance width up to `half_window`.
fn breakpoints<T: Real>(narrowest: T, half_window: T) -> Vec<T> {
    let mut pos = Vec::new();
    let mut x = narrowest / lit::<T>(8.0);
    while x < half_window {
        pos.push(x);
        x *= lit::<T>(2.0);
    }
    pos.push(half_window);
    let mut all: Vec<T> = pos.iter().rev().map(|&x| -x).collect();
    all.push(T::zero());
    all.extend(pos);
    all
}

fn windowed_area<T: Real>(f: &impl Fn(T) -> T, breaks: &[T]) -> T {
    let coarse: T = breaks.windows(2).map(|w| simpson(f, w[0], w[1], 8)).sum();
    let tol = coarse.abs() * lit::<T>(PANEL_TOLERANCE) / count::<T>(breaks.len());
    breaks
        .windows(2)
        .map(|w| panel_integral(f, w[0], w[1], tol))
        .sum()
}

/// Integrated output weight and the occupancy
/// `⟨β†β⟩ = area·[4𝒢² + κ(κ + Γ_M)]/(8πκ𝒢²)` it implies.
pub fn integrated_weight<T: Real>(p: &SystemParams<T>) -> Result<IntegratedWeight<T>> {
    check_stable(p)?;
    let d = derive(p)?;
    let g_sq = d.g_eff * d.g_eff;
    // slowest pole half-width, from z = [−(Γ+κ) ± √((κ−Γ)² − 16𝒢²)]/2
    let disc = (p.kappa - p.gamma_m) * (p.kappa - p.gamma_m) - lit::<T>(16.0) * g_sq;
    let slow_rate = if disc > T::zero() {
        (p.gamma_m + p.kappa - disc.sqrt()) / lit::<T>(2.0)
    } else {
        (p.gamma_m + p.kappa) / lit::<T>(2.0)
    };
    let narrowest = slow_rate / lit::<T>(2.0);
    let f = |w: T| spectrum_point_analytic(p, w);

    let mut half = lit::<T>(WINDOW_START) * p.kappa;
    let mut area = windowed_area(&f, &breakpoints(narrowest, half));
    let mut tail = T::infinity();
    for _ in 0..MAX_DOUBLINGS {
        let wider = windowed_area(&f, &breakpoints(narrowest, half * lit::<T>(2.0)));
        tail = (wider - area).abs();
        half *= lit::<T>(2.0);
        area = wider;
        if tail <= lit::<T>(TAIL_TOLERANCE) * area.abs() {
            let factor = (lit::<T>(4.0) * g_sq + p.kappa * (p.kappa + p.gamma_m))
                / (lit::<T>(8.0) * T::PI() * p.kappa * g_sq);
            return Ok(IntegratedWeight {
                area,
                beta_occ_inferred: area * factor,
            });
        }
    }
    Err(Error::QuadratureNotConverged { tail: to_f64(tail) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingBounds<T> {
    /// 2e^{−2r}(1 + 2⟨β†β⟩), valid for any state.
    pub upper: T,
    /// e^{−2r}(1 + 4⟨β†β⟩), relies on the large-𝒞 estimate of ⟨ββ⟩.
    pub lower: T,
    /// 1 + (2(1+n_th)/(1+2n_th) − 1) e^{−2r} ≥ 1.
    pub zeta: T,
    /// Large-r estimate of ⟨ββ⟩.
    pub beta_anomalous_estimate: T,
}

/// Bounds on 2⟨X₁²⟩ given the squeeze parameter and a measured ⟨β†β⟩ ≥ 0.
pub fn squeezing_bounds<T: Real>(r: T, beta_occ: T, n_th: T) -> SqueezingBounds<T> {
    let one = T::one();
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let e = (-two * r).exp();
    let thermal = one + two * n_th;
    SqueezingBounds {
        upper: two * e * (one + two * beta_occ),
        lower: e * (one + four * beta_occ),
        zeta: one + (two * (one + n_th) / thermal - one) * e,
        beta_anomalous_estimate: (one + (four * (n_th + one) / thermal - two) * e) * beta_occ,
    }
}
