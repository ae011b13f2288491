// SPDX-License-Identifier: Apache-2.0

//! Rotating-wave steady state and its closed-form asymptotics.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{solve_lyapunov, RealMatrix};
use crate::model::{derive, SystemParams};
use crate::scalar::{lit, Real};

/// Index layout shared by every 4×4 matrix: mechanics first, then the cavity.
///
/// X₁ = (b† + b)/√2, X₂ = i(b† − b)/√2, and likewise U₁, U₂ for the cavity
/// field d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureBasis;

impl QuadratureBasis {
    pub const X1: usize = 0;
    pub const X2: usize = 1;
    pub const U1: usize = 2;
    pub const U2: usize = 3;
    pub const DIM: usize = 4;
    pub const LABELS: [&'static str; 4] = ["X1", "X2", "U1", "U2"];
}

/// Linear dynamics `dV/dt = A V + V Aᵀ + D` for the symmetrized covariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftDiffusion<T> {
    pub drift: RealMatrix<T>,
    pub diffusion: RealMatrix<T>,
}

/// Symmetrized input noise, `V_ij = ⟨{v_i, v_j}⟩/2` convention.
pub fn diffusion_matrix<T: Real>(p: &SystemParams<T>) -> RealMatrix<T> {
    let half = lit::<T>(0.5);
    let mech = p.gamma_m * (p.n_th + half);
    let cav = p.kappa * half;
    RealMatrix::diagonal(&[mech, mech, cav, cav])
}

pub fn build_rwa_drift_diffusion<T: Real>(p: &SystemParams<T>) -> DriftDiffusion<T> {
    use QuadratureBasis as Q;
    let half = lit::<T>(0.5);
    let diff = p.g_minus - p.g_plus;
    let sum = p.g_minus + p.g_plus;
    let mut a = RealMatrix::zeros(4, 4);
    a[(Q::X1, Q::X1)] = -half * p.gamma_m;
    a[(Q::X1, Q::U2)] = -diff;
    a[(Q::X2, Q::X2)] = -half * p.gamma_m;
    a[(Q::X2, Q::U1)] = sum;
    a[(Q::U1, Q::U1)] = -half * p.kappa;
    a[(Q::U1, Q::X2)] = -diff;
    a[(Q::U2, Q::U2)] = -half * p.kappa;
    a[(Q::U2, Q::X1)] = sum;
    DriftDiffusion {
        drift: a,
        diffusion: diffusion_matrix(p),
    }
}

/// Mechanical steady-state summary in zero-point units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateReport<T> {
    /// 2⟨X₁²⟩; the vacuum gives 1.
    pub var_x1: T,
    /// 2⟨X₂²⟩.
    pub var_x2: T,
    /// ⟨{X₁, X₂}⟩/2.
    pub cross_x1x2: T,
    /// Effective thermal occupancy, `(1 + 2 n_eff)² = 4 det V_mech`.
    pub n_eff: T,
    /// ⟨β†β⟩; `None` when no squeeze parameter exists (G₊ ≥ G₋).
    pub beta_occupancy: Option<T>,
    /// Re⟨ββ⟩, same availability as `beta_occupancy`.
    pub beta_anomalous: Option<T>,
    pub squeezing_db: T,
    /// Full covariance when the cavity was part of the computation.
    pub covariance: Option<RealMatrix<T>>,
}

impl<T: Real> SteadyStateReport<T> {
    /// Builds the report from the symmetrized mechanical block
    /// `[[⟨X₁²⟩, cross], [cross, ⟨X₂²⟩]]`.
    pub fn from_mechanical(v11: T, v22: T, v12: T, squeeze: Option<T>) -> Self {
        let two = lit::<T>(2.0);
        let var_x1 = two * v11;
        let var_x2 = two * v22;
        let purity_sq = var_x1 * var_x2 - lit::<T>(4.0) * v12 * v12;
        let n_eff = (purity_sq.sqrt() - T::one()) / two;
        let (beta_occupancy, beta_anomalous) = match squeeze {
            Some(r) => {
                let (up, down) = ((two * r).exp(), (-two * r).exp());
                let quarter = lit::<T>(0.25);
                (
                    Some(quarter * (up * var_x1 + down * var_x2 - two)),
                    Some(quarter * (up * var_x1 - down * var_x2)),
                )
            }
            None => (None, None),
        };
        Self {
            var_x1,
            var_x2,
            cross_x1x2: v12,
            n_eff,
            beta_occupancy,
            beta_anomalous,
            squeezing_db: -lit::<T>(10.0) * var_x1.log10(),
            covariance: None,
        }
    }

    /// Builds the report from a full 4×4 (or 2×2 mechanical) covariance.
    pub fn from_covariance(v: &RealMatrix<T>, squeeze: Option<T>) -> Self {
        use QuadratureBasis as Q;
        let mut report = Self::from_mechanical(
            v[(Q::X1, Q::X1)],
            v[(Q::X2, Q::X2)],
            v[(Q::X1, Q::X2)],
            squeeze,
        );
        report.covariance = Some(v.clone());
        report
    }

    /// (1 + 2 n_eff)².
    pub fn purity_squared(&self) -> T {
        self.var_x1 * self.var_x2 - lit::<T>(4.0) * self.cross_x1x2 * self.cross_x1x2
    }
}

/// Squeeze parameter if one exists for this point.
pub(crate) fn squeeze_parameter<T: Real>(p: &SystemParams<T>) -> Option<T> {
    derive(p).ok().map(|d| d.r)
}

/// Exact RWA steady state from the Lyapunov equation.
pub fn steady_state<T: Real>(p: &SystemParams<T>) -> Result<SteadyStateReport<T>> {
    p.validate()?;
    let dd = build_rwa_drift_diffusion(p);
    let sol = solve_lyapunov(&dd.drift, &dd.diffusion)?;
    Ok(SteadyStateReport::from_covariance(
        &sol.v,
        squeeze_parameter(p),
    ))
}

/// Large-cooperativity optimum of G₊/G₋.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalRatio<T> {
    pub ratio: T,
    /// The asymptotic e^{−2r} at that ratio, ½√((1+2n_th)/𝒞).
    pub e_minus_2r: T,
    /// Set when 𝒞 < 100(1 + 2n_th) and the asymptotics are unreliable.
    pub regime_warning: bool,
}

pub fn optimal_ratio_analytic<T: Real>(coop: T, n_th: T) -> OptimalRatio<T> {
    let thermal = T::one() + lit::<T>(2.0) * n_th;
    let root = (thermal / coop).sqrt();
    OptimalRatio {
        ratio: T::one() - root,
        e_minus_2r: lit::<T>(0.5) * root,
        regime_warning: coop < lit::<T>(100.0) * thermal,
    }
}

/// Asymptotic optimized variance `(Γ_M/κ)(1+2n_th) + √((1+2n_th)/𝒞)`.
pub fn min_variance_analytic<T: Real>(gamma_over_kappa: T, n_th: T, coop: T) -> T {
    let thermal = T::one() + lit::<T>(2.0) * n_th;
    gamma_over_kappa * thermal + (thermal / coop).sqrt()
}

/// Cavity-induced self-energy and the occupancies it implies for X₁, X₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfEnergy<T> {
    pub sigma: Complex<T>,
    pub n_eff_x1: T,
    /// `+inf` at G₊ = G₋, where X₂ is heated without bound.
    pub n_eff_x2: T,
}

/// Σ[ω] = −i(G₋² − G₊²)/(κ/2 − iω) and the effective quadrature temperatures
/// `1 + 2n = κ|Σ/(G₋ ± G₊)|² / (−2 Im Σ)`.
pub fn semiclassical_self_energy<T: Real>(p: &SystemParams<T>, omega: T) -> SelfEnergy<T> {
    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);
    let g_sq = (p.g_minus - p.g_plus) * (p.g_minus + p.g_plus);
    let sigma = Complex::new(T::zero(), -g_sq) / Complex::new(half * p.kappa, -omega);
    let sum = p.g_minus + p.g_plus;
    let diff = p.g_minus - p.g_plus;
    if g_sq == T::zero() {
        return SelfEnergy {
            sigma,
            n_eff_x1: -half,
            n_eff_x2: T::infinity(),
        };
    }
    let damping = -two * sigma.im;
    let factor = |coupling: T| p.kappa * sigma.norm_sqr() / (coupling * coupling) / damping;
    SelfEnergy {
        sigma,
        n_eff_x1: (factor(sum) - T::one()) / two,
        n_eff_x2: (factor(diff) - T::one()) / two,
    }
}

/// Balance between optical damping of β and its thermal heating.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpedanceMatch<T> {
    pub gamma_opt: T,
    /// Γ_M (1 + 2n_th) e^{2r}.
    pub heating_rate: T,
    pub ratio: T,
    pub regime_warning: bool,
}

pub fn impedance_match_check<T: Real>(p: &SystemParams<T>) -> Result<ImpedanceMatch<T>> {
    let d = derive(p)?;
    let thermal = p.thermal_factor();
    let heating_rate = p.gamma_m * thermal * (lit::<T>(2.0) * d.r).exp();
    Ok(ImpedanceMatch {
        gamma_opt: d.gamma_opt,
        heating_rate,
        ratio: d.gamma_opt / heating_rate,
        regime_warning: d.coop < lit::<T>(100.0) * thermal,
    })
}

/// Closed-form scaling of the measurement-plus-feedback alternative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaeComparison<T> {
    pub var_x1_bae: T,
    /// (1 + 2 n_eff)² of the conditional state.
    pub purity_sq_bae: T,
    pub n_eff_bae: T,
}

pub fn bae_comparison<T: Real>(coop: T, n_th: T) -> BaeComparison<T> {
    let thermal = T::one() + lit::<T>(2.0) * n_th;
    let purity_sq = thermal.sqrt() * coop.sqrt();
    BaeComparison {
        var_x1_bae: (thermal / coop).sqrt(),
        purity_sq_bae: purity_sq,
        n_eff_bae: (purity_sq.sqrt() - T::one()) / lit::<T>(2.0),
    }
}

/// Cooperativity bound `(1/16)(κ/Γ_M)²/(2n_th + 1)` below which the optimized
/// couplings stay out of the hybridized regime.
pub fn strong_coupling_onset<T: Real>(kappa_over_gamma: T, n_th: T) -> T {
    kappa_over_gamma * kappa_over_gamma / (lit::<T>(16.0) * (T::one() + lit::<T>(2.0) * n_th))
}

/// Predicted n_eff² deep in the strong-coupling regime,
/// `(Γ_M/2κ)√((1+2n_th)𝒞)`.
pub fn strong_coupling_purity_scaling<T: Real>(p: &SystemParams<T>) -> T {
    p.gamma_m / (lit::<T>(2.0) * p.kappa) * (p.thermal_factor() * p.cooperativity()).sqrt()
}

/// Predicted (1 + 2n_eff)² for 𝒞 ≫ 1 with 𝒢 < κ; tends to 2.
pub fn moderate_coupling_purity<T: Real>(p: &SystemParams<T>) -> T {
    let thermal = p.thermal_factor();
    let k2 = p.kappa * p.kappa;
    let num = lit::<T>(4.0) * p.g_minus * p.g_minus * thermal + k2 * p.n_th;
    lit::<T>(2.0) * (T::one() + num / (k2 * thermal.sqrt()) / p.cooperativity().sqrt())
}
