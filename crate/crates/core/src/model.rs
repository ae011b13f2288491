// SPDX-License-Identifier: Apache-2.0

//! System parameters, derived rates and regime checks.
//!
//! All rates share one unit; κ is the natural reference and the CLI sets
//! κ = 1. Variances are reported in zero-point units, `2⟨X₁²⟩`, so the vacuum
//! sits at 1 and the 3 dB limit at 0.5.

use serde::{Deserialize, Serialize};

use crate::error::{to_f64, Error, Result};
use crate::scalar::{lit, Real};

/// Margin used to decide a "much less than" comparison.
pub const MUCH_LESS_FACTOR: f64 = 10.0;

/// One simulation point of the linearised two-tone model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams<T> {
    /// Cavity energy decay rate κ.
    pub kappa: T,
    /// Mechanical energy decay rate Γ_M.
    pub gamma_m: T,
    /// Mechanical frequency Ω. `+inf` selects the rotating-wave approximation.
    pub omega_m: T,
    /// Thermal occupancy of the mechanical bath.
    pub n_th: T,
    /// Blue-sideband coupling G₊.
    pub g_plus: T,
    /// Red-sideband coupling G₋.
    pub g_minus: T,
    /// Coupling of the auxiliary tone at ω_cav − 3Ω; zero disables it.
    pub g_three: T,
}

impl<T: Real> SystemParams<T> {
    /// Validated constructor. `g_plus >= g_minus` is allowed (see
    /// [`SystemParams::is_rwa_stable`]).
    pub fn new(
        kappa: T,
        gamma_m: T,
        omega_m: T,
        n_th: T,
        g_plus: T,
        g_minus: T,
        g_three: T,
    ) -> Result<Self> {
        let p = Self {
            kappa,
            gamma_m,
            omega_m,
            n_th,
            g_plus,
            g_minus,
            g_three,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: T| {
            if x > T::zero() && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!(
                    "{name} must be positive and finite, got {x}"
                )))
            }
        };
        let non_negative = |name: &str, x: T| {
            if x >= T::zero() && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!(
                    "{name} must be non-negative and finite, got {x}"
                )))
            }
        };
        positive("kappa", self.kappa)?;
        positive("gamma_m", self.gamma_m)?;
        positive("g_minus", self.g_minus)?;
        non_negative("n_th", self.n_th)?;
        non_negative("g_plus", self.g_plus)?;
        non_negative("g_three", self.g_three)?;
        if !(self.omega_m > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "omega_m must be positive (or infinite for the RWA), got {}",
                self.omega_m
            )));
        }
        Ok(())
    }

    /// G₊/G₋.
    pub fn ratio(&self) -> T {
        self.g_plus / self.g_minus
    }

    /// Copy with `g_plus = ratio * g_minus`; the third tone is left untouched.
    pub fn with_ratio(&self, ratio: T) -> Self {
        Self {
            g_plus: ratio * self.g_minus,
            ..*self
        }
    }

    /// Copy with the auxiliary tone set to cancel the 2Ω force, `G₃ = G₊`.
    pub fn with_matched_third_tone(&self) -> Self {
        Self {
            g_three: self.g_plus,
            ..*self
        }
    }

    /// 𝒞 = 4G₋²/(κΓ_M).
    pub fn cooperativity(&self) -> T {
        lit::<T>(4.0) * self.g_minus * self.g_minus / (self.kappa * self.gamma_m)
    }

    /// The RWA dynamics are only damped for G₊ < G₋.
    pub fn is_rwa_stable(&self) -> bool {
        self.g_plus < self.g_minus
    }

    /// True when the counter-rotating terms are switched off.
    pub fn is_rwa(&self) -> bool {
        !self.omega_m.is_finite()
    }

    /// 1 + 2 n_th.
    pub fn thermal_factor(&self) -> T {
        T::one() + lit::<T>(2.0) * self.n_th
    }
}

/// Quantities that follow from a stable parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedQuantities<T> {
    /// Squeeze parameter, tanh r = G₊/G₋.
    pub r: T,
    /// Bogoliubov coupling 𝒢 = √(G₋² − G₊²).
    pub g_eff: T,
    /// Cooperativity 𝒞.
    pub coop: T,
    /// Optical damping Γ_opt = 4𝒢²/κ.
    pub gamma_opt: T,
}

impl<T: Real> DerivedQuantities<T> {
    pub fn cosh_r(&self) -> T {
        self.r.cosh()
    }

    pub fn sinh_r(&self) -> T {
        self.r.sinh()
    }

    /// e^{−2r}, the β-vacuum variance.
    pub fn e_minus_2r(&self) -> T {
        (lit::<T>(-2.0) * self.r).exp()
    }
}

pub fn derive<T: Real>(p: &SystemParams<T>) -> Result<DerivedQuantities<T>> {
    if !p.is_rwa_stable() {
        return Err(Error::UnstableRatio {
            g_plus: to_f64(p.g_plus),
            g_minus: to_f64(p.g_minus),
        });
    }
    // (G₋ − G₊)(G₋ + G₊) avoids cancellation near G₊ → G₋
    let g_eff = ((p.g_minus - p.g_plus) * (p.g_minus + p.g_plus)).sqrt();
    Ok(DerivedQuantities {
        r: p.ratio().atanh(),
        g_eff,
        coop: p.cooperativity(),
        gamma_opt: lit::<T>(4.0) * g_eff * g_eff / p.kappa,
    })
}

/// Builds parameters from the dimensionless pair (𝒞, G₊/G₋).
pub fn params_from_cooperativity<T: Real>(
    coop: T,
    ratio: T,
    kappa: T,
    gamma_m: T,
    n_th: T,
    omega_m: T,
) -> Result<SystemParams<T>> {
    for (name, x) in [("coop", coop), ("kappa", kappa), ("gamma_m", gamma_m)] {
        if !(x > T::zero()) || !x.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{name} must be positive and finite, got {x}"
            )));
        }
    }
    if !(ratio >= T::zero()) || !ratio.is_finite() {
        return Err(Error::InvalidInput(format!(
            "ratio must be non-negative, got {ratio}"
        )));
    }
    let g_minus = (coop * kappa * gamma_m / lit::<T>(4.0)).sqrt();
    SystemParams::new(
        kappa,
        gamma_m,
        omega_m,
        n_th,
        ratio * g_minus,
        g_minus,
        T::zero(),
    )
}

/// Validity of the rotating-wave treatment: 𝒞^{3/2} ≪ √(1+2n_th)(κ/Γ_M)(Ω/κ)².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BadCavityCheck<T> {
    pub lhs: T,
    pub rhs: T,
    /// `lhs < rhs / MUCH_LESS_FACTOR`.
    pub satisfied: bool,
}

/// An infinite Ω (RWA sentinel) always satisfies the condition.
pub fn check_bad_cavity_condition<T: Real>(p: &SystemParams<T>) -> BadCavityCheck<T> {
    let coop = p.cooperativity();
    let lhs = coop * coop.sqrt();
    let sideband = p.omega_m / p.kappa;
    let rhs = p.thermal_factor().sqrt() * (p.kappa / p.gamma_m) * sideband * sideband;
    BadCavityCheck {
        lhs,
        rhs,
        satisfied: lhs < rhs / lit::<T>(MUCH_LESS_FACTOR),
    }
}
