// SPDX-License-Identifier: Apache-2.0

//! Reduced master equation for the mechanics once the cavity is eliminated.
//!
//! The cavity is treated as a Markovian bath that damps the Bogoliubov mode
//! β = b cosh r + b† sinh r at Γ_opt. Written in terms of b this gives
//! cooling, heating and two-photon (squeezing) dissipators; because the
//! dynamics are Gaussian the second moments close exactly.

use serde::{Deserialize, Serialize};

use crate::error::{to_f64, Error, Result};
use crate::linalg::{solve, RealMatrix};
use crate::model::{derive, SystemParams};
use crate::rwa::SteadyStateReport;
use crate::scalar::{lit, Real};

/// Dissipator rates of the reduced dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindbladRates<T> {
    /// Γ_M(n_th + 1) + Γ_opt cosh²r.
    pub gamma_down: T,
    /// Γ_M n_th + Γ_opt sinh²r.
    pub gamma_up: T,
    /// Γ_opt cosh r sinh r.
    pub gamma_s: T,
}

impl<T: Real> LindbladRates<T> {
    pub fn from_parts(gamma_m: T, n_th: T, gamma_opt: T, r: T) -> Self {
        let (c, s) = (r.cosh(), r.sinh());
        Self {
            gamma_down: gamma_m * (n_th + T::one()) + gamma_opt * c * c,
            gamma_up: gamma_m * n_th + gamma_opt * s * s,
            gamma_s: gamma_opt * c * s,
        }
    }

    pub fn new(p: &SystemParams<T>) -> Result<Self> {
        let d = derive(p)?;
        Ok(Self::from_parts(p.gamma_m, p.n_th, d.gamma_opt, d.r))
    }

    /// Net damping γ↓ − γ↑ of every second moment.
    pub fn net_damping(&self) -> T {
        self.gamma_down - self.gamma_up
    }

    /// Generator and source of `d/dt [⟨b†b⟩, Re⟨bb⟩, Im⟨bb⟩] = G x + s`.
    pub fn moment_system(&self) -> (RealMatrix<T>, [T; 3]) {
        let rate = -self.net_damping();
        let gen = RealMatrix::diagonal(&[rate, rate, rate]);
        (gen, [self.gamma_up, -self.gamma_s, T::zero()])
    }

    /// Steady-state `[⟨b†b⟩, Re⟨bb⟩, Im⟨bb⟩]`.
    pub fn steady_moments(&self) -> Result<[T; 3]> {
        if !(self.gamma_down > self.gamma_up) {
            return Err(Error::UnstableReduced {
                gamma_down: to_f64(self.gamma_down),
                gamma_up: to_f64(self.gamma_up),
            });
        }
        let (gen, source) = self.moment_system();
        let rhs: Vec<T> = source.iter().map(|&s| -s).collect();
        let x = solve(&gen, &rhs)?;
        Ok([x[0], x[1], x[2]])
    }
}

/// Mechanical report from normal-ordered moments `⟨b†b⟩`, `⟨bb⟩`.
pub(crate) fn report_from_moments<T: Real>(
    occ: T,
    re_bb: T,
    im_bb: T,
    r: Option<T>,
) -> SteadyStateReport<T> {
    // ⟨X₁²⟩ = ½ + ⟨b†b⟩ + Re⟨bb⟩, ⟨X₂²⟩ = ½ + ⟨b†b⟩ − Re⟨bb⟩, ⟨{X₁,X₂}⟩/2 = Im⟨bb⟩
    let half = lit::<T>(0.5);
    SteadyStateReport::from_mechanical(half + occ + re_bb, half + occ - re_bb, im_bb, r)
}

pub fn lindblad_steady_state<T: Real>(p: &SystemParams<T>) -> Result<SteadyStateReport<T>> {
    p.validate()?;
    let d = derive(p)?;
    let rates = LindbladRates::from_parts(p.gamma_m, p.n_th, d.gamma_opt, d.r);
    let [occ, re_bb, im_bb] = rates.steady_moments()?;
    Ok(report_from_moments(occ, re_bb, im_bb, Some(d.r)))
}

/// Large-𝒞 purity of the reduced model, `2 + (2n_th/√(2n_th+1))/√𝒞`.
pub fn lindblad_purity_prediction<T: Real>(coop: T, n_th: T) -> T {
    let two = lit::<T>(2.0);
    two + two * n_th / (two * n_th + T::one()).sqrt() / coop.sqrt()
}

/// Closed-form variance of the reduced model,
/// `[Γ_M(1 + 2n_th) + Γ_opt e^{−2r}] / (Γ_M + Γ_opt)`.
pub fn lindblad_variance_closed_form<T: Real>(gamma_m: T, n_th: T, gamma_opt: T, r: T) -> T {
    let thermal = T::one() + lit::<T>(2.0) * n_th;
    (gamma_m * thermal + gamma_opt * (lit::<T>(-2.0) * r).exp()) / (gamma_m + gamma_opt)
}
