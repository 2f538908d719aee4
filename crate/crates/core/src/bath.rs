//! Vibrational spectral densities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Species;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensityParams {
    /// Peak height `γ_φ`.
    pub gamma_phi: f64,
    /// Vibrational centre frequency `ω_v`.
    pub omega_v: f64,
    /// Lorentzian half-width `ξ`.
    pub xi: f64,
    pub species: Species,
}

impl SpectralDensityParams {
    pub fn new(gamma_phi: f64, omega_v: f64, xi: f64, species: Species) -> Result<Self> {
        let p = Self {
            gamma_phi,
            omega_v,
            xi,
            species,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_phi >= 0.0 && self.gamma_phi.is_finite()) {
            return Err(Error::invalid("gamma_phi_ev", "must be non-negative"));
        }
        if !(self.omega_v > 0.0 && self.omega_v.is_finite()) {
            return Err(Error::invalid("omega_v", "must be positive"));
        }
        if !(self.xi > 0.0 && self.xi.is_finite()) {
            return Err(Error::invalid("xi_ev", "must be positive"));
        }
        Ok(())
    }

    pub fn eval(&self, omega: f64) -> f64 {
        spectral_density(omega, self)
    }
}

/// Lorentzian spectral density vanishing at zero frequency,
/// `γ_φ (ω/ω_v) ξ² / ((ω - ω_v)² + ξ²)` for `ω > 0`.
///
/// Non-positive frequencies return zero: the bath only absorbs energy, so
/// only downhill transitions occur.
pub fn spectral_density(omega: f64, params: &SpectralDensityParams) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    let xi2 = params.xi * params.xi;
    let detuning = omega - params.omega_v;
    params.gamma_phi * (omega / params.omega_v) * xi2 / (detuning * detuning + xi2)
}

/// One bath per species; every molecule couples to its own copy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSet {
    pub donor: SpectralDensityParams,
    pub acceptor: SpectralDensityParams,
}

impl BathSet {
    pub fn new(gamma_phi: f64, xi: f64, omega_vd: f64, omega_va: f64) -> Result<Self> {
        Ok(Self {
            donor: SpectralDensityParams::new(gamma_phi, omega_vd, xi, Species::Donor)?,
            acceptor: SpectralDensityParams::new(gamma_phi, omega_va, xi, Species::Acceptor)?,
        })
    }

    pub fn get(&self, species: Species) -> &SpectralDensityParams {
        match species {
            Species::Donor => &self.donor,
            Species::Acceptor => &self.acceptor,
        }
    }

    pub fn with_gamma_phi(mut self, gamma_phi: f64) -> Self {
        self.donor.gamma_phi = gamma_phi;
        self.acceptor.gamma_phi = gamma_phi;
        self
    }
}
