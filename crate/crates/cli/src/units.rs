//! Conversion between reduced and SI quantities. The physical constants
//! live here and nowhere else.

use crate::config::Units;
use crate::error::CliError;

/// J s
pub const HBAR: f64 = 1.0545718e-34;
/// J / K
pub const K_B: f64 = 1.380649e-23;
/// J
pub const ELECTRON_VOLT: f64 = 1.602176634e-19;

/// A validated units block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    /// rad / s
    pub omega_ref: f64,
    /// m
    pub gap: f64,
    /// K
    pub temperature: f64,
}

impl Scales {
    pub fn from_units(u: &Units) -> Result<Self, CliError> {
        let omega_ref = match (u.omega_ref_rad_s, u.omega_ref_ev) {
            (Some(w), None) => w,
            (None, Some(ev)) => ev * ELECTRON_VOLT / HBAR,
            (Some(_), Some(_)) => {
                return Err(CliError::Validation(
                    "give the reference frequency in rad/s or in eV, not both".into(),
                ))
            }
            (None, None) => return Err(CliError::Validation("units block lacks the reference frequency".into())),
        };
        let gap = u.gap_m.ok_or_else(|| CliError::Validation("units block lacks the gap".into()))?;
        let temperature = u
            .temperature_k
            .ok_or_else(|| CliError::Validation("units block lacks the temperature".into()))?;
        if !(omega_ref > 0.0 && omega_ref.is_finite()) {
            return Err(CliError::Validation(format!("reference frequency must be positive, got {omega_ref}")));
        }
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(CliError::Validation(format!("gap must be positive, got {gap}")));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(CliError::Validation(format!("temperature must be >= 0 K, got {temperature}")));
        }
        Ok(Scales { omega_ref, gap, temperature })
    }

    /// `k_B T / (hbar W)`
    pub fn reduced_temperature(&self) -> f64 {
        K_B * self.temperature / (HBAR * self.omega_ref)
    }

    /// Pressure in Pa, `f = hbar W Phi / l^3`.
    pub fn pressure(&self, phi: f64) -> f64 {
        pressure_pa(phi, self.omega_ref, self.gap)
    }
}

pub fn pressure_pa(phi: f64, omega_ref: f64, gap: f64) -> f64 {
    HBAR * omega_ref / gap.powi(3) * phi
}

/// Free energy per area in J / m^2, `F = hbar W Psi / l^2`.
pub fn free_energy_j_m2(psi: f64, omega_ref: f64, gap: f64) -> f64 {
    HBAR * omega_ref / (gap * gap) * psi
}
