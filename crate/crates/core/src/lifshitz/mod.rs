//! Non-retarded Casimir-Lifshitz pressure between two identical half-spaces.
//!
//! Results are reduced: `Phi = f l^3 / (hbar W)` and `Psi = F l^2 / (hbar W)`
//! for a reference frequency `W`. A positive `Phi` means attraction.

mod kernel;
mod matsubara;
mod real_axis;
mod thermo;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use kernel::kernel_i;
pub(crate) use kernel::kernel_from_chi;
pub use matsubara::{classical_limit, matsubara_pressure, matsubara_series, zero_t_pressure, MatsubaraSpectrum};
pub use real_axis::real_axis_pressure;
pub use thermo::{entropy, extrapolate_to_zero, free_energy, Entropy};

pub const DEFAULT_RTOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    #[serde(rename = "matsubara")]
    Matsubara,
    #[serde(rename = "classical")]
    Classical,
    #[serde(rename = "zeroT")]
    ZeroT,
    #[serde(rename = "realaxis")]
    RealAxis,
    #[serde(rename = "modes")]
    Modes,
}

impl Route {
    pub const ALL: [Route; 5] = [Route::Matsubara, Route::Classical, Route::ZeroT, Route::RealAxis, Route::Modes];

    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Matsubara => "matsubara",
            Route::Classical => "classical",
            Route::ZeroT => "zeroT",
            Route::RealAxis => "realaxis",
            Route::Modes => "modes",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown route '{s}'")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Matsubara terms summed.
    pub terms: Option<usize>,
    /// Matsubara tail estimate added after truncation (reduced units of the
    /// bracketed sum).
    pub tail: Option<f64>,
    /// Integrand evaluations spent by quadrature.
    pub evaluations: Option<usize>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureResult {
    /// Reduced pressure. For [`Route::Classical`] this is the coefficient
    /// `Phi / T`.
    pub phi: f64,
    pub route: Route,
    pub err_estimate: f64,
    pub temperature: Option<f64>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyResult {
    /// Reduced free energy per unit area. The Matsubara route uses the
    /// convention `Phi = 2 Psi`; the mode sum returns the negative binding
    /// energy.
    pub psi: f64,
    pub temperature: f64,
    pub route: Route,
    pub err_estimate: f64,
}
