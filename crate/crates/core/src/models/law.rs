use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Temperature dependence of a relaxation rate or a dc conductivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum TemperatureLaw {
    Constant { value: f64 },
    /// `residual + amplitude * T^exponent`
    PowerLaw {
        residual: f64,
        amplitude: f64,
        exponent: f64,
    },
    /// `sigma0 * exp(-gap / T)`, zero at `T = 0`.
    Activated { sigma0: f64, gap: f64 },
}

impl TemperatureLaw {
    pub fn constant(value: f64) -> Self {
        TemperatureLaw::Constant { value }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            TemperatureLaw::Constant { value } => value >= 0.0 && value.is_finite(),
            TemperatureLaw::PowerLaw {
                residual,
                amplitude,
                exponent,
            } => residual >= 0.0 && amplitude >= 0.0 && exponent > 0.0 && exponent.is_finite(),
            TemperatureLaw::Activated { sigma0, gap } => sigma0 >= 0.0 && gap >= 0.0 && sigma0.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("bad temperature law {self:?}")))
        }
    }

    pub fn at(&self, temperature: f64) -> f64 {
        match *self {
            TemperatureLaw::Constant { value } => value,
            TemperatureLaw::PowerLaw {
                residual,
                amplitude,
                exponent,
            } => residual + amplitude * temperature.max(0.0).powf(exponent),
            TemperatureLaw::Activated { sigma0, gap } => {
                if temperature <= 0.0 {
                    0.0
                } else {
                    sigma0 * (-gap / temperature).exp()
                }
            }
        }
    }
}

/// One Lorentz oscillator `strength / (resonance^2 - w^2 - i width w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oscillator {
    pub strength: f64,
    pub resonance: f64,
    pub width: f64,
}

impl Oscillator {
    pub fn new(strength: f64, resonance: f64, width: f64) -> Self {
        Oscillator {
            strength,
            resonance,
            width,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.strength > 0.0 && self.resonance > 0.0 && self.width > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "oscillator needs positive strength, resonance and width: {self:?}"
            )))
        }
    }

    fn denominator(&self, w: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        self.resonance * self.resonance - w * w - i * self.width * w
    }

    pub(crate) fn value(&self, w: Complex64) -> Complex64 {
        self.strength / self.denominator(w)
    }

    pub(crate) fn derivative(&self, w: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        let d = self.denominator(w);
        self.strength * (2.0 * w + i * self.width) / (d * d)
    }

    pub(crate) fn imag_axis(&self, zeta: f64) -> f64 {
        self.strength / (self.resonance * self.resonance + zeta * zeta + self.width * zeta)
    }
}

/// Background polarization of the lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeTerm {
    /// Frequency-independent `eps_L >= 1`.
    Constant(f64),
    /// `eps_L(w) = 1 + sum of oscillators`.
    Oscillators(Vec<Oscillator>),
}

impl Default for LatticeTerm {
    fn default() -> Self {
        LatticeTerm::Constant(1.0)
    }
}

impl LatticeTerm {
    pub fn validate(&self) -> Result<()> {
        match self {
            LatticeTerm::Constant(e) if *e >= 1.0 && e.is_finite() => Ok(()),
            LatticeTerm::Constant(e) => Err(Error::InvalidParameter(format!(
                "constant lattice permittivity must be >= 1, got {e}"
            ))),
            LatticeTerm::Oscillators(list) => list.iter().try_for_each(Oscillator::validate),
        }
    }

    pub fn value(&self, w: Complex64) -> Complex64 {
        match self {
            LatticeTerm::Constant(e) => Complex64::new(*e, 0.0),
            LatticeTerm::Oscillators(list) => {
                list.iter().fold(Complex64::new(1.0, 0.0), |acc, o| acc + o.value(w))
            }
        }
    }

    pub fn derivative(&self, w: Complex64) -> Complex64 {
        match self {
            LatticeTerm::Constant(_) => Complex64::new(0.0, 0.0),
            LatticeTerm::Oscillators(list) => list.iter().map(|o| o.derivative(w)).sum(),
        }
    }

    /// `eps_L(i zeta) - 1`, real and non-negative.
    pub fn chi_imag(&self, zeta: f64) -> f64 {
        match self {
            LatticeTerm::Constant(e) => e - 1.0,
            LatticeTerm::Oscillators(list) => list.iter().map(|o| o.imag_axis(zeta)).sum(),
        }
    }

    pub fn static_value(&self) -> f64 {
        1.0 + self.chi_imag(0.0)
    }

    pub fn high_frequency_value(&self) -> f64 {
        match self {
            LatticeTerm::Constant(e) => *e,
            LatticeTerm::Oscillators(_) => 1.0,
        }
    }

    pub(crate) fn oscillators(&self) -> &[Oscillator] {
        match self {
            LatticeTerm::Constant(_) => &[],
            LatticeTerm::Oscillators(list) => list,
        }
    }

    pub(crate) fn is_lossless(&self) -> bool {
        self.oscillators().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn activated_law_vanishes_at_zero_temperature() {
        let law = TemperatureLaw::Activated { sigma0: 2.0, gap: 0.5 };
        assert_eq!(law.at(0.0), 0.0);
        assert!((law.at(0.5) - 2.0 * (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn power_law_returns_residual_at_zero() {
        let law = TemperatureLaw::PowerLaw {
            residual: 0.05,
            amplitude: 1.0,
            exponent: 2.0,
        };
        assert_eq!(law.at(0.0), 0.05);
        assert!((law.at(0.1) - 0.06).abs() < 1e-15);
    }

    #[test]
    fn invalid_laws_are_rejected() {
        assert!(TemperatureLaw::constant(-1.0).validate().is_err());
        assert!(TemperatureLaw::PowerLaw {
            residual: 0.0,
            amplitude: 1.0,
            exponent: 0.0
        }
        .validate()
        .is_err());
    }

    #[test]
    fn lattice_static_and_imaginary_axis() {
        let lat = LatticeTerm::Oscillators(vec![Oscillator::new(1.0, 1.0, 0.1)]);
        assert_eq!(lat.static_value(), 2.0);
        assert!((lat.chi_imag(1.0) - 1.0 / 2.1).abs() < 1e-15);
        assert!(LatticeTerm::Constant(0.5).validate().is_err());
    }
}
