//! Non-retarded Casimir-Lifshitz pressure between identical planar
//! half-spaces.
//!
//! Three routes compute the same reduced pressure: the Matsubara sum over
//! imaginary frequencies ([`lifshitz::matsubara_pressure`]), the real-frequency
//! integral ([`lifshitz::real_axis_pressure`]) and the zero-point energy of the
//! coupled surface modes ([`modesum::pressure_from_modes`]). Dielectric models
//! can be audited for causality, positivity of absorption and sum rules
//! ([`admissibility::audit`]).
//!
//! All quantities are reduced: frequencies and temperatures are multiples of a
//! reference frequency with `hbar = k_B = 1`, and the pressure is
//! `Phi = f l^3 / (hbar W)`.

pub mod admissibility;
pub mod error;
pub mod lifshitz;
pub mod modesum;
pub mod models;
pub mod nonlocal;
pub mod poly;
pub mod quadrature;
pub mod special;

pub use admissibility::{AdmissibilityReport, AuditOptions, Verdict};
pub use error::{Error, Result};
pub use lifshitz::{FreeEnergyResult, MatsubaraSpectrum, PressureResult, Route};
pub use modesum::ModeSpectrum;
pub use models::{DielectricModel, LatticeTerm, Oscillator, PoleOrder, Table, TailLaw, TemperatureLaw};
