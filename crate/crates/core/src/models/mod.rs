//! Dielectric response models.
//!
//! Everything is in reduced units: frequencies and temperatures are
//! dimensionless multiples of a reference frequency, with `hbar = k_B = 1`.

mod law;
mod table;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

pub use law::{LatticeTerm, Oscillator, TemperatureLaw};
pub use table::{TailLaw, Table};

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Beyond this `|w|` the closed forms are replaced by their asymptote, which
/// avoids overflow in `w^2`.
const FREQUENCY_CEILING: f64 = 1e100;

/// Order of the pole of `eps(w)` at `w = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoleOrder {
    Regular,
    First,
    Second,
}

impl fmt::Display for PoleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoleOrder::Regular => "regular",
            PoleOrder::First => "first-order",
            PoleOrder::Second => "second-order",
        })
    }
}

/// `eps(i zeta)` as `zeta -> 0+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticLimit {
    Finite(f64),
    Pole(PoleOrder),
}

impl StaticLimit {
    /// `r(i 0+)`: exactly 1 for any pole, `inf` for `eps(0) = 1`.
    pub fn reflection(&self) -> f64 {
        match *self {
            StaticLimit::Pole(_) => 1.0,
            StaticLimit::Finite(e) if e == 1.0 => f64::INFINITY,
            StaticLimit::Finite(e) => (e + 1.0) / (e - 1.0),
        }
    }

    /// `eps(0) - 1`, infinite for a pole.
    pub fn chi(&self) -> f64 {
        match *self {
            StaticLimit::Pole(_) => f64::INFINITY,
            StaticLimit::Finite(e) => e - 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DielectricModel {
    /// `1 - wp^2 / w^2`
    Plasma { wp: f64 },
    /// `eps_L(w) - wp^2 / (w (w + i gamma(T)))`
    Drude {
        wp: f64,
        gamma: TemperatureLaw,
        #[serde(default)]
        lattice: LatticeTerm,
    },
    /// `eps_L(w) + 4 pi i sigma(T) / w`
    Conductivity {
        lattice: LatticeTerm,
        sigma: TemperatureLaw,
    },
    /// `1 + sum_j f_j / (w_j^2 - w^2 - i gamma_j w)`
    LorentzLattice { oscillators: Vec<Oscillator> },
    Tabulated(Table),
    /// `eps_L(w) - wp^2 / (w (w + i gamma) - k^2 R_D^2 wp^2)`
    Hydrodynamic {
        wp: f64,
        gamma: f64,
        debye_radius: f64,
        #[serde(default)]
        lattice: LatticeTerm,
    },
}

impl DielectricModel {
    pub fn plasma(wp: f64) -> Self {
        DielectricModel::Plasma { wp }
    }

    /// Drude model with a constant relaxation rate and vacuum lattice.
    pub fn drude(wp: f64, gamma: f64) -> Self {
        DielectricModel::Drude {
            wp,
            gamma: TemperatureLaw::constant(gamma),
            lattice: LatticeTerm::default(),
        }
    }

    pub fn conductivity(lattice: LatticeTerm, sigma: TemperatureLaw) -> Self {
        DielectricModel::Conductivity { lattice, sigma }
    }

    pub fn lorentz(oscillators: Vec<Oscillator>) -> Self {
        DielectricModel::LorentzLattice { oscillators }
    }

    pub fn hydrodynamic(wp: f64, gamma: f64, debye_radius: f64, lattice: LatticeTerm) -> Self {
        DielectricModel::Hydrodynamic {
            wp,
            gamma,
            debye_radius,
            lattice,
        }
    }

    /// Hydrodynamic model with `R_D = (T / (m wp^2))^(1/2)`.
    pub fn hydrodynamic_from_temperature(
        wp: f64,
        gamma: f64,
        temperature: f64,
        mass: f64,
        lattice: LatticeTerm,
    ) -> Result<Self> {
        let rd = crate::nonlocal::debye_radius(temperature, mass, wp)?;
        let m = Self::hydrodynamic(wp, gamma, rd, lattice);
        m.validate()?;
        Ok(m)
    }

    pub fn name(&self) -> &'static str {
        match self {
            DielectricModel::Plasma { .. } => "plasma",
            DielectricModel::Drude { .. } => "drude",
            DielectricModel::Conductivity { .. } => "conductivity",
            DielectricModel::LorentzLattice { .. } => "lorentz",
            DielectricModel::Tabulated(_) => "tabulated",
            DielectricModel::Hydrodynamic { .. } => "hydrodynamic",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
            }
        };
        match self {
            DielectricModel::Plasma { wp } => positive("wp", *wp),
            DielectricModel::Drude { wp, gamma, lattice } => {
                positive("wp", *wp)?;
                gamma.validate()?;
                lattice.validate()
            }
            DielectricModel::Conductivity { lattice, sigma } => {
                sigma.validate()?;
                lattice.validate()
            }
            DielectricModel::LorentzLattice { oscillators } => {
                oscillators.iter().try_for_each(Oscillator::validate)
            }
            DielectricModel::Tabulated(t) => t.validate(),
            DielectricModel::Hydrodynamic {
                wp,
                gamma,
                debye_radius,
                lattice,
            } => {
                positive("wp", *wp)?;
                positive("debye_radius", *debye_radius)?;
                if !(*gamma >= 0.0 && gamma.is_finite()) {
                    return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {gamma}")));
                }
                lattice.validate()
            }
        }
    }

    /// Plasma frequency used as the sum-rule reference, if the model has one.
    pub fn plasma_frequency(&self) -> Option<f64> {
        match self {
            DielectricModel::Plasma { wp }
            | DielectricModel::Drude { wp, .. }
            | DielectricModel::Hydrodynamic { wp, .. } => Some(*wp),
            DielectricModel::Tabulated(t) => t.plasma_frequency,
            _ => None,
        }
    }

    /// `lim eps(w)` as `w -> inf`.
    pub fn eps_infinity(&self) -> f64 {
        match self {
            DielectricModel::Drude { lattice, .. }
            | DielectricModel::Conductivity { lattice, .. }
            | DielectricModel::Hydrodynamic { lattice, .. } => lattice.high_frequency_value(),
            _ => 1.0,
        }
    }

    /// True when `Im eps(w) = 0` for every real `w > 0` at this temperature.
    pub fn is_lossless(&self, temperature: f64) -> bool {
        match self {
            DielectricModel::Plasma { .. } => true,
            DielectricModel::Drude { gamma, lattice, .. } => {
                gamma.at(temperature) == 0.0 && lattice.is_lossless()
            }
            DielectricModel::Conductivity { lattice, sigma } => {
                sigma.at(temperature) == 0.0 && lattice.is_lossless()
            }
            DielectricModel::LorentzLattice { oscillators } => oscillators.is_empty(),
            DielectricModel::Tabulated(t) => t.is_identically_zero(),
            DielectricModel::Hydrodynamic { gamma, lattice, .. } => *gamma == 0.0 && lattice.is_lossless(),
        }
    }

    /// Complex permittivity at complex frequency for the closed-form local
    /// variants.
    pub(crate) fn eps_complex(&self, w: Complex64, temperature: f64) -> Result<Complex64> {
        if w.norm() > FREQUENCY_CEILING && !matches!(self, DielectricModel::Tabulated(_) | DielectricModel::Hydrodynamic { .. }) {
            return Ok(Complex64::new(self.eps_infinity(), 0.0));
        }
        match self {
            DielectricModel::Plasma { wp } => Ok(1.0 - wp * wp / (w * w)),
            DielectricModel::Drude { wp, gamma, lattice } => {
                let g = gamma.at(temperature);
                Ok(lattice.value(w) - wp * wp / (w * (w + I * g)))
            }
            DielectricModel::Conductivity { lattice, sigma } => {
                Ok(lattice.value(w) + I * (4.0 * PI * sigma.at(temperature)) / w)
            }
            DielectricModel::LorentzLattice { oscillators } => {
                Ok(oscillators.iter().fold(Complex64::new(1.0, 0.0), |acc, o| acc + o.value(w)))
            }
            DielectricModel::Tabulated(_) => Err(Error::Unsupported(
                "tabulated data has no analytic continuation off the real axis".into(),
            )),
            DielectricModel::Hydrodynamic { .. } => Err(Error::NeedsWaveVector),
        }
    }

    /// `d eps / d w` for the closed-form local variants.
    pub(crate) fn eps_derivative(&self, w: Complex64, temperature: f64) -> Result<Complex64> {
        match self {
            DielectricModel::Plasma { wp } => Ok(2.0 * wp * wp / (w * w * w)),
            DielectricModel::Drude { wp, gamma, lattice } => {
                let g = gamma.at(temperature);
                let d = w * (w + I * g);
                Ok(lattice.derivative(w) + wp * wp * (2.0 * w + I * g) / (d * d))
            }
            DielectricModel::Conductivity { lattice, sigma } => {
                Ok(lattice.derivative(w) - I * (4.0 * PI * sigma.at(temperature)) / (w * w))
            }
            DielectricModel::LorentzLattice { oscillators } => {
                Ok(oscillators.iter().map(|o| o.derivative(w)).sum())
            }
            DielectricModel::Tabulated(_) => Err(Error::Unsupported(
                "tabulated data has no analytic continuation off the real axis".into(),
            )),
            DielectricModel::Hydrodynamic { .. } => Err(Error::NeedsWaveVector),
        }
    }

    /// `Im eps(w)` on the real axis, `w > 0`.
    pub fn im_eps(&self, w: f64, temperature: f64) -> Result<f64> {
        match self {
            DielectricModel::Tabulated(t) => Ok(t.im_eps(w)),
            _ => Ok(self.eps_complex(Complex64::new(w, 0.0), temperature)?.im),
        }
    }

    /// `eps(i zeta) - 1` for `zeta >= 0`. At `zeta = 0` a pole is reported as
    /// [`Error::PoleAtZero`].
    pub fn chi_imag(&self, zeta: f64, temperature: f64) -> Result<f64> {
        if !(zeta >= 0.0) {
            return Err(Error::Domain(format!("zeta must be >= 0, got {zeta}")));
        }
        if zeta == 0.0 {
            return match self.static_limit(temperature)? {
                StaticLimit::Finite(e) => Ok(e - 1.0),
                StaticLimit::Pole(order) => Err(Error::PoleAtZero(order)),
            };
        }
        match self {
            DielectricModel::Plasma { wp } => Ok(wp * wp / (zeta * zeta)),
            DielectricModel::Drude { wp, gamma, lattice } => {
                Ok(lattice.chi_imag(zeta) + wp * wp / (zeta * (zeta + gamma.at(temperature))))
            }
            DielectricModel::Conductivity { lattice, sigma } => {
                Ok(lattice.chi_imag(zeta) + 4.0 * PI * sigma.at(temperature) / zeta)
            }
            DielectricModel::LorentzLattice { oscillators } => {
                Ok(oscillators.iter().map(|o| o.imag_axis(zeta)).sum())
            }
            DielectricModel::Tabulated(t) => t.chi_imag(zeta),
            DielectricModel::Hydrodynamic { .. } => Err(Error::NeedsWaveVector),
        }
    }

    /// Analytic `zeta -> 0+` behaviour of `eps(i zeta)`.
    pub fn static_limit(&self, temperature: f64) -> Result<StaticLimit> {
        Ok(match self {
            DielectricModel::Plasma { .. } => StaticLimit::Pole(PoleOrder::Second),
            DielectricModel::Drude { gamma, .. } => {
                if gamma.at(temperature) > 0.0 {
                    StaticLimit::Pole(PoleOrder::First)
                } else {
                    StaticLimit::Pole(PoleOrder::Second)
                }
            }
            DielectricModel::Conductivity { lattice, sigma } => {
                if sigma.at(temperature) > 0.0 {
                    StaticLimit::Pole(PoleOrder::First)
                } else {
                    StaticLimit::Finite(lattice.static_value())
                }
            }
            DielectricModel::LorentzLattice { oscillators } => {
                StaticLimit::Finite(1.0 + oscillators.iter().map(|o| o.imag_axis(0.0)).sum::<f64>())
            }
            DielectricModel::Tabulated(t) => match t.low_tail {
                TailLaw::PowerLaw { exponent } if exponent == 1.0 => StaticLimit::Pole(PoleOrder::First),
                _ => StaticLimit::Finite(1.0 + t.chi_imag(0.0)?),
            },
            DielectricModel::Hydrodynamic { .. } => return Err(Error::NeedsWaveVector),
        })
    }

    /// Pole order at `w = 0`; the hydrodynamic model is classified at a
    /// fixed wave vector `k > 0`.
    pub fn pole_order(&self, temperature: f64) -> Result<PoleOrder> {
        match self {
            DielectricModel::Hydrodynamic { .. } => Ok(PoleOrder::Regular),
            _ => Ok(match self.static_limit(temperature)? {
                StaticLimit::Finite(_) => PoleOrder::Regular,
                StaticLimit::Pole(p) => p,
            }),
        }
    }

    /// The frequency beyond which `eps` approaches 1.
    pub fn characteristic_frequency(&self, temperature: f64) -> f64 {
        let lattice_scale = |lat: &LatticeTerm| {
            lat.oscillators()
                .iter()
                .map(|o| o.resonance)
                .fold(f64::INFINITY, f64::min)
        };
        let s = match self {
            DielectricModel::Plasma { wp }
            | DielectricModel::Drude { wp, .. }
            | DielectricModel::Hydrodynamic { wp, .. } => *wp,
            DielectricModel::Conductivity { lattice, sigma } => {
                let l = lattice_scale(lattice);
                let c = 4.0 * PI * sigma.at(temperature);
                match (l.is_finite(), c > 0.0) {
                    (true, true) => l.min(c),
                    (true, false) => l,
                    (false, true) => c,
                    (false, false) => 1.0,
                }
            }
            DielectricModel::LorentzLattice { oscillators } => oscillators
                .iter()
                .map(|o| o.resonance)
                .fold(f64::INFINITY, f64::min),
            DielectricModel::Tabulated(t) => t.peak_frequency(),
        };
        if s.is_finite() && s > 0.0 {
            s
        } else {
            1.0
        }
    }

    /// Frequencies where the real-axis response has structure: resonances,
    /// relaxation rates, the surface-plasmon frequency.
    pub(crate) fn feature_frequencies(&self, temperature: f64) -> Vec<f64> {
        let mut f = Vec::new();
        let push_lattice = |lat: &[Oscillator], f: &mut Vec<f64>| {
            for o in lat {
                f.extend([o.resonance - 5.0 * o.width, o.resonance, o.resonance + 5.0 * o.width]);
                f.push(o.width);
            }
        };
        match self {
            DielectricModel::Plasma { wp } => f.extend([wp / 2f64.sqrt(), *wp, 10.0 * wp]),
            DielectricModel::Drude { wp, gamma, lattice } => {
                let g = gamma.at(temperature);
                let eps_l = lattice.high_frequency_value();
                let wsp = wp / (eps_l + 1.0).sqrt();
                f.extend([g, wsp - 5.0 * g, wsp, wsp + 5.0 * g, *wp, 10.0 * wp]);
                push_lattice(lattice.oscillators(), &mut f);
            }
            DielectricModel::Conductivity { lattice, sigma } => {
                f.push(4.0 * PI * sigma.at(temperature));
                push_lattice(lattice.oscillators(), &mut f);
            }
            DielectricModel::LorentzLattice { oscillators } => push_lattice(oscillators, &mut f),
            DielectricModel::Tabulated(t) => f.push(t.peak_frequency()),
            DielectricModel::Hydrodynamic { wp, gamma, lattice, .. } => {
                f.extend([*gamma, *wp, 10.0 * wp]);
                push_lattice(lattice.oscillators(), &mut f);
            }
        }
        f.retain(|x| x.is_finite() && *x > 0.0);
        f.sort_by(f64::total_cmp);
        f.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        f
    }

    /// `eps(w)` as a ratio of polynomials in `w` for the rational variants;
    /// the hydrodynamic variant is taken at wave number `k`.
    pub(crate) fn rational(&self, temperature: f64, k: f64) -> Option<(Poly, Poly)> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let one = Poly::constant(c(1.0, 0.0));
        let lattice_terms = |lat: &LatticeTerm| -> Vec<(Poly, Poly)> {
            match lat {
                LatticeTerm::Constant(e) => vec![(Poly::constant(c(*e, 0.0)), Poly::constant(c(1.0, 0.0)))],
                LatticeTerm::Oscillators(list) => {
                    let mut v = vec![(Poly::constant(c(1.0, 0.0)), Poly::constant(c(1.0, 0.0)))];
                    v.extend(list.iter().map(oscillator_fraction));
                    v
                }
            }
        };
        let terms: Vec<(Poly, Poly)> = match self {
            DielectricModel::Plasma { wp } => vec![
                (one.clone(), one.clone()),
                (Poly::constant(c(-wp * wp, 0.0)), Poly::from_real(&[0.0, 0.0, 1.0])),
            ],
            DielectricModel::Drude { wp, gamma, lattice } => {
                let g = gamma.at(temperature);
                let mut v = lattice_terms(lattice);
                v.push((
                    Poly::constant(c(-wp * wp, 0.0)),
                    Poly(vec![c(0.0, 0.0), c(0.0, g), c(1.0, 0.0)]),
                ));
                v
            }
            DielectricModel::Conductivity { lattice, sigma } => {
                let mut v = lattice_terms(lattice);
                v.push((
                    Poly::constant(c(0.0, 4.0 * PI * sigma.at(temperature))),
                    Poly::from_real(&[0.0, 1.0]),
                ));
                v
            }
            DielectricModel::LorentzLattice { oscillators } => {
                let mut v = vec![(one.clone(), one.clone())];
                v.extend(oscillators.iter().map(oscillator_fraction));
                v
            }
            DielectricModel::Tabulated(_) => return None,
            DielectricModel::Hydrodynamic {
                wp,
                gamma,
                debye_radius,
                lattice,
            } => {
                let mut v = lattice_terms(lattice);
                let shift = k * k * debye_radius * debye_radius * wp * wp;
                v.push((
                    Poly::constant(c(-wp * wp, 0.0)),
                    Poly(vec![c(-shift, 0.0), c(0.0, *gamma), c(1.0, 0.0)]),
                ));
                v
            }
        };
        let mut num = Poly::constant(c(0.0, 0.0));
        let mut den = one;
        for (n, d) in terms {
            num = num.mul(&d).add(&n.mul(&den));
            den = den.mul(&d);
        }
        Some((num, den))
    }
}

fn oscillator_fraction(o: &Oscillator) -> (Poly, Poly) {
    (
        Poly::from_real(&[o.strength]),
        Poly(vec![
            Complex64::new(o.resonance * o.resonance, 0.0),
            Complex64::new(0.0, -o.width),
            Complex64::new(-1.0, 0.0),
        ]),
    )
}

/// `eps(w + i delta)` on the real axis at temperature `T`.
///
/// Tabulated data is returned as the `delta -> 0+` limit: the stored
/// `Im eps` together with its Kramers-Kronig partner.
pub fn eval_real_axis(model: &DielectricModel, omega: f64, delta: f64, temperature: f64) -> Result<Complex64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!("delta must be >= 0, got {delta}")));
    }
    match model {
        DielectricModel::Tabulated(t) => {
            let re = crate::admissibility::kk_reconstruct_re(model, omega, temperature, None)?;
            Ok(Complex64::new(re, t.im_eps(omega)))
        }
        _ => model.eps_complex(Complex64::new(omega, delta), temperature),
    }
}

/// Real `eps(i zeta)`.
pub fn eval_imag_axis(model: &DielectricModel, zeta: f64, temperature: f64) -> Result<f64> {
    Ok(1.0 + model.chi_imag(zeta, temperature)?)
}

/// `eps(i zeta) = 1 + (2/pi) int_0^inf x Im eps(x) / (x^2 + zeta^2) dx`.
pub fn epsilon_ik_from_table(table: &Table, zeta: f64) -> Result<f64> {
    if !(zeta > 0.0) {
        return Err(Error::Domain(format!("zeta must be positive, got {zeta}")));
    }
    Ok(1.0 + table.chi_imag(zeta)?)
}

/// `r = (eps + 1) / (eps - 1)`.
pub fn reflection_factor(eps: Complex64) -> Result<Complex64> {
    if eps == Complex64::new(1.0, 0.0) {
        return Err(Error::VacuumDegeneracy);
    }
    if eps.is_infinite() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok((eps + 1.0) / (eps - 1.0))
}

fn hydrodynamic_parts(model: &DielectricModel) -> Result<(f64, f64, f64, &LatticeTerm)> {
    match model {
        DielectricModel::Hydrodynamic {
            wp,
            gamma,
            debye_radius,
            lattice,
        } => Ok((*wp, *gamma, *debye_radius, lattice)),
        other => Err(Error::Unsupported(format!(
            "spatial dispersion is only defined for the hydrodynamic model, not {}",
            other.name()
        ))),
    }
}

/// `eps(w, k) = eps_L(w) - wp^2 / (w (w + i gamma) - k^2 R_D^2 wp^2)`.
pub fn eval_nonlocal(model: &DielectricModel, omega: f64, k: f64) -> Result<Complex64> {
    let (wp, gamma, rd, lattice) = hydrodynamic_parts(model)?;
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("k must be >= 0, got {k}")));
    }
    let w = Complex64::new(omega, 0.0);
    let shift = k * k * rd * rd * wp * wp;
    if k.is_infinite() {
        return Ok(lattice.value(w));
    }
    Ok(lattice.value(w) - wp * wp / (w * (w + I * gamma) - shift))
}

/// Low-frequency form `eps_L(0) + 4 pi i sigma / (w + 4 pi i sigma k^2 R_D^2)`
/// with `4 pi sigma = wp^2 / gamma`. Intended for `w << gamma`.
pub fn eval_nonlocal_lowfreq(model: &DielectricModel, omega: f64, k: f64) -> Result<Complex64> {
    let (wp, gamma, rd, lattice) = hydrodynamic_parts(model)?;
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("k must be >= 0, got {k}")));
    }
    let four_pi_sigma = if gamma > 0.0 { wp * wp / gamma } else { f64::INFINITY };
    Ok(screened_conductor(lattice.static_value(), four_pi_sigma, k, rd, omega))
}

/// `eps_L0 + i s / (w + i s k^2 R_D^2)` with `s = 4 pi sigma`; the `s -> inf`
/// limit is taken analytically.
pub(crate) fn screened_conductor(eps_l0: f64, four_pi_sigma: f64, k: f64, rd: f64, omega: f64) -> Complex64 {
    let kr2 = k * k * rd * rd;
    if four_pi_sigma.is_infinite() {
        return Complex64::new(eps_l0 + 1.0 / kr2, 0.0);
    }
    eps_l0 + I * four_pi_sigma / (omega + I * four_pi_sigma * kr2)
}

/// `(1/k^2) sum k_a k_b eps_ab`.
pub fn longitudinal_projection(tensor: &[[Complex64; 3]; 3], k: [f64; 3]) -> Result<Complex64> {
    let k2: f64 = k.iter().map(|x| x * x).sum();
    if k2 == 0.0 {
        return Err(Error::ZeroWaveVector);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..3 {
        for b in 0..3 {
            acc += k[a] * k[b] * tensor[a][b];
        }
    }
    Ok(acc / k2)
}
