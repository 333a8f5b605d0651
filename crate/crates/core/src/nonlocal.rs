//! Spatial dispersion: the locality criterion, Debye screening, and the
//! order of the `T -> 0` and `w -> 0` limits with and without it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{screened_conductor, TemperatureLaw};

/// Beyond this magnitude a limit sequence is treated as divergent.
const DIVERGENCE_BOUND: f64 = 1e12;
const INNER_LAMBDA: f64 = 1e300;
const OUTER_LAMBDA: f64 = 64.0;
const COMMUTE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationScales {
    pub mean_velocity: f64,
    pub gamma: f64,
    pub omega: f64,
    /// `v / gamma`, infinite without collisions.
    pub l_mfp: f64,
    /// `v / w`
    pub l_omega: f64,
    pub r_cor: f64,
}

impl CorrelationScales {
    pub fn new(mean_velocity: f64, gamma: f64, omega: f64) -> Result<Self> {
        if !(mean_velocity > 0.0 && gamma >= 0.0 && omega > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need v > 0, gamma >= 0, w > 0; got v = {mean_velocity}, gamma = {gamma}, w = {omega}"
            )));
        }
        let l_mfp = if gamma == 0.0 {
            f64::INFINITY
        } else {
            mean_velocity / gamma
        };
        let l_omega = mean_velocity / omega;
        Ok(CorrelationScales {
            mean_velocity,
            gamma,
            omega,
            l_mfp,
            l_omega,
            r_cor: l_mfp.min(l_omega),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locality {
    Local,
    Nonlocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub locality: Locality,
    /// `k r_cor`; the boundary is placed at 1.
    pub margin: f64,
}

pub fn locality_check(scales: &CorrelationScales, k: f64) -> Result<LocalityReport> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("k must be positive, got {k}")));
    }
    let margin = k * scales.r_cor;
    Ok(LocalityReport {
        locality: if margin < 1.0 { Locality::Local } else { Locality::Nonlocal },
        margin,
    })
}

/// `R_D = (T / (m wp^2))^(1/2)`; zero at `T = 0`.
pub fn debye_radius(temperature: f64, mass: f64, wp: f64) -> Result<f64> {
    if !(temperature >= 0.0 && mass > 0.0 && wp > 0.0) {
        return Err(Error::Domain(format!(
            "need T >= 0, m > 0, wp > 0; got T = {temperature}, m = {mass}, wp = {wp}"
        )));
    }
    Ok((temperature / (mass * wp * wp)).sqrt())
}

/// Temperature dependence of the Debye radius in the commutation check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scaling", rename_all = "snake_case")]
pub enum RdScaling {
    Fixed { rd: f64 },
    /// `R_D(T) = rd_at_unit_t / sqrt(T)`
    InverseSqrtT { rd_at_unit_t: f64 },
}

impl RdScaling {
    fn at(&self, temperature: f64) -> f64 {
        match *self {
            RdScaling::Fixed { rd } => rd,
            RdScaling::InverseSqrtT { rd_at_unit_t } => rd_at_unit_t / temperature.sqrt(),
        }
    }
}

/// A conductor whose permittivity depends on frequency and temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ConductorFamily {
    /// `eps_L0 + 4 pi i sigma(T) / w`
    Local { eps_l0: f64, sigma: TemperatureLaw },
    /// `eps_L0 + 4 pi i sigma(T) / (w + 4 pi i sigma(T) k^2 R_D(T)^2)`
    Screened {
        eps_l0: f64,
        sigma: TemperatureLaw,
        debye: RdScaling,
    },
}

/// `ln(4 pi sigma(T))` from `ln T`, finite where `sigma(T)` itself would
/// underflow.
fn ln_four_pi_sigma(law: &TemperatureLaw, ln_t: f64) -> f64 {
    let ln_sigma = match *law {
        TemperatureLaw::Activated { sigma0, gap } => sigma0.ln() - gap * (-ln_t).exp(),
        _ => law.at(ln_t.exp()).ln(),
    };
    (4.0 * PI).ln() + ln_sigma
}

impl ConductorFamily {
    pub fn eval(&self, omega: f64, temperature: f64, k: f64) -> Complex64 {
        match self {
            ConductorFamily::Local { eps_l0, sigma } => {
                let s = 4.0 * PI * sigma.at(temperature);
                Complex64::new(*eps_l0, s / omega)
            }
            ConductorFamily::Screened { eps_l0, sigma, debye } => {
                let s = 4.0 * PI * sigma.at(temperature);
                screened_conductor(*eps_l0, s, k, debye.at(temperature), omega)
            }
        }
    }

    /// `eps` at `w = e^ln_w`, `T = e^ln_t`, evaluated through logarithms so
    /// that neither frequency nor conductivity needs to be representable.
    fn eval_log(&self, ln_w: f64, ln_t: f64, k: f64) -> LimitValue {
        match self {
            ConductorFamily::Local { eps_l0, sigma } => {
                let ln_term = ln_four_pi_sigma(sigma, ln_t) - ln_w;
                if ln_term > DIVERGENCE_BOUND.ln() {
                    LimitValue::Divergent
                } else {
                    finite(Complex64::new(*eps_l0, ln_term.exp()))
                }
            }
            ConductorFamily::Screened { eps_l0, sigma, debye } => {
                // i s / (w + i s a) = i / (w/s + i a), a = k^2 R_D^2
                let ratio = (ln_w - ln_four_pi_sigma(sigma, ln_t)).exp();
                let a = match *debye {
                    RdScaling::Fixed { rd } => k * k * rd * rd,
                    RdScaling::InverseSqrtT { rd_at_unit_t } => k * k * rd_at_unit_t * rd_at_unit_t * (-ln_t).exp(),
                };
                let term = if ratio.is_infinite() || a.is_infinite() {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, 1.0) / Complex64::new(ratio, a)
                };
                finite(*eps_l0 + term)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitValue {
    Finite { re: f64, im: f64 },
    Divergent,
}

impl LimitValue {
    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            LimitValue::Finite { re, im } => Some(Complex64::new(re, im)),
            LimitValue::Divergent => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub family: ConductorFamily,
    pub k: f64,
    /// `lim_{w->0} lim_{T->0} eps`
    pub t_then_omega: LimitValue,
    /// `lim_{T->0} lim_{w->0} eps`
    pub omega_then_t: LimitValue,
    pub commute: bool,
}

/// Limit as `x -> 0` along `x = exp(-lambda)`, `lambda = 1.5^j` up to
/// `lambda_max`; `f` receives `ln x`. The whole grid is walked: the limit is
/// finite only if the last three values agree.
fn limit<F: Fn(f64) -> LimitValue>(f: F, lambda_max: f64) -> LimitValue {
    let mut values = Vec::new();
    let mut lambda = 1.0;
    while lambda <= lambda_max {
        values.push(f(-lambda));
        lambda *= 1.5;
    }
    let tail: Vec<Option<Complex64>> = values.iter().rev().take(3).map(LimitValue::finite).collect();
    match tail.as_slice() {
        [Some(a), Some(b), Some(c)] if (a - b).norm() <= 1e-9 * (1.0 + a.norm()) && (b - c).norm() <= 1e-9 * (1.0 + a.norm()) => {
            LimitValue::Finite { re: a.re, im: a.im }
        }
        _ => LimitValue::Divergent,
    }
}

fn finite(v: Complex64) -> LimitValue {
    if v.is_finite() && v.norm() < DIVERGENCE_BOUND {
        LimitValue::Finite { re: v.re, im: v.im }
    } else {
        LimitValue::Divergent
    }
}

/// Evaluate both orders of the `T -> 0`, `w -> 0` limits at wave number `k`.
///
/// The inner limit runs much further towards zero than the outer one, so
/// that it is resolved at every outer grid point.
pub fn limit_commutation_check(family: &ConductorFamily, k: f64) -> Result<CommutationReport> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("k must be positive, got {k}")));
    }
    let t_then_omega = limit(|ln_w| limit(|ln_t| family.eval_log(ln_w, ln_t, k), INNER_LAMBDA), OUTER_LAMBDA);
    let omega_then_t = limit(|ln_t| limit(|ln_w| family.eval_log(ln_w, ln_t, k), INNER_LAMBDA), OUTER_LAMBDA);
    let commute = match (t_then_omega.finite(), omega_then_t.finite()) {
        (Some(a), Some(b)) => (a - b).norm() < COMMUTE_TOL,
        (None, None) => true,
        _ => false,
    };
    Ok(CommutationReport {
        family: family.clone(),
        k,
        t_then_omega,
        omega_then_t,
        commute,
    })
}
