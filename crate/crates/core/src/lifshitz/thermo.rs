use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::matsubara::spectrum;
use super::{FreeEnergyResult, Route};
use crate::error::{Error, Result};
use crate::models::DielectricModel;

const ENTROPY_RTOL: f64 = 1e-12;
const STENCIL_REL: f64 = 1e-2;
const STENCIL_ABS: f64 = 1e-6;

/// `Psi = (T / 16 pi) [1/2 I(r^2(i 0+)) + sum_{n>=1} I(r^2(i zeta_n))]`, so
/// that `Phi = 2 Psi`.
pub fn free_energy(model: &DielectricModel, temperature: f64, rtol: f64) -> Result<FreeEnergyResult> {
    let s = spectrum(model, temperature, rtol)?;
    let pre = temperature / (16.0 * PI);
    Ok(FreeEnergyResult {
        psi: pre * s.total(),
        temperature,
        route: Route::Matsubara,
        err_estimate: pre * s.error(rtol),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entropy {
    pub temperature: f64,
    pub step: f64,
    /// Richardson-extrapolated `-dPsi/dT`.
    pub sigma: f64,
    /// Central difference with step `h`.
    pub coarse: f64,
    /// Central difference with step `h / 2`.
    pub fine: f64,
}

/// Reduced entropy per unit area `-dPsi/dT` by central differences with one
/// Richardson step.
pub fn entropy(model: &DielectricModel, temperature: f64, step: f64) -> Result<Entropy> {
    if !(step > 0.0 && temperature > step) {
        return Err(Error::Domain(format!(
            "need T > h > 0, got T = {temperature}, h = {step}"
        )));
    }
    let psi = |t: f64| free_energy(model, t, ENTROPY_RTOL).map(|r| r.psi);
    let central = |h: f64| -> Result<f64> { Ok(-(psi(temperature + h)? - psi(temperature - h)?) / (2.0 * h)) };
    let coarse = central(step)?;
    let fine = central(0.5 * step)?;
    if (coarse - fine).abs() > STENCIL_REL * fine.abs() + STENCIL_ABS {
        return Err(Error::StepTooLarge { coarse, fine });
    }
    Ok(Entropy {
        temperature,
        step,
        sigma: (4.0 * fine - coarse) / 3.0,
        coarse,
        fine,
    })
}

/// Value at `x = 0` of the polynomial through the given points (Neville).
pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("no points to extrapolate".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let mut p: Vec<f64> = points.iter().map(|p| p.1).collect();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            if xi == xj {
                return Err(Error::InvalidParameter("duplicate abscissae".into()));
            }
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    Ok(p[0])
}
