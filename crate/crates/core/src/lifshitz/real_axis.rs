use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::matsubara::{check_summable, lossless_warning};
use super::{Diagnostics, PressureResult, Route};
use crate::error::{Error, Result};
use crate::models::{self, DielectricModel};
use crate::quadrature::{self, Tolerance};
use crate::special::li3_exp;

/// `atanh(z)` keeping full relative precision for small `|z|`.
fn atanh_c(z: Complex64) -> Complex64 {
    if z.norm() < 0.05 {
        let z2 = z * z;
        let mut term = z;
        let mut acc = z;
        for k in 1..8 {
            term *= z2;
            acc += term / (2 * k + 1) as f64;
        }
        acc
    } else {
        z.atanh()
    }
}

/// `coth(w / 2T)`, with the small-argument series below `w = 1e-3 T`.
fn coth_half(w: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    if w < 1e-3 * temperature {
        2.0 * temperature / w + w / (6.0 * temperature)
    } else {
        1.0 / (w / (2.0 * temperature)).tanh()
    }
}

/// `Im I(r^2(w)) = Im 2 Li3(1/r^2)` on the real axis; `ln(1/r^2) = -4 atanh(1/eps)`.
pub(crate) fn im_kernel(eps: Complex64) -> f64 {
    if eps == Complex64::new(1.0, 0.0) {
        return 0.0;
    }
    let mu = -4.0 * atanh_c(eps.inv());
    2.0 * li3_exp(mu).im
}

/// Real-frequency route:
/// `Phi = (1 / 16 pi^2) int_0^inf coth(w / 2T) Im I(r^2(w)) dw`.
///
/// A model without absorption is rejected unless an explicit `delta > 0`
/// is supplied, in which case `eps(w + i delta)` is used.
pub fn real_axis_pressure(
    model: &DielectricModel,
    temperature: f64,
    rtol: f64,
    delta: Option<f64>,
) -> Result<PressureResult> {
    check_summable(model)?;
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::Domain(format!("temperature must be >= 0, got {temperature}")));
    }
    if !(rtol > 0.0 && rtol < 1.0) {
        return Err(Error::InvalidParameter(format!("rtol must lie in (0, 1), got {rtol}")));
    }
    let delta = delta.unwrap_or(0.0);
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!("delta must be >= 0, got {delta}")));
    }
    if delta == 0.0 && model.is_lossless(temperature) {
        return Err(Error::NoDissipation(format!(
            "{} has Im eps = 0 on the real axis; supply an explicit delta or use the Matsubara route",
            model.name()
        )));
    }
    let mut points = vec![0.0];
    points.extend(model.feature_frequencies(temperature));
    let scale = model.characteristic_frequency(temperature);
    let failure = RefCell::new(None);
    let f = |w: f64| match models::eval_real_axis(model, w, delta, temperature) {
        Ok(eps) => coth_half(w, temperature) * im_kernel(eps),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let q = quadrature::integrate_to_infinity(f, &points, scale, Tolerance::new(0.0, rtol));
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let q = q?;
    let pre = 1.0 / (16.0 * PI * PI);
    Ok(PressureResult {
        phi: pre * q.value,
        route: Route::RealAxis,
        err_estimate: pre * q.error,
        temperature: Some(temperature),
        diagnostics: Diagnostics {
            evaluations: Some(q.evaluations),
            warnings: lossless_warning(model, temperature),
            ..Default::default()
        },
    })
}
