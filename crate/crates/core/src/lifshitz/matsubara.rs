use std::cell::RefCell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{kernel_from_chi, Diagnostics, PressureResult, Route};
use crate::error::{Error, Result};
use crate::models::DielectricModel;
use crate::quadrature::{self, Tolerance};

/// Terms summed explicitly before the remainder is integrated.
const N_DIRECT: usize = 4096;

/// The Matsubara series `1/2 I_0 + sum_{n>=1} I_n` with its truncation record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatsubaraSpectrum {
    pub temperature: f64,
    /// `zeta_n = 2 pi n T` for `n = 0..=n_max`.
    pub zeta: Vec<f64>,
    /// `I_n = I(r^2(i zeta_n))`; `I_0` is stored at full weight.
    pub kernels: Vec<f64>,
    pub n_max: usize,
    /// `1/2 I_0 + sum_{n=1}^{n_max} I_n`
    pub partial_sum: f64,
    /// Estimate of `sum_{n > n_max} I_n`.
    pub tail: f64,
    /// Error bound on `tail`.
    pub tail_error: f64,
    /// Local power-law decay exponent of the last terms.
    pub decay_exponent: f64,
}

impl MatsubaraSpectrum {
    pub fn total(&self) -> f64 {
        self.partial_sum + self.tail
    }

    pub fn error(&self, rtol: f64) -> f64 {
        self.tail_error + rtol * self.partial_sum.abs()
    }
}

/// Sum `kernel(n, zeta_n)` over Matsubara frequencies, `n = 0` at half
/// weight, until a term drops below `rtol` times the partial sum or
/// `N_DIRECT` terms have been taken. The remainder is the midpoint integral
/// `(1 / 2 pi T) int_{zeta_N + pi T}^inf I d zeta` with its Euler-Maclaurin
/// correction; for it the kernel is also sampled between Matsubara
/// frequencies, with `n` the next index above `zeta`.
///
/// `scale` is the frequency beyond which the response is expected to have
/// died out; terms that still fail to decay faster than `1/n` far beyond it
/// are reported as divergence.
pub fn matsubara_series<F>(temperature: f64, rtol: f64, scale: f64, mut kernel: F) -> Result<MatsubaraSpectrum>
where
    F: FnMut(usize, f64) -> Result<f64>,
{
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Domain(format!("temperature must be positive, got {temperature}")));
    }
    check_rtol(rtol)?;
    let step = 2.0 * PI * temperature;
    let i0 = kernel(0, 0.0)?;
    let mut zeta = vec![0.0];
    let mut kernels = vec![i0];
    let mut partial = 0.5 * i0;
    let mut n = 0;
    loop {
        n += 1;
        let z = step * n as f64;
        let i_n = kernel(n, z)?;
        if !i_n.is_finite() {
            return Err(Error::non_convergence("Matsubara sum", format!("term {n} is not finite")));
        }
        zeta.push(z);
        kernels.push(i_n);
        partial += i_n;
        if i_n <= rtol * partial.abs() || n == N_DIRECT {
            break;
        }
    }
    let last = kernels[n];
    let p = if n >= 2 && kernels[n / 2] > 0.0 && last > 0.0 {
        (kernels[n / 2] / last).ln() / (n as f64 / (n / 2) as f64).ln()
    } else {
        f64::INFINITY
    };
    if n == N_DIRECT && last > 0.0 && (!(p > 1.0) || (zeta[n] > 100.0 * scale && last > 0.5 * kernels[n / 2])) {
        return Err(Error::Divergence(format!(
            "Matsubara terms decay as n^-{p:.3} (I_{n} = {last:e}); the response must vanish at high frequency"
        )));
    }
    let (tail, tail_error) = if last == 0.0 {
        (0.0, 0.0)
    } else {
        integral_tail(&mut kernel, n, step, scale, rtol * partial.abs())?
    };
    Ok(MatsubaraSpectrum {
        temperature,
        zeta,
        kernels,
        n_max: n,
        partial_sum: partial,
        tail,
        tail_error,
        decay_exponent: p,
    })
}

/// `sum_{m > n} f(m) ~ int_{n+1/2}^inf f + f'(n + 1/2) / 24`.
fn integral_tail<F>(kernel: &mut F, n: usize, step: f64, scale: f64, budget: f64) -> Result<(f64, f64)>
where
    F: FnMut(usize, f64) -> Result<f64>,
{
    let start = step * (n as f64 + 0.5);
    let failure = RefCell::new(None);
    let q = {
        let mut f = |z: f64| match kernel((z / step).ceil() as usize, z) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        };
        quadrature::integrate_to_infinity(
            &mut f,
            &[start],
            start.max(scale),
            Tolerance::new(0.1 * budget * step, 1e-10),
        )
    };
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let q = q?;
    let slope = kernel(n + 1, step * (n + 1) as f64)? - kernel(n, step * n as f64)?;
    let correction = slope / 24.0;
    Ok((q.value / step + correction, q.error / step + 0.1 * correction.abs()))
}

fn check_rtol(rtol: f64) -> Result<()> {
    if rtol > 0.0 && rtol < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("rtol must lie in (0, 1), got {rtol}")))
    }
}

/// Models whose non-retarded force is finite: local, with `eps(i inf) = 1`.
pub(crate) fn check_summable(model: &DielectricModel) -> Result<()> {
    model.validate()?;
    if matches!(model, DielectricModel::Hydrodynamic { .. }) {
        return Err(Error::NeedsWaveVector);
    }
    let e_inf = model.eps_infinity();
    if e_inf != 1.0 {
        return Err(Error::Divergence(format!(
            "eps -> {e_inf} at high frequency; the non-retarded kernel needs eps(i inf) = 1"
        )));
    }
    Ok(())
}

pub(crate) fn spectrum(model: &DielectricModel, temperature: f64, rtol: f64) -> Result<MatsubaraSpectrum> {
    check_summable(model)?;
    let chi0 = model.static_limit(temperature)?.chi();
    let scale = model.characteristic_frequency(temperature);
    matsubara_series(temperature, rtol, scale, |n, z| {
        if n == 0 {
            Ok(kernel_from_chi(chi0))
        } else {
            Ok(kernel_from_chi(model.chi_imag(z, temperature)?))
        }
    })
}

pub(crate) fn lossless_warning(model: &DielectricModel, temperature: f64) -> Vec<String> {
    if model.is_lossless(temperature) {
        vec![format!("{} model has no dissipation and fails the admissibility audit", model.name())]
    } else {
        Vec::new()
    }
}

/// `Phi = (T / 8 pi) [1/2 I(r^2(i 0+)) + sum_{n>=1} I(r^2(i zeta_n))]`.
pub fn matsubara_pressure(model: &DielectricModel, temperature: f64, rtol: f64) -> Result<PressureResult> {
    let s = spectrum(model, temperature, rtol)?;
    let pre = temperature / (8.0 * PI);
    Ok(PressureResult {
        phi: pre * s.total(),
        route: Route::Matsubara,
        err_estimate: pre * s.error(rtol),
        temperature: Some(temperature),
        diagnostics: Diagnostics {
            terms: Some(s.n_max + 1),
            tail: Some(s.tail),
            evaluations: None,
            warnings: lossless_warning(model, temperature),
        },
    })
}

/// High-temperature limit: only the `n = 0` term survives. Returns the
/// coefficient `Phi / T = I(r^2(0)) / (16 pi)`.
pub fn classical_limit(model: &DielectricModel, temperature: f64) -> Result<PressureResult> {
    model.validate()?;
    if matches!(model, DielectricModel::Hydrodynamic { .. }) {
        return Err(Error::NeedsWaveVector);
    }
    let chi0 = model.static_limit(temperature)?.chi();
    let phi = kernel_from_chi(chi0) / (16.0 * PI);
    Ok(PressureResult {
        phi,
        route: Route::Classical,
        err_estimate: 4.0 * f64::EPSILON * phi,
        temperature: Some(temperature),
        diagnostics: Diagnostics {
            terms: Some(1),
            ..Default::default()
        },
    })
}

/// `Phi = (1 / 16 pi^2) int_0^inf I(r^2(i zeta)) d zeta` with every
/// temperature law evaluated at `T = 0`.
pub fn zero_t_pressure(model: &DielectricModel, rtol: f64) -> Result<PressureResult> {
    check_summable(model)?;
    check_rtol(rtol)?;
    let scale = model.characteristic_frequency(0.0);
    let failure = RefCell::new(None);
    let f = |z: f64| match model.chi_imag(z, 0.0) {
        Ok(chi) => kernel_from_chi(chi),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let q = quadrature::integrate_to_infinity(f, &[0.0], scale, Tolerance::new(0.0, rtol));
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let q = q?;
    let pre = 1.0 / (16.0 * PI * PI);
    Ok(PressureResult {
        phi: pre * q.value,
        route: Route::ZeroT,
        err_estimate: pre * q.error,
        temperature: Some(0.0),
        diagnostics: Diagnostics {
            evaluations: Some(q.evaluations),
            warnings: lossless_warning(model, 0.0),
            ..Default::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{LatticeTerm, Oscillator, TemperatureLaw};
    use crate::special::ZETA3;

    // (1/16 pi^2) * kappa for the plasma model with wp = 1, kappa from an
    // arbitrary-precision double quadrature.
    const PLASMA_ZERO_T: f64 = 0.007_810_418_558_012_995_5;

    #[test]
    fn ideal_metal_diverges() {
        let r = matsubara_series(1.0, 1e-8, 1.0, |_, _| Ok(2.0 * ZETA3));
        assert!(matches!(r, Err(Error::Divergence(_))), "{r:?}");
    }

    #[test]
    fn plasma_high_temperature_is_dominated_by_n0() {
        let r = matsubara_pressure(&DielectricModel::plasma(1.0), 2.0, 1e-10).unwrap();
        let n0 = 2.0 / (16.0 * PI) * 2.0 * ZETA3;
        assert!((n0 - 0.09566).abs() < 1e-5);
        assert!(r.phi > n0 && r.phi - n0 < 1e-3 * n0, "{}", r.phi);
        assert!(!r.diagnostics.warnings.is_empty());
    }

    #[test]
    fn plasma_zero_temperature_matches_reference() {
        let r = zero_t_pressure(&DielectricModel::plasma(1.0), 1e-10).unwrap();
        assert!((r.phi - PLASMA_ZERO_T).abs() < 1e-11 * PLASMA_ZERO_T, "{}", r.phi);
        let r2 = zero_t_pressure(&DielectricModel::plasma(2.0), 1e-10).unwrap();
        assert!((r2.phi - 2.0 * r.phi).abs() < 1e-10 * r.phi);
    }

    #[test]
    fn drude_low_temperature_matches_zero_temperature() {
        let m = DielectricModel::drude(1.0, 0.1);
        let low = matsubara_pressure(&m, 0.01, 1e-10).unwrap().phi;
        let zero = zero_t_pressure(&m, 1e-8).unwrap().phi;
        assert!((low - zero).abs() < 1e-3 * zero, "{low} vs {zero}");
    }

    #[test]
    fn drude_approaches_plasma_as_gamma_vanishes() {
        let plasma = zero_t_pressure(&DielectricModel::plasma(1.0), 1e-10).unwrap().phi;
        let gaps: Vec<f64> = [0.1, 0.01, 0.001]
            .iter()
            .map(|&g| plasma - zero_t_pressure(&DielectricModel::drude(1.0, g), 1e-10).unwrap().phi)
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] > 0.0, "{gaps:?}");
        assert!(gaps[2] < 1e-3 * plasma);
    }

    #[test]
    fn vacuum_gives_zero() {
        let vac = DielectricModel::lorentz(vec![]);
        assert_eq!(zero_t_pressure(&vac, 1e-8).unwrap().phi, 0.0);
        assert_eq!(matsubara_pressure(&vac, 0.5, 1e-8).unwrap().phi, 0.0);
        assert_eq!(classical_limit(&vac, 0.5).unwrap().phi, 0.0);
    }

    #[test]
    fn classical_coefficients() {
        let metal = classical_limit(&DielectricModel::drude(1.0, 0.1), 1.0).unwrap().phi;
        assert!((metal - 0.047_828_324_503_896_293).abs() < 1e-15);
        // eps(0) = 3, r = 2: 2 Li3(1/4) / (16 pi)
        let d = DielectricModel::lorentz(vec![Oscillator::new(2.0, 1.0, 0.1)]);
        let c = classical_limit(&d, 1.0).unwrap().phi;
        assert!((c - 0.010_283_852_184_863_865).abs() < 1e-15, "{c}");
    }

    #[test]
    fn constant_lattice_conductor_diverges() {
        let m = DielectricModel::conductivity(LatticeTerm::Constant(12.0), TemperatureLaw::constant(0.5));
        assert!(matches!(matsubara_pressure(&m, 0.1, 1e-8), Err(Error::Divergence(_))));
        assert!(matches!(zero_t_pressure(&m, 1e-8), Err(Error::Divergence(_))));
    }

    #[test]
    fn hydrodynamic_needs_a_wave_vector() {
        let h = DielectricModel::hydrodynamic(1.0, 0.1, 1.0, LatticeTerm::default());
        assert!(matches!(matsubara_pressure(&h, 0.1, 1e-8), Err(Error::NeedsWaveVector)));
    }

    #[test]
    fn weaker_response_gives_weaker_pressure() {
        let mut last = f64::INFINITY;
        for wp in [2.0, 1.0, 0.5, 0.25] {
            let phi = matsubara_pressure(&DielectricModel::drude(wp, 0.1), 0.2, 1e-10).unwrap().phi;
            assert!(phi <= last);
            last = phi;
        }
    }

    #[test]
    fn spectrum_records_truncation() {
        let s = spectrum(&DielectricModel::drude(1.0, 0.1), 0.1, 1e-8).unwrap();
        assert_eq!(s.zeta.len(), s.n_max + 1);
        assert!(s.tail > 0.0 && s.tail < 1e-5 * s.partial_sum);
        assert!((s.decay_exponent - 4.0).abs() < 0.2, "{}", s.decay_exponent);
        assert!(s.kernels.windows(2).skip(1).all(|w| w[1] < w[0]));
    }
}
