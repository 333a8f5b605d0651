//! Surface-mode route at zero temperature.
//!
//! The coupled surface plasmons of the gap solve `r(w) = +/- e^(-ql)`. Their
//! zero-point energy, minus the energy of the decoupled surfaces, is the
//! binding free energy.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifshitz::{Diagnostics, FreeEnergyResult, PressureResult, Route};
use crate::models::{DielectricModel, LatticeTerm};
use crate::quadrature::{self, Tolerance};

const GRID_POINTS: usize = 512;
const MIN_CONTOUR_NODES: usize = 4000;
const CONTOUR_TOL: f64 = 1e-8;

/// Models the mode sum accepts: real `eps` on the real axis, a single
/// free-carrier pole over a constant background.
#[derive(Debug, Clone, Copy)]
enum Modes {
    Vacuum,
    Carriers { wp: f64 },
}

fn classify(model: &DielectricModel) -> Result<Modes> {
    model.validate()?;
    match model {
        DielectricModel::Plasma { wp } => Ok(Modes::Carriers { wp: *wp }),
        DielectricModel::Drude {
            wp,
            gamma,
            lattice: LatticeTerm::Constant(_),
        } if gamma.at(0.0) == 0.0 => Ok(Modes::Carriers { wp: *wp }),
        DielectricModel::LorentzLattice { oscillators } if oscillators.is_empty() => Ok(Modes::Vacuum),
        other => Err(Error::Unsupported(format!(
            "the mode sum needs real eps on the real axis with a single free-carrier pole; {} is not",
            other.name()
        ))),
    }
}

fn eps_real(model: &DielectricModel, w: f64) -> Result<f64> {
    Ok(model.eps_complex(Complex64::new(w, 0.0), 0.0)?.re)
}

/// `r(w) - s` on `[0, w_max]`; `r(0+) = 1` for the free-carrier pole.
fn mode_root(model: &DielectricModel, wp: f64, s: f64) -> Result<f64> {
    let f = |w: f64| -> Result<f64> {
        if w == 0.0 {
            return Ok(1.0 - s);
        }
        let e = eps_real(model, w)?;
        Ok((e + 1.0) / (e - 1.0) - s)
    };
    let w_max = 2.0 * wp;
    let mut a = 0.0;
    let mut fa = f(a)?;
    for k in 1..=GRID_POINTS {
        let b = w_max * k as f64 / GRID_POINTS as f64;
        let fb = f(b)?;
        if fb == 0.0 {
            return Ok(b);
        }
        if fa.signum() != fb.signum() {
            if let Some(root) = bisect(&f, a, b, fa)? {
                return Ok(root);
            }
        }
        a = b;
        fa = fb;
    }
    Err(Error::Bracketing(format!("no solution of r(w) = {s} in (0, {w_max})")))
}

/// Bisect a sign change; `None` if it turns out to be a pole.
fn bisect<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> Result<Option<f64>> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(Some(m));
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let m = 0.5 * (a + b);
    Ok(if f(m)?.abs() < 1e-9 { Some(m) } else { None })
}

/// `(w_-, w_+)`, the solutions of `r(w) = e^(-ql)` and `r(w) = -e^(-ql)`.
pub fn surface_mode_frequencies(model: &DielectricModel, ql: f64) -> Result<(f64, f64)> {
    if !(ql > 0.0) {
        return Err(Error::Domain(format!("ql must be positive, got {ql}")));
    }
    match classify(model)? {
        Modes::Vacuum => Err(Error::VacuumDegeneracy),
        Modes::Carriers { wp } => {
            let e = (-ql).exp();
            Ok((mode_root(model, wp, e)?, mode_root(model, wp, -e)?))
        }
    }
}

/// Frequency both branches approach as `ql -> inf`: the single-surface
/// plasmon, `r(w) = 0`.
pub fn decoupled_frequency(model: &DielectricModel) -> Result<f64> {
    match classify(model)? {
        Modes::Vacuum => Err(Error::VacuumDegeneracy),
        Modes::Carriers { wp } => mode_root(model, wp, 0.0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub model: String,
    pub ql: Vec<f64>,
    pub omega_minus: Vec<f64>,
    pub omega_plus: Vec<f64>,
    pub omega_inf: f64,
}

impl ModeSpectrum {
    pub fn compute(model: &DielectricModel, ql: &[f64]) -> Result<Self> {
        let omega_inf = decoupled_frequency(model)?;
        let mut omega_minus = Vec::with_capacity(ql.len());
        let mut omega_plus = Vec::with_capacity(ql.len());
        for &t in ql {
            let (m, p) = surface_mode_frequencies(model, t)?;
            omega_minus.push(m);
            omega_plus.push(p);
        }
        Ok(ModeSpectrum {
            model: model.name().to_string(),
            ql: ql.to_vec(),
            omega_minus,
            omega_plus,
            omega_inf,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("ql,omega_minus,omega_plus\n");
        for ((q, m), p) in self.ql.iter().zip(&self.omega_minus).zip(&self.omega_plus) {
            out.push_str(&format!("{q:.16e},{m:.16e},{p:.16e}\n"));
        }
        out
    }
}

/// Axis-aligned rectangle in the complex frequency plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rectangle {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Self {
        Rectangle {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
        }
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSum {
    pub value: Complex64,
    pub nodes: usize,
    /// Change in the estimate at the last refinement.
    pub change: f64,
}

/// `(1 / 2 pi i) oint w h'(w) / h(w) dw` with
/// `h = (eps + 1)^2 - e^(-2 ql) (eps - 1)^2`.
///
/// The zeros of `h` are the surface modes. Its only poles are those of `eps`,
/// which do not depend on `ql`; for the free-carrier pole at `w = 0` their
/// contribution to the sum vanishes.
pub fn argument_principle_sum(model: &DielectricModel, ql: f64, contour: Rectangle) -> Result<ContourSum> {
    classify(model)?;
    if !(ql > 0.0) {
        return Err(Error::Domain(format!("ql must be positive, got {ql}")));
    }
    if !(contour.re_max > contour.re_min && contour.im_max > contour.im_min) {
        return Err(Error::Domain(format!("degenerate contour {contour:?}")));
    }
    let e2 = (-2.0 * ql).exp();
    let integrand = |w: Complex64| -> Result<Complex64> {
        let eps = model.eps_complex(w, 0.0)?;
        let d_eps = model.eps_derivative(w, 0.0)?;
        let h = (eps + 1.0).powi(2) - e2 * (eps - 1.0).powi(2);
        if !h.is_finite() || h.norm() < 1e-12 {
            return Err(Error::PoleOnContour { re: w.re, im: w.im });
        }
        let dh = 2.0 * d_eps * ((eps + 1.0) - e2 * (eps - 1.0));
        Ok(w * dh / h)
    };
    let corners = contour.corners();
    let lengths: Vec<f64> = (0..4).map(|i| (corners[(i + 1) % 4] - corners[i]).norm()).collect();
    let perimeter: f64 = lengths.iter().sum();
    let base: Vec<usize> = lengths
        .iter()
        .map(|l| ((MIN_CONTOUR_NODES as f64 * l / perimeter).ceil() as usize).max(1))
        .collect();
    let trapezoid = |factor: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for side in 0..4 {
            let (z0, z1) = (corners[side], corners[(side + 1) % 4]);
            let m = base[side] * factor;
            let dz = (z1 - z0) / m as f64;
            let mut s = 0.5 * (integrand(z0)? + integrand(z1)?);
            for j in 1..m {
                s += integrand(z0 + dz * j as f64)?;
            }
            acc += s * dz;
        }
        Ok(acc / Complex64::new(0.0, 2.0 * PI))
    };
    // Romberg on the per-side trapezoid sums.
    let mut rows: Vec<Vec<Complex64>> = vec![vec![trapezoid(1)?]];
    let mut factor = 1;
    for level in 1..8 {
        factor *= 2;
        let mut row = vec![trapezoid(factor)?];
        let mut pow4 = 1.0;
        for j in 1..=level {
            pow4 *= 4.0;
            let prev = rows[level - 1][j - 1];
            let cur = row[j - 1];
            row.push(cur + (cur - prev) / (pow4 - 1.0));
        }
        let change = (row[level] - rows[level - 1][level - 1]).norm();
        let nodes = base.iter().sum::<usize>() * factor;
        let done = change < CONTOUR_TOL;
        let value = row[level];
        rows.push(row);
        if done {
            return Ok(ContourSum { value, nodes, change });
        }
    }
    Err(Error::non_convergence(
        "argument-principle contour sum",
        format!("no agreement to {CONTOUR_TOL:e} after {} nodes", base.iter().sum::<usize>() * factor),
    ))
}

fn t_integral(model: &DielectricModel, rtol: f64, upper: f64) -> Result<quadrature::Quadrature> {
    if !(rtol > 0.0 && rtol < 1.0) {
        return Err(Error::InvalidParameter(format!("rtol must lie in (0, 1), got {rtol}")));
    }
    let w_inf = decoupled_frequency(model)?;
    let failure = RefCell::new(None);
    let f = |t: f64| match surface_mode_frequencies(model, t) {
        Ok((m, p)) => t * 0.5 * (m + p - 2.0 * w_inf),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let tol = Tolerance::new(1e-16 * w_inf, rtol);
    let q = if upper.is_finite() {
        quadrature::integrate_panels(f, &[0.0, 0.5, 2.0, 8.0, upper.max(8.0)], tol)
    } else {
        quadrature::integrate_to_infinity(f, &[0.0, 0.5, 2.0, 8.0], 5.0, tol)
    };
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    q
}

/// `Psi_modes = (1 / 2 pi) int_0^inf t (1/2) [w_+(t) + w_-(t) - 2 w_inf] dt`,
/// negative (a binding energy).
pub fn zero_t_free_energy_modes(model: &DielectricModel, rtol: f64) -> Result<FreeEnergyResult> {
    if let Modes::Vacuum = classify(model)? {
        return Ok(FreeEnergyResult {
            psi: 0.0,
            temperature: 0.0,
            route: Route::Modes,
            err_estimate: 0.0,
        });
    }
    let q = t_integral(model, rtol, f64::INFINITY)?;
    Ok(FreeEnergyResult {
        psi: q.value / (2.0 * PI),
        temperature: 0.0,
        route: Route::Modes,
        err_estimate: q.error / (2.0 * PI),
    })
}

/// `|Phi_modes| = 2 |Psi_modes|`, reported positive (attraction).
pub fn pressure_from_modes(model: &DielectricModel, rtol: f64) -> Result<PressureResult> {
    let fe = zero_t_free_energy_modes(model, rtol)?;
    Ok(PressureResult {
        phi: 2.0 * fe.psi.abs(),
        route: Route::Modes,
        err_estimate: 2.0 * fe.err_estimate,
        temperature: Some(0.0),
        diagnostics: Diagnostics {
            warnings: vec!["mode-sum binding energy is negative; |Phi| is reported".to_string()],
            ..Default::default()
        },
    })
}
