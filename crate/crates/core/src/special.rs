//! Trilogarithm on the principal branch.
//!
//! The kernels of the pressure formulas reduce to `2 Li3(1/A)`. On the
//! imaginary frequency axis `A` is real and the kernel is evaluated by
//! quadrature (see [`crate::lifshitz::kernel_i`]); on the real axis `A` is
//! complex and the closed form below is used instead.
//!
//! `li3_exp` takes the logarithm `mu = ln z` rather than `z` itself, which
//! keeps full relative precision when `z` sits next to the branch point
//! `z = 1` (highly conducting media at low frequency).

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Apery's constant.
pub const ZETA3: f64 = 1.202_056_903_159_594_3;
/// `zeta(2) = pi^2 / 6`.
pub const ZETA2: f64 = PI * PI / 6.0;

const MU_SERIES_RADIUS: f64 = 3.5;
const MU_SERIES_TERMS: usize = 90;

/// Coefficients `c_m` of `mu^(2m+2)` in the expansion of `Li3(e^mu)` about
/// `mu = 0`, for m >= 1. They equal `zeta(1-2m) / (2m+2)!`.
fn mu_series_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let two_pi = 2.0 * PI;
        (1..=MU_SERIES_TERMS / 2)
            .map(|m| {
                let m_f = m as f64;
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let k = 2.0 * m_f;
                sign * 2.0 * zeta_even(m) / (two_pi.powf(k) * k * (k + 1.0) * (k + 2.0))
            })
            .collect()
    })
}

/// `zeta(2m)` for m >= 1.
fn zeta_even(m: usize) -> f64 {
    match m {
        1 => ZETA2,
        2 => PI.powi(4) / 90.0,
        3 => PI.powi(6) / 945.0,
        _ => {
            let s = 2 * m as i32;
            let mut acc = 0.0;
            for n in (1..=64).rev() {
                acc += (n as f64).powi(-s);
            }
            acc
        }
    }
}

fn wrap_imag(mu: Complex64) -> Complex64 {
    let mut im = mu.im;
    if im > PI || im <= -PI {
        im -= 2.0 * PI * ((im + PI) / (2.0 * PI)).floor();
        if im <= -PI {
            im += 2.0 * PI;
        }
    }
    Complex64::new(mu.re, im)
}

/// `Li3(e^mu)` on the principal branch (cut along real `z > 1`).
pub fn li3_exp(mu: Complex64) -> Complex64 {
    let mu = wrap_imag(mu);
    if mu.re > 0.0 {
        // Inversion: Li3(z) = Li3(1/z) - pi^2/6 ln(-z) - ln^3(-z)/6.
        let l = if mu.im > 0.0 {
            mu - Complex64::new(0.0, PI)
        } else {
            mu + Complex64::new(0.0, PI)
        };
        return li3_exp_inside(-mu) - l * (ZETA2 + l * l / 6.0);
    }
    li3_exp_inside(mu)
}

/// `Li3(z)` for complex `z` on the principal branch.
pub fn li3(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    li3_exp(z.ln())
}

/// `Li3(x)` for real `x <= 1`.
pub fn li3_real(x: f64) -> f64 {
    assert!(x <= 1.0, "li3_real needs x <= 1");
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return ZETA3;
    }
    if x > 0.0 {
        li3_exp(Complex64::new(x.ln(), 0.0)).re
    } else {
        li3(Complex64::new(x, 0.0)).re
    }
}

// |e^mu| <= 1 and Im(mu) in (-pi, pi].
fn li3_exp_inside(mu: Complex64) -> Complex64 {
    if mu.norm() < MU_SERIES_RADIUS {
        mu_series(mu)
    } else {
        z_series(mu.exp())
    }
}

fn mu_series(mu: Complex64) -> Complex64 {
    if mu == Complex64::new(0.0, 0.0) {
        return Complex64::new(ZETA3, 0.0);
    }
    let mu2 = mu * mu;
    let mut acc = Complex64::new(ZETA3, 0.0)
        + mu * ZETA2
        + mu2 * 0.5 * (Complex64::new(1.5, 0.0) - (-mu).ln())
        - mu2 * mu / 12.0;
    let mut power = mu2 * mu2;
    for &c in mu_series_coefficients() {
        let term = power * c;
        acc += term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
        power *= mu2;
    }
    acc
}

fn z_series(z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut power = z;
    for k in 1..200 {
        let kf = k as f64;
        let term = power / (kf * kf * kf);
        acc += term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
        power *= z;
    }
    acc
}
