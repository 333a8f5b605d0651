use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};
use crate::special::{li3_exp, ZETA3};

/// `I(A) = int_0^inf x^2 / (A e^x - 1) dx` by adaptive quadrature.
///
/// `A = inf` gives 0. Accurate to about `1e-13` absolute.
pub fn kernel_i(a: f64) -> Result<f64> {
    if a.is_nan() || a < 1.0 {
        return Err(Error::Domain(format!("kernel argument must be >= 1, got {a}")));
    }
    if a.is_infinite() {
        return Ok(0.0);
    }
    let am1 = a - 1.0;
    // x^2 e^-x / ((A - 1) + (1 - e^-x)), written to stay exact as x -> 0.
    let f = |x: f64| x * x * (-x).exp() / (am1 - (-x).exp_m1());
    let q = quadrature::integrate_to_infinity(f, &[0.0, 1.0, 5.0, 15.0, 40.0], 10.0, Tolerance::new(1e-14, 1e-14))?;
    Ok(q.value)
}

/// `I(r^2)` for `r = 1 + 2/chi`, `chi = eps - 1 >= 0`, via `2 Li3(1/r^2)`.
/// `chi = inf` (a pole) gives `2 zeta(3)`, `chi = 0` gives 0.
pub(crate) fn kernel_from_chi(chi: f64) -> f64 {
    if chi == 0.0 {
        return 0.0;
    }
    if chi.is_infinite() {
        return 2.0 * ZETA3;
    }
    let ln_a = 2.0 * (2.0 / chi).ln_1p();
    2.0 * li3_exp(Complex64::new(-ln_a, 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metal_value() {
        assert!((kernel_i(1.0).unwrap() - 2.0 * ZETA3).abs() < 1e-12);
        assert!((kernel_from_chi(f64::INFINITY) - 2.0 * ZETA3).abs() < 1e-15);
    }

    #[test]
    fn quadrature_and_polylog_agree() {
        for chi in [1e-4, 0.01, 0.3, 2.0, 50.0, 1e5] {
            let r = 1.0 + 2.0 / chi;
            let q = kernel_i(r * r).unwrap();
            assert!((q - kernel_from_chi(chi)).abs() < 1e-12, "chi {chi}");
        }
    }

    #[test]
    fn limits_and_domain() {
        assert_eq!(kernel_i(f64::INFINITY).unwrap(), 0.0);
        assert_eq!(kernel_from_chi(0.0), 0.0);
        assert!(matches!(kernel_i(0.5), Err(Error::Domain(_))));
        assert!(matches!(kernel_i(f64::NAN), Err(Error::Domain(_))));
    }
}
