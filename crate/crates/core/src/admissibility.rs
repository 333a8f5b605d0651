//! Physical admissibility of dielectric models: positivity of absorption,
//! Kramers-Kronig consistency, the f-sum rule and the pole structure at
//! `w = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{self, DielectricModel, PoleOrder, TailLaw};
use crate::quadrature::{self, Tolerance};

const KK_TOL: Tolerance = Tolerance { abs: 1e-13, rel: 1e-11 };
const SUM_RULE_TOL: f64 = 1e-3;
const KK_RESIDUAL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditOptions {
    pub temperature: f64,
    /// Wave number at which the hydrodynamic model is audited.
    pub wave_number: f64,
    /// Frequencies for the positivity check.
    pub grid: Vec<f64>,
    /// Band over which the Kramers-Kronig residual is measured.
    pub kk_band: (f64, f64),
    pub kk_points: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            temperature: 0.0,
            wave_number: 1.0,
            grid: log_grid(1e-3, 1e3, 121),
            kk_band: (0.1, 10.0),
            kk_points: 41,
        }
    }
}

/// `n` logarithmically spaced points from `a` to `b` inclusive.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let r = (b / a).ln();
    (0..n)
        .map(|i| a * (r * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImPositivity {
    pub pass: bool,
    pub worst_omega: f64,
    pub worst_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumRule {
    /// `int_0^cutoff w Im eps(w) dw`
    pub integral: f64,
    /// `(pi/2) wp^2` when the model declares a plasma frequency.
    pub reference: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Admissible,
    Inadmissible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub model: String,
    pub im_positivity: ImPositivity,
    /// Max error of the Kramers-Kronig reconstruction of `Re eps`, relative
    /// where `|Re eps| > 1` and absolute elsewhere; `None` when no independent
    /// `Re eps` exists.
    pub kk_residual: Option<f64>,
    pub sum_rule_ratio: Option<f64>,
    pub sum_rule_integral: Option<f64>,
    pub pole_order: PoleOrder,
    pub limit_omega2_eps: f64,
    /// Zeros of `eps` with `Im w > 0`; `None` when not checked.
    pub upper_half_plane_zeros: Option<usize>,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
    pub notes: Vec<String>,
}

/// Real-axis response of a model at fixed temperature (and wave number for
/// the hydrodynamic model).
struct Response<'a> {
    model: &'a DielectricModel,
    temperature: f64,
    k: Option<f64>,
}

impl<'a> Response<'a> {
    fn new(model: &'a DielectricModel, temperature: f64, k: Option<f64>) -> Result<Self> {
        model.validate()?;
        if matches!(model, DielectricModel::Hydrodynamic { .. }) && k.is_none() {
            return Err(Error::NeedsWaveVector);
        }
        Ok(Response { model, temperature, k })
    }

    fn im(&self, w: f64) -> f64 {
        match (self.model, self.k) {
            (DielectricModel::Hydrodynamic { .. }, Some(k)) => {
                models::eval_nonlocal(self.model, w, k).map(|e| e.im).unwrap_or(f64::NAN)
            }
            _ => self.model.im_eps(w, self.temperature).unwrap_or(f64::NAN),
        }
    }

    /// Closed-form `Re eps`, unavailable for tabulated data.
    fn re(&self, w: f64) -> Option<f64> {
        match (self.model, self.k) {
            (DielectricModel::Tabulated(_), _) => None,
            (DielectricModel::Hydrodynamic { .. }, Some(k)) => models::eval_nonlocal(self.model, w, k).ok().map(|e| e.re),
            _ => models::eval_real_axis(self.model, w, 0.0, self.temperature).ok().map(|e| e.re),
        }
    }

    fn eps_infinity(&self) -> f64 {
        self.model.eps_infinity()
    }

    /// Breakpoints strictly inside `(lo, hi)`.
    fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts = self.model.feature_frequencies(self.temperature);
        if let (DielectricModel::Hydrodynamic { wp, debye_radius, .. }, Some(k)) = (self.model, self.k) {
            pts.push(k * debye_radius * wp);
        }
        if let DielectricModel::Tabulated(t) = self.model {
            pts.extend_from_slice(t.omega());
        }
        pts.retain(|&x| x > lo && x < hi);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    fn scale(&self) -> f64 {
        match self.model {
            DielectricModel::Tabulated(t) => *t.omega().last().unwrap(),
            _ => self.model.characteristic_frequency(self.temperature),
        }
    }

    /// `int_lo^hi f(x) dx` with the model's breakpoints; `hi = inf` allowed.
    fn integrate<F: FnMut(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> Result<f64> {
        if hi <= lo {
            return Ok(0.0);
        }
        let mut pts = vec![lo];
        pts.extend(self.breakpoints(lo, hi));
        if hi.is_finite() {
            pts.push(hi);
            Ok(quadrature::integrate_panels(f, &pts, KK_TOL)?.value)
        } else {
            Ok(quadrature::integrate_to_infinity(f, &pts, self.scale(), KK_TOL)?.value)
        }
    }

    /// `eps_inf + (2/pi) PV int x Im eps(x) / (x^2 - w^2) dx` over `limits`.
    fn kk(&self, w: f64, limits: (f64, f64)) -> Result<f64> {
        let (lo, hi) = limits;
        let regular = |x: f64| x * self.im(x) / ((x - w) * (x + w));
        let (a, b) = ((0.5 * w).max(lo), (2.0 * w).min(hi));
        let mut total;
        if a < w && w < b {
            total = self.integrate(regular, lo, a)? + self.integrate(regular, b, hi)?;
            // x Im(x) / (x^2 - w^2) = h(x) / (x - w); subtract h(w) on [a, b].
            let h = |x: f64| x * self.im(x) / (x + w);
            let hw = h(w);
            let d = 1e-4 * w;
            let slope = (h(w + d) - h(w - d)) / (2.0 * d);
            let sub = |x: f64| {
                if (x - w).abs() < 1e-6 * w {
                    slope
                } else {
                    (h(x) - hw) / (x - w)
                }
            };
            total += self.integrate(sub, a, w)? + self.integrate(sub, w, b)?;
            total += hw * ((b - w) / (w - a)).ln();
        } else {
            total = self.integrate(regular, lo, hi)?;
        }
        Ok(self.eps_infinity() + 2.0 / PI * total)
    }
}

/// `Re eps(w)` rebuilt from `Im eps` by the Kramers-Kronig relation.
/// `limits` restricts the integration range; `None` integrates over the
/// whole half-line.
pub fn kk_reconstruct_re(
    model: &DielectricModel,
    omega: f64,
    temperature: f64,
    limits: Option<(f64, f64)>,
) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    let r = Response::new(model, temperature, None)?;
    let limits = limits.unwrap_or((0.0, f64::INFINITY));
    if !(limits.0 >= 0.0 && limits.1 > limits.0) {
        return Err(Error::Domain(format!("bad integration limits {limits:?}")));
    }
    r.kk(omega, limits)
}

fn sum_rule_with(r: &Response<'_>, cutoff: Option<f64>) -> Result<SumRule> {
    let hi = cutoff.unwrap_or(f64::INFINITY);
    if !(hi > 0.0) {
        return Err(Error::Domain(format!("cutoff must be positive, got {hi}")));
    }
    if cutoff.is_none() {
        match r.model {
            DielectricModel::Conductivity { sigma, .. } if sigma.at(r.temperature) > 0.0 => {
                return Err(Error::SumRuleInapplicable(
                    "Im eps ~ 1/w makes w Im eps constant; the integral needs a UV completion".into(),
                ))
            }
            DielectricModel::Tabulated(t) => {
                if let TailLaw::PowerLaw { exponent } = t.high_tail {
                    if exponent <= 2.0 {
                        return Err(Error::SumRuleInapplicable(format!(
                            "high-frequency tail w^-{exponent} is not integrable against w"
                        )));
                    }
                }
            }
            _ => {}
        }
    }
    let integral = if r.model.is_lossless(r.temperature) {
        0.0
    } else {
        r.integrate(|x| x * r.im(x), 0.0, hi)?
    };
    let reference = match r.model {
        DielectricModel::Drude { wp, lattice, .. } | DielectricModel::Hydrodynamic { wp, lattice, .. } => {
            let extra: f64 = lattice.oscillators().iter().map(|o| o.strength).sum();
            Some(0.5 * PI * (wp * wp + extra))
        }
        _ => r.model.plasma_frequency().map(|wp| 0.5 * PI * wp * wp),
    };
    Ok(SumRule {
        integral,
        reference,
        ratio: reference.map(|rf| integral / rf),
    })
}

/// `int_0^cutoff w Im eps(w) dw` and its `(pi/2) wp^2` reference.
pub fn f_sum_rule(model: &DielectricModel, temperature: f64, cutoff: Option<f64>) -> Result<SumRule> {
    sum_rule_with(&Response::new(model, temperature, None)?, cutoff)
}

/// Pole order of `eps(w)` at `w = 0`. The hydrodynamic model is classified at
/// a fixed nonzero wave vector.
pub fn pole_order_at_zero(model: &DielectricModel, temperature: f64) -> PoleOrder {
    match model {
        DielectricModel::Tabulated(t) => match t.low_tail {
            TailLaw::PowerLaw { exponent } if exponent == 1.0 => PoleOrder::First,
            _ => PoleOrder::Regular,
        },
        _ => model.pole_order(temperature).unwrap_or(PoleOrder::Regular),
    }
}

fn positivity_with(r: &Response<'_>, grid: &[f64]) -> Result<ImPositivity> {
    let mut worst = (f64::NAN, f64::INFINITY);
    for &w in grid {
        if !(w > 0.0) {
            return Err(Error::Domain(format!("grid point {w} is not positive")));
        }
        let v = r.im(w);
        if !(v >= worst.1) {
            worst = (w, v);
        }
    }
    Ok(ImPositivity {
        pass: worst.1 > 0.0,
        worst_omega: worst.0,
        worst_value: worst.1,
    })
}

/// Passes iff `Im eps(w) > 0` at every grid point; reports the smallest value.
pub fn check_im_positivity(model: &DielectricModel, grid: &[f64], temperature: f64) -> Result<ImPositivity> {
    positivity_with(&Response::new(model, temperature, None)?, grid)
}

/// `lim w^2 eps(w)` as `w -> 0`: `-wp^2` for a second-order pole, else 0.
pub fn limit_omega2_epsilon(model: &DielectricModel, temperature: f64) -> f64 {
    match model {
        DielectricModel::Plasma { wp } => -wp * wp,
        DielectricModel::Drude { wp, gamma, .. } if gamma.at(temperature) == 0.0 => -wp * wp,
        _ => 0.0,
    }
}

fn count_upper_zeros(model: &DielectricModel, temperature: f64, k: f64) -> Option<usize> {
    let (num, _) = model.rational(temperature, k)?;
    let roots = num.roots();
    Some(
        roots
            .iter()
            .filter(|z| z.im > 1e-9 * z.norm().max(1.0))
            .count(),
    )
}

/// Run every check and compose a verdict.
pub fn audit(model: &DielectricModel, options: &AuditOptions) -> Result<AdmissibilityReport> {
    let t = options.temperature;
    let r = Response::new(model, t, Some(options.wave_number))?;
    let lossless = model.is_lossless(t);
    let mut reasons = Vec::new();
    let mut notes = Vec::new();

    let im_positivity = positivity_with(&r, &options.grid)?;
    if lossless {
        reasons.push("Im eps is identically zero: no dissipation".to_string());
    } else if !im_positivity.pass {
        reasons.push(format!(
            "Im eps = {:e} is not positive at w = {}",
            im_positivity.worst_value, im_positivity.worst_omega
        ));
    }

    let pole_order = pole_order_at_zero(model, t);
    if pole_order == PoleOrder::Second {
        reasons.push("second-order pole of eps at w = 0".to_string());
    }

    let (mut sum_rule_ratio, mut sum_rule_integral) = (None, None);
    match sum_rule_with(&r, None) {
        Ok(s) => {
            sum_rule_integral = Some(s.integral);
            sum_rule_ratio = s.ratio;
            match s.ratio {
                Some(ratio) if (ratio - 1.0).abs() > SUM_RULE_TOL => {
                    reasons.push(format!("f-sum rule violated: ratio {ratio:.6}"))
                }
                Some(_) => {}
                None => notes.push("no plasma frequency: absolute sum-rule integral reported".to_string()),
            }
        }
        Err(e) => notes.push(format!("sum rule inapplicable: {e}")),
    }

    let mut kk_residual = None;
    if !matches!(model, DielectricModel::Tabulated(_)) {
        let (lo, hi) = options.kk_band;
        let mut worst: f64 = 0.0;
        let mut failed = None;
        for w in log_grid(lo, hi, options.kk_points) {
            let exact = r.re(w).unwrap_or(f64::NAN);
            match r.kk(w, (0.0, f64::INFINITY)) {
                Ok(v) => worst = worst.max((v - exact).abs() / exact.abs().max(1.0)),
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
        }
        match failed {
            None => {
                kk_residual = Some(worst);
                if !lossless && !(worst <= KK_RESIDUAL_TOL) {
                    reasons.push(format!("Kramers-Kronig reconstruction off by {worst:e} (relative)"));
                }
            }
            Some(e) => notes.push(format!("Kramers-Kronig check inapplicable: {e}")),
        }
    } else {
        notes.push("tabulated data: Kramers-Kronig residual and complex zeros not checked".to_string());
    }

    let upper_half_plane_zeros = count_upper_zeros(model, t, options.wave_number);
    if let Some(n) = upper_half_plane_zeros {
        if n > 0 {
            reasons.push(format!("eps has {n} zero(s) in the upper half plane"));
        }
    }

    let verdict = if reasons.is_empty() {
        Verdict::Admissible
    } else {
        Verdict::Inadmissible
    };
    Ok(AdmissibilityReport {
        model: model.name().to_string(),
        im_positivity,
        kk_residual,
        sum_rule_ratio,
        sum_rule_integral,
        pole_order,
        limit_omega2_eps: limit_omega2_epsilon(model, t),
        upper_half_plane_zeros,
        verdict,
        reasons,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{LatticeTerm, Oscillator, Table, TemperatureLaw};

    #[test]
    fn kk_rebuilds_drude() {
        let m = DielectricModel::drude(1.0, 0.1);
        let v = kk_reconstruct_re(&m, 1.0, 0.0, None).unwrap();
        assert!((v - (1.0 - 1.0 / 1.01)).abs() < 1e-8, "{v}");
    }

    #[test]
    fn kk_of_zero_absorption_is_one() {
        let m = DielectricModel::lorentz(vec![]);
        for w in [0.1, 1.0, 7.0] {
            assert_eq!(kk_reconstruct_re(&m, w, 0.0, None).unwrap(), 1.0);
        }
    }

    #[test]
    fn kk_far_above_a_resonance() {
        let m = DielectricModel::lorentz(vec![Oscillator::new(1.0, 1.0, 0.1)]);
        let w = 30.0;
        let v = kk_reconstruct_re(&m, w, 0.0, None).unwrap();
        let exact = models::eval_real_axis(&m, w, 0.0, 0.0).unwrap().re;
        assert!((v - exact).abs() < 1e-9);
        assert!(((1.0 - v) * w * w - 1.0).abs() < 2e-3);
    }

    #[test]
    fn kk_of_a_conductor_keeps_the_lattice() {
        let m = DielectricModel::conductivity(LatticeTerm::Constant(12.0), TemperatureLaw::constant(0.5));
        let v = kk_reconstruct_re(&m, 0.3, 0.0, None).unwrap();
        assert!((v - 12.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn sum_rule_is_gamma_independent() {
        for g in [0.1, 0.01, 1.0] {
            let s = f_sum_rule(&DielectricModel::drude(1.0, g), 0.0, None).unwrap();
            assert!((s.integral / (0.5 * PI) - 1.0).abs() < 1e-6, "gamma {g}: {}", s.integral);
        }
    }

    #[test]
    fn plasma_sum_rule_is_zero() {
        let s = f_sum_rule(&DielectricModel::plasma(1.0), 0.0, None).unwrap();
        assert_eq!(s.integral, 0.0);
        assert_eq!(s.ratio, Some(0.0));
    }

    #[test]
    fn conductivity_sum_rule_needs_a_cutoff() {
        let m = DielectricModel::conductivity(LatticeTerm::Constant(12.0), TemperatureLaw::constant(0.5));
        assert!(matches!(f_sum_rule(&m, 0.0, None), Err(Error::SumRuleInapplicable(_))));
        let s = f_sum_rule(&m, 0.0, Some(10.0)).unwrap();
        assert!((s.integral - 2.0 * PI * 10.0).abs() < 1e-8);
    }

    #[test]
    fn pole_orders() {
        assert_eq!(pole_order_at_zero(&DielectricModel::plasma(1.0), 0.0), PoleOrder::Second);
        assert_eq!(pole_order_at_zero(&DielectricModel::drude(1.0, 0.1), 0.0), PoleOrder::First);
        let h = DielectricModel::hydrodynamic(1.0, 0.1, 1.0, LatticeTerm::default());
        assert_eq!(pole_order_at_zero(&h, 0.0), PoleOrder::Regular);
        let lat = DielectricModel::lorentz(vec![Oscillator::new(1.0, 1.0, 0.1)]);
        assert_eq!(pole_order_at_zero(&lat, 0.0), PoleOrder::Regular);
    }

    #[test]
    fn positivity_checks() {
        let grid = log_grid(1e-3, 1e3, 121);
        assert!(check_im_positivity(&DielectricModel::drude(1.0, 0.1), &grid, 0.0).unwrap().pass);
        let p = check_im_positivity(&DielectricModel::plasma(1.0), &grid, 0.0).unwrap();
        assert!(!p.pass && p.worst_value == 0.0);
        let lat = DielectricModel::lorentz(vec![Oscillator::new(1.0, 1.0, 0.1)]);
        assert!(check_im_positivity(&lat, &grid, 0.0).unwrap().pass);
    }

    #[test]
    fn omega_squared_limit() {
        assert_eq!(limit_omega2_epsilon(&DielectricModel::plasma(1.0), 0.0), -1.0);
        assert_eq!(limit_omega2_epsilon(&DielectricModel::drude(1.0, 0.1), 0.0), 0.0);
        let lat = DielectricModel::lorentz(vec![Oscillator::new(1.0, 1.0, 0.1)]);
        assert_eq!(limit_omega2_epsilon(&lat, 0.0), 0.0);
    }

    #[test]
    fn plasma_is_inadmissible_for_three_reasons() {
        let rep = audit(&DielectricModel::plasma(1.0), &AuditOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Inadmissible);
        assert_eq!(rep.reasons.len(), 3, "{:?}", rep.reasons);
        assert_eq!(rep.pole_order, PoleOrder::Second);
        assert_eq!(rep.sum_rule_ratio, Some(0.0));
    }

    #[test]
    fn drude_is_admissible() {
        let rep = audit(&DielectricModel::drude(1.0, 0.1), &AuditOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Admissible, "{:?}", rep.reasons);
        assert!(rep.kk_residual.unwrap() < 1e-4);
        assert_eq!(rep.upper_half_plane_zeros, Some(0));
    }

    #[test]
    fn conductivity_is_admissible_with_a_note() {
        let m = DielectricModel::conductivity(LatticeTerm::Constant(12.0), TemperatureLaw::constant(0.5));
        let rep = audit(&m, &AuditOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Admissible, "{:?}", rep.reasons);
        assert!(rep.notes.iter().any(|n| n.contains("sum rule inapplicable")));
        assert_eq!(rep.pole_order, PoleOrder::First);
    }

    #[test]
    fn hydrodynamic_and_lattice_audits() {
        let h = DielectricModel::hydrodynamic(1.0, 0.1, 0.5, LatticeTerm::default());
        let rep = audit(&h, &AuditOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Admissible, "{:?}", rep.reasons);
        let lat = DielectricModel::lorentz(vec![Oscillator::new(1.0, 1.0, 0.1)]);
        let rep = audit(&lat, &AuditOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Admissible, "{:?}", rep.reasons);
        assert_eq!(rep.sum_rule_ratio, None);
        assert!((rep.sum_rule_integral.unwrap() - 0.5 * PI).abs() < 1e-6);
    }

    #[test]
    fn drude_table_is_admissible() {
        let d = DielectricModel::drude(1.0, 0.1);
        let t = Table::sample(
            |w| d.im_eps(w, 0.0).unwrap(),
            1e-4,
            1e4,
            200,
            TailLaw::conductivity(),
            TailLaw::drude(),
        )
        .unwrap()
        .with_plasma_frequency(1.0);
        let rep = audit(&DielectricModel::Tabulated(t), &AuditOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Admissible, "{:?}", rep.reasons);
        assert!((rep.sum_rule_ratio.unwrap() - 1.0).abs() < 1e-3);
    }
}
