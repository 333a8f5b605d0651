use approx::assert_relative_eq;
use casimir_core::admissibility::{self, AuditOptions};
use casimir_core::lifshitz::{matsubara_pressure, real_axis_pressure};
use casimir_core::models::{self, eval_imag_axis, eval_nonlocal, eval_real_axis};
use casimir_core::modesum::{argument_principle_sum, surface_mode_frequencies, Rectangle};
use casimir_core::nonlocal::{locality_check, CorrelationScales, Locality};
use casimir_core::{DielectricModel, LatticeTerm, Oscillator, PoleOrder, TemperatureLaw, Verdict};
use proptest::prelude::*;

fn admissible_model() -> impl Strategy<Value = DielectricModel> {
    let drude = (0.2..5.0f64, 0.01..2.0f64).prop_map(|(wp, g)| DielectricModel::drude(wp, g));
    let lorentz = proptest::collection::vec((0.1..10.0f64, 0.1..5.0f64, 0.01..1.0f64), 1..4)
        .prop_map(|v| DielectricModel::lorentz(v.into_iter().map(|(f, w, g)| Oscillator::new(f, w, g)).collect()));
    let conductor = (0.5..20.0f64, 0.2..3.0f64, 0.01..0.5f64, 0.01..2.0f64).prop_map(|(f, w, g, s)| {
        DielectricModel::conductivity(
            LatticeTerm::Oscillators(vec![Oscillator::new(f, w, g)]),
            TemperatureLaw::constant(s),
        )
    });
    prop_oneof![drude, lorentz, conductor]
}

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    admissibility::log_grid(a, b, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn imaginary_axis_permittivity_is_real_above_one_and_decreasing(m in admissible_model()) {
        let values: Vec<f64> = log_grid(1e-3, 1e3, 120)
            .into_iter()
            .map(|z| eval_imag_axis(&m, z, 0.0).unwrap())
            .collect();
        prop_assert!(values.iter().all(|&e| e.is_finite() && e >= 1.0));
        prop_assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
    }

    #[test]
    fn absorption_is_positive(m in admissible_model()) {
        for w in log_grid(1e-3, 1e3, 101) {
            let im = eval_real_axis(&m, w, 0.0, 0.0).unwrap().im;
            prop_assert!(im > 0.0, "Im eps({w}) = {im}");
        }
    }

    #[test]
    fn permittivity_approaches_one_as_a_power_law(m in admissible_model()) {
        // A static conductivity keeps a 4 pi sigma / zeta tail.
        let ratio = match m {
            DielectricModel::Conductivity { .. } => 10.0,
            _ => 100.0,
        };
        let a = m.chi_imag(1e6, 0.0).unwrap();
        let b = m.chi_imag(1e7, 0.0).unwrap();
        prop_assert!((a / b / ratio - 1.0).abs() < 1e-3, "{a} {b}");
    }

    #[test]
    fn branch_identity_for_the_plasma_model(wp in 0.1..10.0f64, ql in 0.01..20.0f64) {
        let (lo, hi) = surface_mode_frequencies(&DielectricModel::plasma(wp), ql).unwrap();
        prop_assert!((lo * lo + hi * hi - wp * wp).abs() < 1e-12 * wp * wp);
    }

    #[test]
    fn weaker_plasma_frequency_weakens_the_pressure(wp in 0.3..3.0f64, g in 0.05..0.5f64, t in 0.05..1.0f64) {
        let strong = matsubara_pressure(&DielectricModel::drude(wp, g), t, 1e-9).unwrap().phi;
        let weak = matsubara_pressure(&DielectricModel::drude(0.8 * wp, g), t, 1e-9).unwrap().phi;
        prop_assert!(weak <= strong);
    }

    #[test]
    fn locality_never_flips_back_with_more_damping(v in 0.01..2.0f64, w in 0.01..2.0f64, k in 0.1..10.0f64) {
        let mut seen_local = false;
        for g in [0.0, 0.01, 0.1, 1.0, 10.0, 100.0] {
            let local = locality_check(&CorrelationScales::new(v, g, w).unwrap(), k).unwrap().locality == Locality::Local;
            prop_assert!(!(seen_local && !local));
            seen_local = local;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn real_axis_and_matsubara_routes_agree(g in 0.05..0.5f64, t in 0.05..1.0f64) {
        let m = DielectricModel::drude(1.0, g);
        let ms = matsubara_pressure(&m, t, 1e-10).unwrap().phi;
        let ra = real_axis_pressure(&m, t, 1e-9, None).unwrap().phi;
        prop_assert!((ms - ra).abs() <= 1e-2 * ms, "{ms} vs {ra}");
    }
}

#[test]
fn contour_sums_match_root_sums_for_random_rectangles() {
    let m = DielectricModel::plasma(1.0);
    let mut rng = proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha);
    let mut checked = 0;
    while checked < 20 {
        let ql: f64 = rng.random_range(0.05..5.0);
        let (lo, hi) = surface_mode_frequencies(&m, ql).unwrap();
        let rect = Rectangle::new(
            (rng.random_range(0.05..0.9) * lo, hi + rng.random_range(0.05..2.0)),
            (-rng.random_range(0.05..1.0), rng.random_range(0.05..1.0)),
        );
        let s = argument_principle_sum(&m, ql, rect).unwrap();
        assert!((s.value - (lo + hi)).norm() <= 1e-6 * (lo + hi), "{rect:?}: {} vs {}", s.value, lo + hi);
        checked += 1;
    }
}

#[test]
fn table_continuation_matches_the_closed_form() {
    let (wp, g) = (1.0, 0.1);
    let m = DielectricModel::drude(wp, g);
    let table = models::Table::sample(
        |w| eval_real_axis(&m, w, 0.0, 0.0).unwrap().im,
        1e-4,
        1e4,
        2000,
        models::TailLaw::conductivity(),
        models::TailLaw::drude(),
    )
    .unwrap();
    for z in [0.1, 1.0, 10.0] {
        let exact = eval_imag_axis(&m, z, 0.0).unwrap();
        assert_relative_eq!(models::epsilon_ik_from_table(&table, z).unwrap(), exact, max_relative = 1e-5);
    }
}

#[test]
fn zero_wave_vector_reduces_to_drude() {
    let h = DielectricModel::hydrodynamic(1.0, 0.1, 0.3, LatticeTerm::default());
    let d = DielectricModel::drude(1.0, 0.1);
    for w in log_grid(1e-3, 1e2, 40) {
        let a = eval_nonlocal(&h, w, 0.0).unwrap();
        let b = eval_real_axis(&d, w, 0.0, 0.0).unwrap();
        assert!((a - b).norm() <= 1e-14 * b.norm(), "{w}: {a} vs {b}");
    }
}

#[test]
fn wave_vector_correction_is_quadratic() {
    let h = DielectricModel::hydrodynamic(1.0, 0.1, 0.3, LatticeTerm::default());
    let d = DielectricModel::drude(1.0, 0.1);
    for w in [0.3, 1.0, 3.0] {
        let local = eval_real_axis(&d, w, 0.0, 0.0).unwrap();
        let err = |k: f64| (eval_nonlocal(&h, w, k).unwrap() - local).norm();
        let slope = (err(1e-2) / err(5e-3)).ln() / 2f64.ln();
        assert!((slope - 2.0).abs() < 0.01, "{w}: slope {slope}");
    }
}

#[test]
fn screening_removes_the_low_frequency_pole() {
    let (wp, g, rd) = (1.0, 0.1, 0.5);
    let h = DielectricModel::hydrodynamic(wp, g, rd, LatticeTerm::Constant(12.0));
    for k in [0.1, 1.0, 10.0] {
        let bound = 12.0 + 1.0 / (k * k * rd * rd) + 1e-9;
        for w in log_grid(1e-8, 1e-2, 61) {
            let e = models::eval_nonlocal_lowfreq(&h, w, k).unwrap();
            assert!(e.norm() <= bound, "k {k}, w {w}: {e}");
            assert!(eval_nonlocal(&h, w, k).unwrap().is_finite());
        }
    }
}

#[test]
fn kramers_kronig_reproduces_closed_forms() {
    let models = [
        DielectricModel::drude(1.0, 0.1),
        DielectricModel::drude(2.0, 0.5),
        DielectricModel::lorentz(vec![Oscillator::new(2.0, 1.0, 0.1), Oscillator::new(0.5, 4.0, 0.3)]),
        DielectricModel::conductivity(
            LatticeTerm::Oscillators(vec![Oscillator::new(11.0, 1.0, 0.05)]),
            TemperatureLaw::constant(0.2),
        ),
    ];
    for m in &models {
        for w in log_grid(0.1, 10.0, 41) {
            let kk = admissibility::kk_reconstruct_re(m, w, 0.0, None).unwrap();
            let re = eval_real_axis(m, w, 0.0, 0.0).unwrap().re;
            assert!((kk - re).abs() <= 1e-4 * re.abs(), "{} at {w}: {kk} vs {re}", m.name());
        }
    }
}

#[test]
fn sum_rule_does_not_depend_on_damping() {
    let reference = admissibility::f_sum_rule(&DielectricModel::drude(1.0, 0.01), 0.0, None).unwrap().integral;
    for g in [0.03, 0.1, 0.3, 1.0] {
        let v = admissibility::f_sum_rule(&DielectricModel::drude(1.0, g), 0.0, None).unwrap().integral;
        assert_relative_eq!(v, reference, max_relative = 1e-5);
    }
}

#[test]
fn second_order_poles_are_inadmissible() {
    let candidates = [
        DielectricModel::plasma(1.0),
        DielectricModel::plasma(3.0),
        DielectricModel::Drude { wp: 1.0, gamma: TemperatureLaw::constant(0.0), lattice: LatticeTerm::Constant(3.0) },
    ];
    for m in &candidates {
        let rep = admissibility::audit(m, &AuditOptions::default()).unwrap();
        assert_eq!(rep.pole_order, PoleOrder::Second);
        assert_eq!(rep.verdict, Verdict::Inadmissible);
    }
}

#[test]
fn audit_is_deterministic() {
    let m = DielectricModel::lorentz(vec![Oscillator::new(2.0, 1.0, 0.1)]);
    let a = admissibility::audit(&m, &AuditOptions::default()).unwrap();
    let b = admissibility::audit(&m, &AuditOptions::default()).unwrap();
    assert_eq!(a, b);
}
