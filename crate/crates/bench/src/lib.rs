//! Shared fixtures for the benchmarks in `benches/`.

use casimir_core::DielectricModel;

/// Models benchmarked on every route, keyed by a short label.
pub fn fixtures() -> Vec<(&'static str, DielectricModel)> {
    vec![
        ("plasma", DielectricModel::Plasma { wp: 1.0 }),
        ("drude", DielectricModel::drude(1.0, 0.05)),
    ]
}
