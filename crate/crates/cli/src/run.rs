//! Command implementations. Each returns the text to emit; sweeps are
//! evaluated in parallel and reassembled in sweep order.

use std::fmt::Write as _;

use casimir_core::admissibility::{audit, AuditOptions};
use casimir_core::lifshitz::{
    classical_limit, entropy, extrapolate_to_zero, matsubara_pressure, real_axis_pressure, zero_t_pressure, Entropy,
    PressureResult, Route,
};
use casimir_core::modesum::{pressure_from_modes, ModeSpectrum};
use casimir_core::DielectricModel;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{set_param, Format, RunConfig, TableSource, Tolerances};
use crate::error::CliError;
use crate::units::Scales;

/// Text to write plus whether every point converged.
#[derive(Debug, Clone, PartialEq)]
pub struct Emitted {
    pub text: String,
    pub converged: bool,
}

impl Emitted {
    fn done(text: String) -> Self {
        Emitted { text, converged: true }
    }
}

pub fn evaluate(
    model: &DielectricModel,
    route: Route,
    ttilde: Option<f64>,
    tol: &Tolerances,
) -> Result<PressureResult, CliError> {
    let need_t = || {
        ttilde.ok_or_else(|| CliError::Validation(format!("route {route} needs a temperature (ttilde or units)")))
    };
    let r = match route {
        Route::Matsubara => matsubara_pressure(model, need_t()?, tol.rtol)?,
        Route::RealAxis => real_axis_pressure(model, need_t()?, tol.rtol, tol.delta)?,
        Route::ZeroT => zero_t_pressure(model, tol.rtol)?,
        Route::Modes => pressure_from_modes(model, tol.rtol)?,
        Route::Classical => {
            // The coefficient Phi / T times T.
            let t = need_t()?;
            let mut r = classical_limit(model, t)?;
            r.phi *= t;
            r.err_estimate *= t;
            r
        }
    };
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub sweep_param: String,
    pub value: f64,
    pub phi: f64,
    pub err_estimate: f64,
    pub route: Route,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pressure_pa: Option<f64>,
}

struct Point {
    model: DielectricModel,
    ttilde: Option<f64>,
    scales: Option<Scales>,
}

fn point(cfg: &RunConfig, base: &DielectricModel, param: &str, value: Option<f64>) -> Result<Point, CliError> {
    let mut scales = cfg.units.as_ref().map(Scales::from_units).transpose()?;
    let mut model = base.clone();
    let mut ttilde = cfg.ttilde;
    if let Some(v) = value {
        match param {
            "ttilde" => ttilde = Some(v),
            "t_kelvin" => scales.as_mut().expect("validated").temperature = v,
            "l" => scales.as_mut().expect("validated").gap = v,
            p => model = set_param(base, p, v)?,
        }
    }
    if let Some(s) = &scales {
        ttilde = Some(s.reduced_temperature());
    }
    Ok(Point { model, ttilde, scales })
}

fn row(cfg: &RunConfig, base: &DielectricModel, param: &str, value: Option<f64>) -> Result<Row, CliError> {
    let p = point(cfg, base, param, value)?;
    let shown = value.or(p.ttilde).unwrap_or(0.0);
    match evaluate(&p.model, cfg.route, p.ttilde, &cfg.tolerances) {
        Ok(r) => Ok(Row {
            sweep_param: param.to_string(),
            value: shown,
            phi: r.phi,
            err_estimate: r.err_estimate,
            route: cfg.route,
            converged: true,
            pressure_pa: p.scales.map(|s| s.pressure(r.phi)),
        }),
        Err(CliError::Numerical(_)) => Ok(Row {
            sweep_param: param.to_string(),
            value: shown,
            phi: f64::NAN,
            err_estimate: f64::NAN,
            route: cfg.route,
            converged: false,
            pressure_pa: p.scales.map(|_| f64::NAN),
        }),
        Err(e) => Err(e),
    }
}

/// One row per sweep point (or a single row without a sweep), computed on
/// `jobs` threads and returned in sweep order.
pub fn pressure_rows(cfg: &RunConfig, jobs: usize) -> Result<Vec<Row>, CliError> {
    cfg.validate()?;
    let model = cfg.model.resolve()?;
    let Some(sweep) = &cfg.sweep else {
        return Ok(vec![row(cfg, &model, "ttilde", None)?]);
    };
    let values = sweep.values();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))?;
    let rows: Vec<Result<Row, CliError>> = pool.install(|| {
        values
            .par_iter()
            .map(|&v| row(cfg, &model, &sweep.param, Some(v)))
            .collect()
    });
    rows.into_iter().collect()
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn rows_to_csv(rows: &[Row]) -> String {
    let with_pa = rows.iter().any(|r| r.pressure_pa.is_some());
    let mut out = String::from("sweep_param,value,phi,err_estimate,route,converged");
    if with_pa {
        out.push_str(",pressure_pa");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{}",
            r.sweep_param,
            num(r.value),
            num(r.phi),
            num(r.err_estimate),
            r.route,
            r.converged
        );
        if with_pa {
            let _ = write!(out, ",{}", num(r.pressure_pa.unwrap_or(f64::NAN)));
        }
        out.push('\n');
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn pressure(cfg: &RunConfig, jobs: usize) -> Result<Emitted, CliError> {
    let rows = pressure_rows(cfg, jobs)?;
    let converged = rows.iter().all(|r| r.converged);
    let text = match cfg.output.format {
        Format::Csv => rows_to_csv(&rows),
        Format::Json => to_json(&rows),
    };
    Ok(Emitted { text, converged })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub ttilde: Option<f64>,
    pub route_a: Route,
    pub phi_a: f64,
    pub route_b: Route,
    pub phi_b: f64,
    pub relative_gap: f64,
}

pub fn compare(cfg: &RunConfig) -> Result<Emitted, CliError> {
    cfg.validate()?;
    let other = cfg
        .against
        .ok_or_else(|| CliError::Validation("compare needs a second route (--against)".into()))?;
    let model = cfg.model.resolve()?;
    let p = point(cfg, &model, "ttilde", None)?;
    let a = evaluate(&p.model, cfg.route, p.ttilde, &cfg.tolerances)?.phi;
    let b = evaluate(&p.model, other, p.ttilde, &cfg.tolerances)?.phi;
    let c = Comparison {
        ttilde: p.ttilde,
        route_a: cfg.route,
        phi_a: a,
        route_b: other,
        phi_b: b,
        relative_gap: (a - b).abs() / a.abs().max(b.abs()),
    };
    let text = match cfg.output.format {
        Format::Json => to_json(&c),
        Format::Csv => format!(
            "ttilde,route_a,phi_a,route_b,phi_b,relative_gap\n{},{},{},{},{},{}\n",
            num(c.ttilde.unwrap_or(f64::NAN)),
            c.route_a,
            num(c.phi_a),
            c.route_b,
            num(c.phi_b),
            num(c.relative_gap)
        ),
    };
    Ok(Emitted::done(text))
}

pub fn audit_report(cfg: &RunConfig, wave_number: f64) -> Result<Emitted, CliError> {
    cfg.validate()?;
    let model = cfg.model.resolve()?;
    let p = point(cfg, &model, "ttilde", None)?;
    let options = AuditOptions {
        temperature: p.ttilde.unwrap_or(0.0),
        wave_number,
        ..AuditOptions::default()
    };
    Ok(Emitted::done(to_json(&audit(&model, &options)?)))
}

pub fn modes(cfg: &RunConfig, ql: &[f64]) -> Result<Emitted, CliError> {
    cfg.validate()?;
    let spectrum = ModeSpectrum::compute(&cfg.model.resolve()?, ql)?;
    Ok(Emitted::done(match cfg.output.format {
        Format::Csv => spectrum.to_csv(),
        Format::Json => to_json(&spectrum),
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub points: Vec<Entropy>,
    /// Polynomial extrapolation of the entropy to `T = 0`.
    pub extrapolated_to_zero: Option<f64>,
}

/// Entropy at each temperature with step `step` (default a tenth of the
/// temperature).
pub fn entropy_report(cfg: &RunConfig, temperatures: &[f64], step: Option<f64>) -> Result<Emitted, CliError> {
    cfg.validate()?;
    let model = cfg.model.resolve()?;
    let points = temperatures
        .iter()
        .map(|&t| entropy(&model, t, step.unwrap_or(0.1 * t)).map_err(CliError::from))
        .collect::<Result<Vec<_>, _>>()?;
    let extrapolated_to_zero = if points.len() >= 2 {
        let pts: Vec<(f64, f64)> = points.iter().map(|e| (e.temperature, e.sigma)).collect();
        Some(extrapolate_to_zero(&pts)?)
    } else {
        None
    };
    let report = EntropyReport { points, extrapolated_to_zero };
    Ok(Emitted::done(match cfg.output.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("ttilde,step,sigma,coarse,fine\n");
            for e in &report.points {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    num(e.temperature),
                    num(e.step),
                    num(e.sigma),
                    num(e.coarse),
                    num(e.fine)
                );
            }
            out
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestSummary {
    pub rows: usize,
    pub omega_min: f64,
    pub omega_max: f64,
    pub peak_frequency: f64,
    pub low_tail: String,
    pub high_tail: String,
}

pub fn ingest_check(src: &TableSource) -> Result<Emitted, CliError> {
    let t = src.load()?;
    let summary = IngestSummary {
        rows: t.len(),
        omega_min: t.omega()[0],
        omega_max: *t.omega().last().expect("validated"),
        peak_frequency: t.peak_frequency(),
        low_tail: t.low_tail.to_string(),
        high_tail: t.high_tail.to_string(),
    };
    Ok(Emitted::done(to_json(&summary)))
}
