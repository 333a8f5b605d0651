//! Run configuration. Every command-line flag overrides a key of this
//! structure, and `--dump-config` prints the resolved value as JSON.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use casimir_core::lifshitz::{Route, DEFAULT_RTOL};
use casimir_core::models::{LatticeTerm, Table, TailLaw, TemperatureLaw};
use casimir_core::DielectricModel;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A closed-form model, or a table of `Im eps` read from disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Table(TableSource),
    Closed(DielectricModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSource {
    pub table: PathBuf,
    pub tail_low: String,
    pub tail_high: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plasma_frequency: Option<f64>,
}

impl TableSource {
    pub fn load(&self) -> Result<Table, CliError> {
        let low: TailLaw = self.tail_low.parse()?;
        let high: TailLaw = self.tail_high.parse()?;
        let file = File::open(&self.table)
            .map_err(|e| CliError::Validation(format!("cannot open {}: {e}", self.table.display())))?;
        let table = Table::from_csv(BufReader::new(file), low, high)
            .map_err(|e| CliError::Validation(format!("{}: {e}", self.table.display())))?;
        Ok(match self.plasma_frequency {
            Some(wp) => table.with_plasma_frequency(wp),
            None => table,
        })
    }
}

impl ModelSpec {
    pub fn resolve(&self) -> Result<DielectricModel, CliError> {
        let model = match self {
            ModelSpec::Closed(m) => m.clone(),
            ModelSpec::Table(src) => DielectricModel::Tabulated(src.load()?),
        };
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    /// `ttilde`, `l`, `t_kelvin`, or a model parameter (`wp`, `gamma`,
    /// `sigma`, `debye_radius`, `eps_l`).
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    #[serde(default)]
    pub log: bool,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.from];
        }
        (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                if i == n - 1 {
                    self.to
                } else if self.log {
                    self.from * (self.to / self.from).powf(s)
                } else {
                    self.from + s * (self.to - self.from)
                }
            })
            .collect()
    }
}

/// Physical scales. When present, all of the reference frequency, the gap
/// and the temperature must be given.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_ref_rad_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_ref_ev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub rtol: f64,
    /// Explicit `Im w` for the real-frequency route on lossless models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: DEFAULT_RTOL, delta: None }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    #[serde(default = "default_route")]
    pub route: Route,
    /// Second route for `compare`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub against: Option<Route>,
    /// Reduced temperature; taken from `units` when those are given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ttilde: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: Output,
}

fn default_route() -> Route {
    Route::Matsubara
}

pub const MODEL_PARAMS: [&str; 5] = ["wp", "gamma", "sigma", "debye_radius", "eps_l"];

impl RunConfig {
    pub fn new(model: ModelSpec) -> Self {
        RunConfig {
            model,
            route: default_route(),
            against: None,
            ttilde: None,
            sweep: None,
            units: None,
            tolerances: Tolerances::default(),
            output: Output::default(),
        }
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let file = File::open(path).map_err(|e| CliError::Validation(format!("cannot open {}: {e}", path.display())))?;
        serde_json::from_reader(BufReader::new(file))
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let model = self.model.resolve()?;
        if !(self.tolerances.rtol > 0.0 && self.tolerances.rtol < 1.0) {
            return Err(CliError::Validation(format!("rtol must lie in (0, 1), got {}", self.tolerances.rtol)));
        }
        if let Some(u) = &self.units {
            crate::units::Scales::from_units(u)?;
            if self.ttilde.is_some() {
                return Err(CliError::Validation(
                    "give the temperature either as ttilde or in the units block, not both".into(),
                ));
            }
        }
        if let Some(t) = self.ttilde {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::Validation(format!("ttilde must be >= 0, got {t}")));
            }
        }
        if let Some(s) = &self.sweep {
            if s.points == 0 {
                return Err(CliError::Validation("sweep needs at least one point".into()));
            }
            if !(s.from.is_finite() && s.to.is_finite()) || (s.log && !(s.from > 0.0 && s.to > 0.0)) {
                return Err(CliError::Validation(format!(
                    "bad sweep range {}..{} (log sweeps need positive bounds)",
                    s.from, s.to
                )));
            }
            match s.param.as_str() {
                "ttilde" if self.units.is_some() => {
                    return Err(CliError::Validation("with a units block sweep t_kelvin instead of ttilde".into()))
                }
                "l" | "t_kelvin" if self.units.is_none() => {
                    return Err(CliError::Validation(format!("sweeping {} needs a units block", s.param)))
                }
                "ttilde" | "l" | "t_kelvin" => {}
                p => {
                    set_param(&model, p, s.from)?;
                }
            }
        }
        Ok(())
    }
}

/// Copy of `model` with the named parameter replaced.
pub fn set_param(model: &DielectricModel, name: &str, value: f64) -> Result<DielectricModel, CliError> {
    let mut m = model.clone();
    let missing = || CliError::Validation(format!("model '{}' has no parameter '{name}'", model.name()));
    match (&mut m, name) {
        (DielectricModel::Plasma { wp }, "wp")
        | (DielectricModel::Drude { wp, .. }, "wp")
        | (DielectricModel::Hydrodynamic { wp, .. }, "wp") => *wp = value,
        (DielectricModel::Drude { gamma, .. }, "gamma") => *gamma = TemperatureLaw::constant(value),
        (DielectricModel::Hydrodynamic { gamma, .. }, "gamma") => *gamma = value,
        (DielectricModel::Conductivity { sigma, .. }, "sigma") => *sigma = TemperatureLaw::constant(value),
        (DielectricModel::Hydrodynamic { debye_radius, .. }, "debye_radius") => *debye_radius = value,
        (DielectricModel::Drude { lattice, .. }, "eps_l")
        | (DielectricModel::Conductivity { lattice, .. }, "eps_l")
        | (DielectricModel::Hydrodynamic { lattice, .. }, "eps_l") => *lattice = LatticeTerm::Constant(value),
        _ => return Err(missing()),
    }
    Ok(m)
}
