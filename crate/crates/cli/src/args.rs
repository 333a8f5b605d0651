//! Command-line surface. Flags are folded into a [`RunConfig`].

use std::path::PathBuf;

use casimir_core::lifshitz::Route;
use casimir_core::models::{LatticeTerm, Oscillator, TemperatureLaw};
use casimir_core::DielectricModel;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{set_param, Format, ModelSpec, RunConfig, Sweep, TableSource, Units};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "casimir-lab", version, about = "Non-retarded Casimir pressure between planar half-spaces")]
pub struct Cli {
    /// JSON run configuration; flags override its keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration and exit.
    #[arg(long, global = true)]
    pub dump_config: bool,
    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "CASIMIR_LAB_JOBS", default_value_t = 1)]
    pub jobs: usize,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub rtol: Option<f64>,
    /// Explicit Im w for the real-frequency route on lossless models.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pressure at one temperature.
    Pressure {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        temperature: TemperatureArgs,
        #[arg(long, value_parser = parse_route)]
        route: Option<Route>,
    },
    /// Pressure along a parameter sweep.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        temperature: TemperatureArgs,
        #[arg(long, value_parser = parse_route)]
        route: Option<Route>,
        /// ttilde, l, t_kelvin, wp, gamma, sigma, debye_radius or eps_l.
        #[arg(long)]
        param: Option<String>,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        log: bool,
    },
    /// Pressure by two routes and their relative gap.
    Compare {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        temperature: TemperatureArgs,
        #[arg(long, value_parser = parse_route)]
        route: Option<Route>,
        #[arg(long, value_parser = parse_route)]
        against: Option<Route>,
    },
    /// Admissibility report as JSON.
    Audit {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        temperature: TemperatureArgs,
        /// Wave number for the hydrodynamic model.
        #[arg(long, default_value_t = 1.0)]
        wave_number: f64,
    },
    /// Coupled surface-mode frequencies against q l.
    Modes {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0.01)]
        ql_from: f64,
        #[arg(long, default_value_t = 20.0)]
        ql_to: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long)]
        log: bool,
    },
    /// Entropy by finite differences, extrapolated to T = 0.
    Entropy {
        #[command(flatten)]
        model: ModelArgs,
        /// Reduced temperatures, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        ttilde: Vec<f64>,
        /// Difference step; a tenth of each temperature by default.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Validate a table of Im eps.
    IngestCheck {
        path: PathBuf,
        #[arg(long)]
        tail_low: String,
        #[arg(long)]
        tail_high: String,
        #[arg(long)]
        wp: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Plasma,
    Drude,
    Conductivity,
    Lorentz,
    Hydrodynamic,
}

#[derive(Debug, Default, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub wp: Option<f64>,
    /// Damping rate, constant in temperature.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Static conductivity, constant in temperature.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Activated conductivity `sigma0 exp(-gap / T)`: prefactor.
    #[arg(long, requires = "sigma_gap")]
    pub sigma0: Option<f64>,
    #[arg(long, requires = "sigma0")]
    pub sigma_gap: Option<f64>,
    /// Constant lattice permittivity.
    #[arg(long)]
    pub eps_l: Option<f64>,
    /// Lattice oscillator `strength,resonance,width`; repeatable.
    #[arg(long = "oscillator", value_parser = parse_oscillator)]
    pub oscillators: Vec<Oscillator>,
    #[arg(long)]
    pub debye_radius: Option<f64>,
    /// CSV of `omega,im_eps`.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub tail_low: Option<String>,
    #[arg(long)]
    pub tail_high: Option<String>,
}

#[derive(Debug, Default, Args)]
pub struct TemperatureArgs {
    /// Reduced temperature k_B T / (hbar W).
    #[arg(long)]
    pub ttilde: Option<f64>,
    /// Reference frequency in rad/s.
    #[arg(long)]
    pub omega_ref: Option<f64>,
    /// Reference frequency in eV.
    #[arg(long)]
    pub omega_ref_ev: Option<f64>,
    /// Gap in meters.
    #[arg(long)]
    pub gap_m: Option<f64>,
    #[arg(long)]
    pub temperature_k: Option<f64>,
}

fn parse_route(s: &str) -> Result<Route, String> {
    s.parse().map_err(|e: casimir_core::Error| e.to_string())
}

fn parse_oscillator(s: &str) -> Result<Oscillator, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [f, w, g] => Ok(Oscillator::new(*f, *w, *g)),
        _ => Err(format!("expected strength,resonance,width, got '{s}'")),
    }
}

impl ModelArgs {
    fn lattice(&self) -> LatticeTerm {
        if !self.oscillators.is_empty() {
            LatticeTerm::Oscillators(self.oscillators.clone())
        } else {
            LatticeTerm::Constant(self.eps_l.unwrap_or(1.0))
        }
    }

    fn sigma_law(&self) -> Option<TemperatureLaw> {
        match (self.sigma, self.sigma0, self.sigma_gap) {
            (Some(s), _, _) => Some(TemperatureLaw::constant(s)),
            (None, Some(sigma0), Some(gap)) => Some(TemperatureLaw::Activated { sigma0, gap }),
            _ => None,
        }
    }

    fn new_model(&self) -> Result<Option<ModelSpec>, CliError> {
        if let Some(path) = &self.table {
            let (Some(low), Some(high)) = (&self.tail_low, &self.tail_high) else {
                return Err(CliError::Validation("a table needs --tail-low and --tail-high".into()));
            };
            return Ok(Some(ModelSpec::Table(TableSource {
                table: path.clone(),
                tail_low: low.clone(),
                tail_high: high.clone(),
                plasma_frequency: self.wp,
            })));
        }
        let Some(kind) = self.model else {
            return Ok(None);
        };
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CliError::Validation(format!("model {kind:?} needs --{name}").to_lowercase()))
        };
        let m = match kind {
            ModelKind::Plasma => DielectricModel::plasma(need(self.wp, "wp")?),
            ModelKind::Drude => DielectricModel::Drude {
                wp: need(self.wp, "wp")?,
                gamma: TemperatureLaw::constant(need(self.gamma, "gamma")?),
                lattice: self.lattice(),
            },
            ModelKind::Conductivity => DielectricModel::conductivity(
                self.lattice(),
                self.sigma_law()
                    .ok_or_else(|| CliError::Validation("conductivity needs --sigma or --sigma0 with --sigma-gap".into()))?,
            ),
            ModelKind::Lorentz => DielectricModel::lorentz(self.oscillators.clone()),
            ModelKind::Hydrodynamic => DielectricModel::hydrodynamic(
                need(self.wp, "wp")?,
                need(self.gamma, "gamma")?,
                need(self.debye_radius, "debye-radius")?,
                self.lattice(),
            ),
        };
        Ok(Some(ModelSpec::Closed(m)))
    }

    /// Parameter flags applied on top of a model taken from a config file.
    fn overrides(&self, spec: ModelSpec) -> Result<ModelSpec, CliError> {
        let ModelSpec::Closed(mut m) = spec else {
            return Ok(spec);
        };
        for (name, v) in [
            ("wp", self.wp),
            ("gamma", self.gamma),
            ("sigma", self.sigma),
            ("debye_radius", self.debye_radius),
            ("eps_l", self.eps_l),
        ] {
            if let Some(v) = v {
                m = set_param(&m, name, v)?;
            }
        }
        Ok(ModelSpec::Closed(m))
    }
}

impl TemperatureArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if self.ttilde.is_some() {
            cfg.ttilde = self.ttilde;
        }
        let any = self.omega_ref.is_some() || self.omega_ref_ev.is_some() || self.gap_m.is_some() || self.temperature_k.is_some();
        if any {
            let u = cfg.units.get_or_insert_with(Units::default);
            if self.omega_ref.is_some() || self.omega_ref_ev.is_some() {
                u.omega_ref_rad_s = self.omega_ref;
                u.omega_ref_ev = self.omega_ref_ev;
            }
            if self.gap_m.is_some() {
                u.gap_m = self.gap_m;
            }
            if self.temperature_k.is_some() {
                u.temperature_k = self.temperature_k;
            }
        }
    }
}

impl Cli {
    /// Configuration for the model-based commands: the `--config` file (if
    /// any) with every given flag applied on top.
    pub fn resolve(&self, model: &ModelArgs) -> Result<RunConfig, CliError> {
        let base = self.config.as_deref().map(RunConfig::from_path).transpose()?;
        let mut cfg = match (base, model.new_model()?) {
            (Some(mut c), Some(spec)) => {
                c.model = spec;
                c
            }
            (Some(mut c), None) => {
                c.model = model.overrides(c.model)?;
                c
            }
            (None, Some(spec)) => RunConfig::new(spec),
            (None, None) => {
                return Err(CliError::Validation("no model given (use --model, --table or --config)".into()))
            }
        };
        if let Some(p) = &self.output {
            cfg.output.path = Some(p.clone());
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        if let Some(r) = self.rtol {
            cfg.tolerances.rtol = r;
        }
        if self.delta.is_some() {
            cfg.tolerances.delta = self.delta;
        }
        match &self.command {
            Command::Pressure { temperature, route, .. } => {
                temperature.apply(&mut cfg);
                if let Some(r) = route {
                    cfg.route = *r;
                }
            }
            Command::Sweep {
                temperature,
                route,
                param,
                from,
                to,
                points,
                log,
                ..
            } => {
                temperature.apply(&mut cfg);
                if let Some(r) = route {
                    cfg.route = *r;
                }
                let given = param.is_some() || from.is_some() || to.is_some() || points.is_some();
                if given || cfg.sweep.is_none() {
                    let old = cfg.sweep.take();
                    let pick = |new: Option<f64>, f: fn(&Sweep) -> f64| new.or(old.as_ref().map(f));
                    let sweep = Sweep {
                        param: param
                            .clone()
                            .or(old.as_ref().map(|s| s.param.clone()))
                            .ok_or_else(|| CliError::Validation("sweep needs --param".into()))?,
                        from: pick(*from, |s| s.from).ok_or_else(|| CliError::Validation("sweep needs --from".into()))?,
                        to: pick(*to, |s| s.to).ok_or_else(|| CliError::Validation("sweep needs --to".into()))?,
                        points: points
                            .or(old.as_ref().map(|s| s.points))
                            .ok_or_else(|| CliError::Validation("sweep needs --points".into()))?,
                        log: *log || old.as_ref().is_some_and(|s| s.log),
                    };
                    cfg.sweep = Some(sweep);
                }
            }
            Command::Compare {
                temperature,
                route,
                against,
                ..
            } => {
                temperature.apply(&mut cfg);
                if let Some(r) = route {
                    cfg.route = *r;
                }
                cfg.against = against.or(cfg.against).or(Some(Route::RealAxis));
            }
            Command::Audit { temperature, .. } => temperature.apply(&mut cfg),
            _ => {}
        }
        Ok(cfg)
    }
}
