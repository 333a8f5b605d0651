use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use casimir_lab::args::{Cli, Command};
use casimir_lab::config::TableSource;
use casimir_lab::run::{self, Emitted};
use casimir_lab::{CliError, RunConfig};
use clap::Parser;

fn emit(text: &str, cfg: Option<&RunConfig>) -> Result<(), CliError> {
    match cfg.and_then(|c| c.output.path.as_ref()) {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dump<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    io::stdout().lock().write_all(s.as_bytes())?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    if let Command::IngestCheck { path, tail_low, tail_high, wp } = &cli.command {
        let src = TableSource {
            table: path.clone(),
            tail_low: tail_low.clone(),
            tail_high: tail_high.clone(),
            plasma_frequency: *wp,
        };
        if cli.dump_config {
            dump(&src)?;
            return Ok(true);
        }
        emit(&run::ingest_check(&src)?.text, None)?;
        return Ok(true);
    }
    let model = match &cli.command {
        Command::Pressure { model, .. }
        | Command::Sweep { model, .. }
        | Command::Compare { model, .. }
        | Command::Audit { model, .. }
        | Command::Modes { model, .. }
        | Command::Entropy { model, .. } => model,
        Command::IngestCheck { .. } => unreachable!(),
    };
    let cfg = cli.resolve(model)?;
    if cli.dump_config {
        dump(&cfg)?;
        return Ok(true);
    }
    let out: Emitted = match &cli.command {
        Command::Pressure { .. } => run::pressure(&cfg, cli.jobs)?,
        Command::Sweep { .. } => run::pressure(&cfg, cli.jobs)?,
        Command::Compare { .. } => run::compare(&cfg)?,
        Command::Audit { wave_number, .. } => run::audit_report(&cfg, *wave_number)?,
        Command::Modes {
            ql_from,
            ql_to,
            points,
            log,
            ..
        } => {
            let sweep = casimir_lab::config::Sweep {
                param: "ql".into(),
                from: *ql_from,
                to: *ql_to,
                points: *points,
                log: *log,
            };
            if *points == 0 || !(*ql_from > 0.0 && ql_to > ql_from) {
                return Err(CliError::Validation("need 0 < ql-from < ql-to and at least one point".into()));
            }
            run::modes(&cfg, &sweep.values())?
        }
        Command::Entropy { ttilde, step, .. } => run::entropy_report(&cfg, ttilde, *step)?,
        Command::IngestCheck { .. } => unreachable!(),
    };
    emit(&out.text, Some(&cfg))?;
    Ok(out.converged)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: some points did not converge (converged=false rows)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
