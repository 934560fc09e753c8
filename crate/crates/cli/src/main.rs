use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qheat_cli::config::{FileConfig, Model, ParamOverrides, Params, Range, SweepConfig, SweepVar};
use qheat_cli::point::{evaluate, format_report};
use qheat_cli::presets::Preset;
use qheat_cli::sweep::{render_csv, run_sweep};
use qheat_cli::CliError;
use qheat_core::KernelMode;

#[derive(Parser)]
#[command(
    name = "qheat",
    version,
    about = "Steady states and heat currents of qubits between two thermal reservoirs"
)]
struct Cli {
    /// Write output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exit with status 2 if a steady state is not positive
    #[arg(long, global = true)]
    strict_positivity: bool,
    /// Omit the `#` comment line from CSV output
    #[arg(long, global = true)]
    no_header: bool,
    /// TOML file with model, mode, [params] and [sweep]; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report for one qubit between reservoirs A and B
    Single {
        #[command(flatten)]
        params: ParamOverrides,
    },
    /// Report for two flip-flop coupled qubits
    Coupled {
        /// Kernel form, lindblad or redfield [default: lindblad]
        #[arg(long)]
        mode: Option<KernelMode>,
        #[command(flatten)]
        params: ParamOverrides,
    },
    /// Sweep one parameter over an inclusive linear grid and write CSV
    Sweep {
        /// Model to evaluate [default: coupled]
        #[arg(long, value_enum)]
        model: Option<Model>,
        /// Kernel form, lindblad or redfield [default: lindblad]
        #[arg(long)]
        mode: Option<KernelMode>,
        /// Parameter to sweep
        #[arg(long, value_enum)]
        var: Option<SweepVar>,
        /// Grid as start:stop:count
        #[arg(long)]
        range: Option<Range>,
        #[command(flatten)]
        params: ParamOverrides,
    },
    /// Regenerate the data behind one figure
    Preset {
        #[arg(value_enum)]
        name: Preset,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qheat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let out = cli.out.clone().or_else(|| file.out.clone());
    let base = file.params.apply(Params::default());
    match cli.command {
        Command::Single { params } => {
            let p = params.apply(base);
            point(
                Model::Single,
                KernelMode::Lindblad,
                &p,
                out.as_deref(),
                cli.strict_positivity,
            )
        }
        Command::Coupled { mode, params } => {
            let mode = mode.or(file.mode()?).unwrap_or(KernelMode::Lindblad);
            let p = params.apply(base);
            point(Model::Coupled, mode, &p, out.as_deref(), cli.strict_positivity)
        }
        Command::Sweep {
            model,
            mode,
            var,
            range,
            params,
        } => {
            let cfg = SweepConfig {
                model: model.or(file.model).unwrap_or(Model::Coupled),
                mode: mode.or(file.mode()?).unwrap_or(KernelMode::Lindblad),
                params: params.apply(base),
                var: var
                    .or(file.sweep.var)
                    .ok_or_else(|| CliError::Usage("sweep needs --var".into()))?,
                range: match range {
                    Some(r) => r,
                    None => file
                        .range()?
                        .ok_or_else(|| CliError::Usage("sweep needs --range".into()))?,
                },
                out,
            };
            sweep(&cfg, !cli.no_header, cli.strict_positivity)
        }
        Command::Preset { name } => {
            let cfg = SweepConfig { out, ..name.config() };
            sweep(&cfg, !cli.no_header, cli.strict_positivity)
        }
    }
}

fn point(model: Model, mode: KernelMode, p: &Params, out: Option<&Path>, strict: bool) -> Result<(), CliError> {
    let r = evaluate(model, mode, p)?;
    emit(out, &format_report(&r))?;
    if strict && !r.is_positive() {
        return Err(CliError::Check(format!(
            "steady state is not positive (min eigenvalue {:.3e})",
            r.positivity.min_eigenvalue
        )));
    }
    Ok(())
}

fn sweep(cfg: &SweepConfig, header: bool, strict: bool) -> Result<(), CliError> {
    let rows = run_sweep(cfg)?;
    emit(cfg.out.as_deref(), &render_csv(cfg, &rows, header))?;
    let failed = rows.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        eprintln!("qheat: {failed} of {} points failed", rows.len());
    }
    if strict {
        let negative = rows
            .iter()
            .filter(|r| matches!(&r.outcome, Ok(p) if !p.is_positive()))
            .count();
        if negative > 0 || failed > 0 {
            return Err(CliError::Check(format!(
                "{negative} points with non-positive steady states, {failed} failed points"
            )));
        }
    }
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
