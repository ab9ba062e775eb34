//! `magpt`: sweeps, oracle validation, figure data and sensing reports for
//! the PT-symmetric magnon–cavity–magnon model.
//!
//! Exit status: 0 on success, 1 when `validate` finds a failing check,
//! 2 for structural errors (bad config, empty grid, I/O).

mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use magpt::export::{Format, Table};
use magpt::figures::FigureSpecs;
use magpt::{FrequencyConvention, MagnetometerConfig, Units};

use config::{
    check_units, load, units_label, EntanglementConfig, Loaded, SweepConfig, TrajectoryConfig, UnitsArg, ValidateConfig,
};

#[derive(Parser)]
#[command(
    name = "magpt",
    version,
    about = "PT-symmetric magnon-cavity-magnon metrology toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// Quoted Hz are multiplied by 2π.
    Angular,
    /// Quoted Hz are used as rates directly.
    Cyclic,
}

#[derive(Args)]
struct Common {
    /// TOML config; built-in defaults when omitted.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Units the config is written in; must match its tag.
    #[arg(long, value_enum)]
    units: Option<UnitsArg>,
    /// Output file (a directory for `figures`); stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Print the resolved config as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Cavity photon number, its variance and the magnon moments over time.
    PhotonNumber(Common),
    /// Photon-counting precision δ²ω1 over a frequency grid.
    SweepPrecision {
        #[command(flatten)]
        common: Common,
        /// Emit the per-(input, t) minimisers instead of every grid point.
        #[arg(long)]
        optima: bool,
    },
    /// Gaussian quantum Fisher information against δ²ω1 (vacuum input).
    Qfi(Common),
    /// ν⁻, logarithmic negativity and the Hillery–Zubairy witness over time.
    Entanglement(Common),
    /// Magnetic-field precision with every intermediate quantity.
    Sensitivity {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        /// Integration time in seconds.
        #[arg(long)]
        time: Option<f64>,
    },
    /// Analytic vs ODE vs three-mode oracle checks; exit 1 if any fails.
    Validate(Common),
    /// Write fig1..fig4 data and a gnuplot script into `--out`.
    Figures {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        no_script: bool,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn emit_table<T>(c: &Common, command: &str, units: Units, loaded: &Loaded<T>, table: &Table) -> Result<()> {
    let meta = commands::metadata(command, units_label(units), loaded);
    emit(c.out.as_deref(), &table.render(c.format.into(), &meta)?)
}

/// Loads the config, or prints it and returns `None` under `--dump-config`.
fn resolve<T>(
    c: &Common,
    adjust: impl FnOnce(&mut T),
    validate: impl FnOnce(&T) -> Result<()>,
) -> Result<Option<Loaded<T>>>
where
    T: serde::de::DeserializeOwned + serde::Serialize + Default,
{
    let loaded = load(c.config.as_deref(), adjust, validate)?;
    if c.dump_config {
        emit(c.out.as_deref(), &loaded.canonical)?;
        return Ok(None);
    }
    Ok(Some(loaded))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::PhotonNumber(c) => {
            if let Some(l) = resolve::<TrajectoryConfig>(&c, |_| {}, |x| x.validate())? {
                check_units(c.units, l.config.model.units)?;
                let t = commands::photon_number_table(&l.config)?;
                emit_table(&c, "photon-number", l.config.model.units, &l, &t)?;
            }
        }
        Command::Qfi(c) => {
            if let Some(l) = resolve::<TrajectoryConfig>(&c, |_| {}, |x| x.validate())? {
                check_units(c.units, l.config.model.units)?;
                let t = commands::qfi_table(&l.config)?;
                emit_table(&c, "qfi", l.config.model.units, &l, &t)?;
            }
        }
        Command::SweepPrecision { common: c, optima } => {
            if let Some(l) = resolve::<SweepConfig>(&c, |_| {}, |x| x.validate())? {
                check_units(c.units, l.config.units)?;
                let (rows, best) = commands::sweep_tables(&l.config)?;
                let t = if optima { best } else { rows };
                emit_table(&c, "sweep-precision", l.config.units, &l, &t)?;
            }
        }
        Command::Entanglement(c) => {
            if let Some(l) = resolve::<EntanglementConfig>(&c, |_| {}, |x| x.validate())? {
                check_units(c.units, l.config.units)?;
                let t = commands::entanglement(&l.config)?;
                emit_table(&c, "entanglement", l.config.units, &l, &t)?;
            }
        }
        Command::Sensitivity {
            common: c,
            convention,
            time,
        } => {
            check_units(c.units, Units::RadPerS)?;
            let adjust = |m: &mut MagnetometerConfig| {
                if let Some(conv) = convention {
                    m.convention = match conv {
                        ConventionArg::Angular => FrequencyConvention::Angular,
                        ConventionArg::Cyclic => FrequencyConvention::Cyclic,
                    };
                }
                if let Some(t) = time {
                    m.integration_time = t;
                }
            };
            let validate = |m: &MagnetometerConfig| m.to_spec().map(|_| ()).map_err(Into::into);
            if let Some(l) = resolve::<MagnetometerConfig>(&c, adjust, validate)? {
                let t = commands::sensitivity_table(&l.config)?;
                emit_table(&c, "sensitivity", Units::RadPerS, &l, &t)?;
            }
        }
        Command::Validate(c) => {
            check_units(c.units, Units::UnitsOfGamma)?;
            if let Some(l) = resolve::<ValidateConfig>(&c, |_| {}, |x| x.validate())? {
                let (t, passed) = commands::validation(&l.config)?;
                emit_table(&c, "validate", Units::UnitsOfGamma, &l, &t)?;
                if !passed {
                    eprintln!("validate: at least one check failed");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Figures { common: c, no_script } => {
            check_units(c.units, Units::UnitsOfGamma)?;
            if let Some(l) = resolve::<FigureSpecs>(&c, |_| {}, |x| Ok(x.validate()?))? {
                let Some(dir) = c.out.as_deref() else {
                    bail!("figures: --out DIR is required");
                };
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                for (name, text) in commands::figure_files(&l, c.format.into(), !no_script)? {
                    let path = dir.join(name);
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
