use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use fuzzmeas::caratheodory::MeasurabilityCriterion;
use fuzzmeas_cli::commands::{AlgebraMode, FuzzCheck, FuzzOptions};
use fuzzmeas_cli::instance::to_canonical_json;
use fuzzmeas_cli::report::{Outcome, RunReport};
use fuzzmeas_cli::{
    cube_skeleton, parse_instance, run_extend, run_fuzz, run_hahn, run_validate, CliError,
    ResolvedInstance,
};

/// Exact-arithmetic workbench for fuzzy measures on finite grade lattices.
///
/// Exit codes: 0 all checks pass; 1 an axiom or theorem check failed;
/// 2 input error; 3 reported mathematical deviation (an expected finding
/// on some fuzzy instances, not a tool failure).
#[derive(Parser)]
#[command(name = "fuzzmeas", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Additive,
    Max,
}

impl From<CriterionArg> for MeasurabilityCriterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Additive => MeasurabilityCriterion::AdditiveSplit,
            CriterionArg::Max => MeasurabilityCriterion::MaxSplit,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Lemma1,
    Lemma2,
    Prop1,
    Thm2,
    Hahn,
}

impl From<CheckArg> for FuzzCheck {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::Lemma1 => FuzzCheck::Lemma1,
            CheckArg::Lemma2 => FuzzCheck::Lemma2,
            CheckArg::Prop1 => FuzzCheck::Prop1,
            CheckArg::Thm2 => FuzzCheck::Thm2,
            CheckArg::Hahn => FuzzCheck::Hahn,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    FullCube,
    Generated,
}

impl From<ModeArg> for AlgebraMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::FullCube => AlgebraMode::FullCube,
            ModeArg::Generated => AlgebraMode::Generated,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra axioms and every declared measure's axioms.
    Validate {
        instance: PathBuf,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build the outer extension of a named measure and check every
    /// clause of the extension pipeline under one measurability criterion.
    Extend {
        instance: PathBuf,
        #[arg(long)]
        measure: String,
        #[arg(long, value_enum, default_value = "additive")]
        criterion: CriterionArg,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decompose a named signed measure into a positive part and its
    /// complement, cross-checked against the brute-force oracle.
    Hahn {
        instance: PathBuf,
        #[arg(long)]
        signed: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Deterministic randomized campaigns; deviations are written as
    /// replayable instance files.
    Fuzz {
        #[arg(long, value_enum)]
        check: CheckArg,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_points: usize,
        #[arg(long, default_value_t = 3)]
        max_resolution: u32,
        #[arg(long, value_enum, default_value = "full-cube")]
        algebra_mode: ModeArg,
        #[arg(long, default_value = "findings")]
        findings_dir: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Emit a full-cube instance skeleton to fill in.
    Cube {
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<String>,
        #[arg(long)]
        resolution: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_instance(path: &Path) -> Result<ResolvedInstance, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_instance(&text)?)
}

fn emit_report(report: &RunReport, file: Option<&Path>) -> Result<(), CliError> {
    let json = report.to_canonical_json();
    print!("{json}");
    std::io::stdout().flush().ok();
    if let Some(path) = file {
        fs::write(path, &json).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { instance, report } => {
            let inst = load_instance(&instance)?;
            let r = run_validate(&inst);
            emit_report(&r, report.as_deref())?;
            Ok(r.exit_code)
        }
        Command::Extend { instance, measure, criterion, report } => {
            let inst = load_instance(&instance)?;
            let r = run_extend(&inst, &measure, criterion.into())?;
            emit_report(&r, report.as_deref())?;
            Ok(r.exit_code)
        }
        Command::Hahn { instance, signed, report } => {
            let inst = load_instance(&instance)?;
            let r = run_hahn(&inst, &signed)?;
            emit_report(&r, report.as_deref())?;
            Ok(r.exit_code)
        }
        Command::Fuzz {
            check,
            trials,
            seed,
            max_points,
            max_resolution,
            algebra_mode,
            findings_dir,
            report,
        } => {
            let opts = FuzzOptions {
                check: check.into(),
                trials,
                seed,
                max_points,
                max_resolution,
                algebra_mode: algebra_mode.into(),
                findings_dir: findings_dir.display().to_string(),
            };
            let (r, findings) = run_fuzz(&opts)?;
            if !findings.is_empty() {
                fs::create_dir_all(&findings_dir).map_err(|source| CliError::Io {
                    path: findings_dir.display().to_string(),
                    source,
                })?;
                for (name, inst) in &findings {
                    let path = PathBuf::from(name);
                    fs::write(&path, to_canonical_json(inst)).map_err(|source| {
                        CliError::Io { path: path.display().to_string(), source }
                    })?;
                }
            }
            emit_report(&r, report.as_deref())?;
            Ok(r.exit_code)
        }
        Command::Cube { points, resolution, out } => {
            // validate through the normal resolution path
            let skeleton = cube_skeleton(&points, resolution);
            let resolved = fuzzmeas_cli::resolve_instance(skeleton)?;
            let json = &resolved.canonical_bytes;
            match out {
                Some(path) => fs::write(&path, json).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => print!("{json}"),
            }
            Ok(Outcome::Pass.code())
        }
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let code = match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            Outcome::InputError.code()
        }
    };
    eprintln!("elapsed_ms={}", started.elapsed().as_millis());
    ExitCode::from(code as u8)
}
