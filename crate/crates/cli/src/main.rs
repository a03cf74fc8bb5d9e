//! `ica`: agreement reports for coding rounds.
//!
//! Exit status: 0 on success, 2 on input errors, 3 when the report was
//! written but some coefficient is not available.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ica_core::report::{
    alpha_report, classic_report, project_report, variant_specs, variants_report, ClassicSelection,
};
use ica_core::variants::VariantContext;
use ica_core::{parse_project, parse_reliability_csv, render_report, Format, LabelMetric, Report};

const PRECISION_VAR: &str = "ICA_REPORT_PRECISION";
const DEFAULT_PRECISION: usize = 3;

#[derive(Parser)]
#[command(name = "ica", version, about = "Inter-coder agreement coefficients and reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Percent agreement, Holsti, Scott's pi, Cohen's and Fleiss' kappa on a reliability CSV.
    Classic {
        csv: PathBuf,
        #[arg(long)]
        percent: bool,
        #[arg(long)]
        holsti: bool,
        #[arg(long)]
        pi: bool,
        #[arg(long)]
        kappa: bool,
        #[arg(long)]
        fleiss: bool,
        /// All of the above (default when none is given).
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Universal alpha on a reliability CSV.
    Alpha {
        csv: PathBuf,
        #[arg(long, value_enum, default_value_t = MetricKind::Discrete)]
        metric: MetricKind,
        /// Label coordinates for interval and angular metrics, e.g. `--value low=1 --value p=0.5,2`.
        #[arg(long = "value", value_name = "LABEL=V[,V...]")]
        values: Vec<String>,
        /// Angular values are in degrees.
        #[arg(long)]
        degrees: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Alpha variants of a project file (all four when no variant flag is given).
    Variants {
        project: PathBuf,
        /// Restrict to these domains (repeatable).
        #[arg(long = "domain", value_name = "ID", conflicts_with = "all_domains")]
        domains: Vec<String>,
        /// Use every codebook domain (default).
        #[arg(long)]
        all_domains: bool,
        /// Global binary alpha.
        #[arg(long)]
        global: bool,
        /// Per-domain binary alpha.
        #[arg(long)]
        binary: bool,
        /// Per-domain cu-alpha.
        #[arg(long)]
        cu: bool,
        /// Cu-alpha over the selected domains.
        #[arg(long = "Cu")]
        cu_global: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Every variant on every domain, with coverage.
    Report {
        project: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check a project file and list violations.
    Validate { project: PathBuf },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Markdown)]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Markdown,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricKind {
    Discrete,
    Interval,
    Angular,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Self(e.to_string())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn precision() -> Result<usize, Failure> {
    match std::env::var(PRECISION_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure(format!("{PRECISION_VAR} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

fn parse_values(values: &[String]) -> Result<BTreeMap<String, Vec<f64>>, Failure> {
    let mut map = BTreeMap::new();
    for entry in values {
        let (label, coords) = entry
            .split_once('=')
            .ok_or_else(|| Failure(format!("--value `{entry}`: expected LABEL=V[,V...]")))?;
        let coords = coords
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure(format!("--value `{entry}`: {e}")))?;
        map.insert(label.to_string(), coords);
    }
    Ok(map)
}

fn metric(kind: MetricKind, values: &[String], degrees: bool, labels: &[String]) -> Result<LabelMetric, Failure> {
    let map = parse_values(values)?;
    match kind {
        MetricKind::Discrete => {
            if !values.is_empty() {
                return Err(Failure("--value only applies to interval and angular metrics".into()));
            }
            Ok(LabelMetric::Discrete)
        }
        MetricKind::Interval => Ok(LabelMetric::interval(labels, &map)?),
        MetricKind::Angular => {
            let mut angles = BTreeMap::new();
            for (label, v) in map {
                match v.as_slice() {
                    [a] => {
                        angles.insert(label, *a);
                    }
                    _ => return Err(Failure(format!("angle for `{label}` must be a single number"))),
                }
            }
            Ok(LabelMetric::angular(labels, &angles, degrees)?)
        }
    }
}

fn emit(report: &Report, output: &OutputArgs) -> Result<ExitCode, Failure> {
    let format = match output.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Markdown => Format::Markdown,
    };
    let text = render_report(report, format, precision()?);
    match &output.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(if report.has_not_available() {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Classic {
            csv,
            percent,
            holsti,
            pi,
            kappa,
            fleiss,
            all,
            output,
        } => {
            let ratings = parse_reliability_csv(&read(&csv)?)?;
            let mut selection = ClassicSelection {
                percent,
                holsti,
                pi,
                kappa,
                fleiss,
            };
            if all || selection.is_empty() {
                selection = ClassicSelection::all();
            }
            emit(&classic_report(&ratings, selection)?, &output)
        }
        Command::Alpha {
            csv,
            metric: kind,
            values,
            degrees,
            output,
        } => {
            let ratings = parse_reliability_csv(&read(&csv)?)?;
            let metric = metric(kind, &values, degrees, ratings.categories())?;
            emit(&alpha_report(&ratings, &metric)?, &output)
        }
        Command::Variants {
            project,
            domains,
            all_domains: _,
            global,
            binary,
            cu,
            cu_global,
            output,
        } => {
            let project = parse_project(&read(&project)?)?;
            let context = if domains.is_empty() {
                VariantContext::new(&project)
            } else {
                VariantContext::with_domains(&project, &domains)?
            };
            let none = !(global || binary || cu || cu_global);
            let specs = variant_specs(&context, global || none, binary || none, cu || none, cu_global || none);
            emit(&variants_report(&context, &specs)?, &output)
        }
        Command::Report { project, output } => {
            let project = parse_project(&read(&project)?)?;
            emit(&project_report(&VariantContext::new(&project))?, &output)
        }
        Command::Validate { project } => {
            parse_project(&read(&project)?)?;
            println!("valid");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
