//! The `statdisc` command line: `classify`, `dominates`, `exante`, `gen`.
//!
//! Exit codes: 0 success, 2 input error, 3 domain error (unequal skill
//! distributions, zero-cost misuse), 4 I/O error, 1 internal error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crate::blackwell::{self, Classification, Dominance, Side};
use crate::error::Error;
use crate::exante::{classify_ex_ante, classify_ex_ante_zero_cost, n_equivalent, ExAnteScenario};
use crate::model::{skill_distribution, Population};
use crate::oracle::{random_mps_split, random_population, random_population_with_mean, InstanceSeed};
use crate::rational::{parse_rational, to_exact, Exact, Rational};
use crate::report::{CouplingReport, Report, WitnessReport};
use crate::scenario::{GroundTruth, ScenarioError, ScenarioFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    /// Single JSON document per invocation.
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "statdisc", version, about = "Classify statistical discrimination between populations of beliefs")]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct PairArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub first: String,
    #[arg(long)]
    pub second: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify pay discrimination between two populations.
    Classify(PairArgs),
    /// Decide whether FIRST is a mean-preserving spread of SECOND.
    Dominates(PairArgs),
    /// Classify ex-ante (interview exclusion) discrimination.
    Exante {
        #[command(flatten)]
        pair: PairArgs,
        /// Interview cost as `num/den`; overrides the scenario's cost.
        #[arg(long, allow_hyphen_values = true)]
        cost: Option<String>,
    },
    /// Write a random scenario with ground-truth annotations.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        skills: usize,
        #[arg(long, default_value_t = 4)]
        support: usize,
        #[arg(long, default_value_t = 8)]
        denominator: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Domain,
    Io,
    Internal,
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self { kind, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => 2,
            ErrorKind::Domain => 3,
            ErrorKind::Io => 4,
            ErrorKind::Internal => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::UnequalMeans { .. } | Error::ZeroCost => ErrorKind::Domain,
            Error::Internal(_) | Error::InvalidCertificate(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        CliError::new(ErrorKind::Input, e.to_string())
    }
}

/// What a command produced: text for stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
}

/// Parses arguments, runs the command, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(output) => {
            print!("{}", output.stdout);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let report = match &cli.command {
        Command::Classify(pair) => cmd_classify(pair)?,
        Command::Dominates(pair) => cmd_dominates(pair)?,
        Command::Exante { pair, cost } => cmd_exante(pair, cost.as_deref())?,
        Command::Gen { seed, skills, support, denominator, out } => {
            let seed = InstanceSeed::new(*seed, *skills, *support, *denominator)
                .map_err(|_| CliError::new(ErrorKind::Input, "--skills, --support and --denominator must be positive"))?;
            let text = generate_scenario(seed).to_text();
            return match out {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| CliError::new(ErrorKind::Io, format!("writing {}: {e}", path.display())))?;
                    Ok(Output { stdout: String::new() })
                }
                None => Ok(Output { stdout: text }),
            };
        }
    };
    let stdout = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    Ok(Output { stdout })
}

pub fn load_scenario(path: &Path) -> Result<ScenarioFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(ErrorKind::Io, format!("reading {}: {e}", path.display())))?;
    Ok(ScenarioFile::parse(&text)?)
}

struct Pair {
    scenario: ScenarioFile,
    first: Population,
    second: Population,
}

fn load_pair(args: &PairArgs) -> Result<Pair, CliError> {
    let scenario = load_scenario(&args.scenario)?;
    let first = scenario.population(&args.first)?;
    let second = scenario.population(&args.second)?;
    crate::model::require_equal_means(&first, &second)?;
    Ok(Pair { scenario, first, second })
}

fn base_report(command: &str, args: &PairArgs, pair: &Pair) -> Report {
    Report {
        command: command.to_string(),
        first: args.first.clone(),
        second: args.second.clone(),
        skill_labels: pair.scenario.skill_labels.clone(),
        skill_distribution: to_exact(skill_distribution(&pair.first).probs()),
        regime: None,
        cost: None,
        verdict: String::new(),
        against: None,
        note: None,
        coupling: None,
        witnesses: Vec::new(),
    }
}

fn coupling_report(source: &str, target: &str, coupling: &blackwell::Coupling) -> CouplingReport {
    CouplingReport {
        source: source.to_string(),
        target: target.to_string(),
        weights: coupling.weights().iter().map(|r| to_exact(r)).collect(),
    }
}

pub fn cmd_classify(args: &PairArgs) -> Result<Report, CliError> {
    let pair = load_pair(args)?;
    let analysis = blackwell::analyze_pair(&pair.first, &pair.second)?;
    let verdict = blackwell::classify_from(&pair.first, &pair.second, &analysis)?;
    let mut report = base_report("classify", args, &pair);
    let names = |side: Side| match side {
        Side::First => (args.first.as_str(), &pair.first),
        Side::Second => (args.second.as_str(), &pair.second),
    };
    report.verdict = match &verdict {
        Classification::SystematicAgainst { against, .. } => {
            report.against = Some(names(*against).0.to_string());
            let dominance = match against {
                Side::First => &analysis.second_over_first,
                Side::Second => &analysis.first_over_second,
            };
            if let Dominance::Dominates(c) = dominance {
                report.coupling = Some(coupling_report(names(*against).0, names(against.other()).0, c));
            }
            "systematic_against"
        }
        Classification::Unsystematic { .. } => "unsystematic",
        Classification::NoDiscrimination => "no_discrimination",
    }
    .to_string();
    report.witnesses = verdict
        .witnesses()
        .into_iter()
        .map(|(side, firm)| WitnessReport::surplus(firm, names(side), names(side.other())))
        .collect();
    Ok(report)
}

pub fn cmd_dominates(args: &PairArgs) -> Result<Report, CliError> {
    let pair = load_pair(args)?;
    let mut report = base_report("dominates", args, &pair);
    match blackwell::mps_dominates(&pair.first, &pair.second)? {
        Dominance::Dominates(c) => {
            report.verdict = "dominates".into();
            report.coupling = Some(coupling_report(&args.second, &args.first, &c));
        }
        Dominance::NotDominates(cert) => {
            report.verdict = "not_dominates".into();
            let firm = blackwell::extract_discriminating_firm(&cert, &pair.second, &pair.first)?;
            report.witnesses.push(WitnessReport::surplus(
                &firm,
                (&args.first, &pair.first),
                (&args.second, &pair.second),
            ));
        }
    }
    Ok(report)
}

pub fn cmd_exante(args: &PairArgs, cost_flag: Option<&str>) -> Result<Report, CliError> {
    let pair = load_pair(args)?;
    let cost = match cost_flag {
        Some(text) => parse_rational(text).map_err(|e| CliError::new(ErrorKind::Input, e.to_string()))?,
        None => pair
            .scenario
            .cost()
            .ok_or_else(|| CliError::new(ErrorKind::Input, "no interview cost: pass --cost or set \"cost\""))?,
    };
    let scenario = ExAnteScenario::new(cost.clone(), pair.first.clone(), pair.second.clone())?;
    let zero_cost = cost.is_zero();
    let verdict = if zero_cost {
        classify_ex_ante_zero_cost(&pair.first, &pair.second)?
    } else {
        classify_ex_ante(&scenario)?
    };
    let mut report = base_report("exante", args, &pair);
    report.regime = Some(if zero_cost { "N-order" } else { "M-order" }.to_string());
    report.cost = Some(Exact(cost.clone()));
    let names = |side: Side| match side {
        Side::First => (args.first.as_str(), &pair.first),
        Side::Second => (args.second.as_str(), &pair.second),
    };
    report.verdict = match &verdict {
        Classification::SystematicAgainst { against, .. } => {
            report.against = Some(names(*against).0.to_string());
            "systematic_ex_ante_against"
        }
        Classification::Unsystematic { .. } => "unsystematic_ex_ante",
        Classification::NoDiscrimination => {
            if zero_cost && n_equivalent(&pair.first, &pair.second)? {
                report.note = Some("N-equivalent".into());
            }
            "no_ex_ante_discrimination"
        }
    }
    .to_string();
    report.witnesses = verdict
        .witnesses()
        .into_iter()
        .map(|(side, firm)| WitnessReport::exclusion(firm, &cost, names(side), names(side.other())))
        .collect();
    Ok(report)
}

/// Random scenario: `base`, its spread `split` (annotated with the kernel)
/// and an independent population `other` with the same skill distribution.
pub fn generate_scenario(seed: InstanceSeed) -> ScenarioFile {
    let base = random_population(seed.derive(11));
    let split = random_mps_split(&base, seed.derive(12));
    let other = random_population_with_mean(&skill_distribution(&base), seed.derive(13));
    let mut scenario = ScenarioFile {
        skill_labels: (1..=seed.skill_count).map(|k| format!("t{k}")).collect(),
        populations: Default::default(),
        firms: Default::default(),
        cost: Some(Exact(Rational::new(1.into(), 4.into()))),
        ground_truth: vec![GroundTruth {
            hi: "split".into(),
            lo: "base".into(),
            strict: !split.degenerate,
            coupling: split.coupling.weights().iter().map(|r| to_exact(r)).collect(),
        }],
    };
    scenario.insert_population("base", &base);
    scenario.insert_population("split", &split.population);
    scenario.insert_population("other", &other);
    scenario
}
