use std::path::PathBuf;

use bjgeo_core::attain::oracle_profile;
use bjgeo_core::ortho::is_bj_orthogonal;
use bjgeo_core::sip::certify_attainment_via_sip;
use bjgeo_core::verify::{euclidean_dichotomy, run_suite, SuiteConfig};
use bjgeo_core::{attain, AttainOptions, Error, Mode, TheoremId, TheoremReport};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::io::{load_operator, load_space, OperatorSpec, SpaceSpec};
use crate::output::*;
use crate::{CliError, InputError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A point given on the command line as `1,-0.5`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorArg(pub Vec<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Max,
    Min,
    Both,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        Ok(t) => Err(format!("tolerance must be positive, got {t}")),
        Err(e) => Err(e.to_string()),
    }
}

/// Norm attainment sets, Birkhoff-James orthogonality and s.i.p. certificates.
#[derive(Debug, Clone, Parser)]
#[command(name = "bjgeo", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Tolerance for unit-norm, orthogonality and certificate checks.
    #[arg(long, global = true, env = "BJGEO_TOL", default_value = "1e-9", value_parser = positive)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Random operators per suite, or search attempts.
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Sampled directions per check, or profile grid size.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Starts of the multi-start solver.
    #[arg(long, global = true, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Defaults to csv for `profile` and json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Compute ‖T‖, m(T) and the sets M_T, m_T.
    Attain {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
    },
    /// Test x ⊥_B y; exits 1 when not orthogonal.
    BjCheck {
        #[arg(long)]
        space: PathBuf,
        /// Unit vector, e.g. `1,1`.
        #[arg(allow_hyphen_values = true, value_parser = parse_vector)]
        x: VectorArg,
        #[arg(allow_hyphen_values = true, value_parser = parse_vector)]
        y: VectorArg,
    },
    /// Certify x ∈ M_T (max) or x ∈ m_T (min) by the semi-inner-product identity.
    SipCertify {
        #[arg(long)]
        operator: PathBuf,
        #[arg(allow_hyphen_values = true, value_parser = parse_vector)]
        x: VectorArg,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Run theorem checks; exits 1 when an applicable check fails.
    Verify {
        /// A theorem id or `all`.
        #[arg(long, default_value = "all")]
        theorem: String,
        /// Draw random operators on this space instead of the built-in corpus.
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Brute-force ‖Tx‖ over the unit sphere, for plotting.
    Profile {
        #[arg(long)]
        operator: PathBuf,
    },
    /// Look for operators on a space violating the Euclidean dichotomy.
    Search {
        #[arg(long)]
        space: PathBuf,
    },
}

/// Exit status and rendered output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: u8,
    pub output: Output,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.output.json(),
            Format::Csv => self.output.csv(),
            Format::Text => self.output.text(),
        }
    }
}

impl Cli {
    pub fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Profile { .. } => Format::Csv,
            _ => Format::Json,
        })
    }

    fn options(&self) -> AttainOptions {
        AttainOptions { tol: self.tol, restarts: self.restarts as usize, seed: self.seed }
    }
}

fn parse_vector(s: &str) -> Result<VectorArg, String> {
    crate::io::parse_vector(s).map(VectorArg)
}

fn status(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let tol = cli.tol;
    let (status, output) = match &cli.command {
        Command::Attain { operator, mode } => {
            let op = load_operator(operator)?;
            let opts = cli.options();
            let compute = |m: Mode| -> Result<AttainResult, CliError> {
                let set = attain(&op, m, &opts)?;
                let members = set.expanded_representatives(op.domain());
                Ok(AttainResult { set, members })
            };
            let max = matches!(mode, ModeArg::Max | ModeArg::Both).then(|| compute(Mode::Max)).transpose()?;
            let min = matches!(mode, ModeArg::Min | ModeArg::Both).then(|| compute(Mode::Min)).transpose()?;
            let out = AttainOutput {
                operator: OperatorSpec::from(&op),
                tol,
                seed: cli.seed,
                restarts: opts.restarts,
                max,
                min,
            };
            (0, Output::Attain(out))
        }
        Command::BjCheck { space, x: VectorArg(x), y: VectorArg(y) } => {
            let space = load_space(space)?;
            space.check_dim(x)?;
            space.check_dim(y)?;
            let certificate = is_bj_orthogonal(&space, x, y, tol)?;
            let reverse = match space.normalize(y) {
                Ok(u) => Some(is_bj_orthogonal(&space, &u, x, tol)?),
                Err(_) => None,
            };
            let ok = certificate.orthogonal;
            let out = BjCheckOutput { space: (&space).into(), x: x.clone(), y: y.clone(), tol, certificate, reverse };
            (status(ok), Output::BjCheck(out))
        }
        Command::SipCertify { operator, x: VectorArg(x), mode } => {
            let op = load_operator(operator)?;
            op.domain().check_dim(x)?;
            let mode = match mode {
                ModeArg::Max => Mode::Max,
                ModeArg::Min => Mode::Min,
                ModeArg::Both => {
                    return Err(InputError::Usage("sip-certify needs --mode max or --mode min".into()).into())
                }
            };
            let samples = cli.samples as usize;
            let (certificate, rejection) = match certify_attainment_via_sip(&op, x, mode, samples, cli.seed, tol) {
                Ok(c) => (Some(c), None),
                Err(e @ (Error::NotInMaxSet { .. } | Error::NotInMinSet { .. })) => (None, Some(e.to_string())),
                Err(e) => return Err(e.into()),
            };
            let ok = certificate.as_ref().is_some_and(|c| c.pass);
            let out = SipOutput {
                operator: OperatorSpec::from(&op),
                x: x.clone(),
                mode,
                tol,
                seed: cli.seed,
                samples,
                certificate,
                rejection,
            };
            (status(ok), Output::Sip(out))
        }
        Command::Verify { theorem, space } => {
            let space = space.as_deref().map(load_space).transpose()?;
            let cfg = SuiteConfig {
                tol,
                seed: cli.seed,
                trials: cli.trials as usize,
                samples: cli.samples as usize,
                restarts: cli.restarts as usize,
                space: space.clone(),
            };
            let ids = if theorem == "all" { TheoremId::sorted() } else { vec![TheoremId::parse(theorem)?] };
            let single = ids.len() == 1;
            let reports =
                ids.par_iter()
                    .map(|&id| match run_suite(id, &cfg).map_err(CliError::from) {
                        // Without a --space every suite is expected to run; with
                        // one, `all` skips the suites that do not apply to it.
                        Err(CliError::Input(InputError::Core(
                            e @ (Error::Unsupported(_) | Error::InvalidArgument(_)),
                        ))) if !single => Ok(TheoremReport::not_applicable(id, &e.to_string())),
                        other => other,
                    })
                    .collect::<Result<Vec<_>, _>>()?;
            let ok = !reports.iter().any(TheoremReport::failed);
            let out = VerifyOutput {
                tol,
                seed: cli.seed,
                trials: cfg.trials,
                samples: cfg.samples,
                restarts: cfg.restarts,
                space: space.as_ref().map(SpaceSpec::from),
                reports,
            };
            (status(ok), Output::Verify(out))
        }
        Command::Profile { operator } => {
            let op = load_operator(operator)?;
            let samples = oracle_profile(&op, cli.samples as usize)?;
            (0, Output::Profile(ProfileOutput { operator: OperatorSpec::from(&op), samples }))
        }
        Command::Search { space } => {
            let space = load_space(space)?;
            let report = euclidean_dichotomy(&space, cli.trials as usize, cli.seed, tol)?;
            let ok = !report.failed();
            let out = SearchOutput { space: (&space).into(), tol, seed: cli.seed, trials: cli.trials as usize, report };
            (status(ok), Output::Search(out))
        }
    };
    Ok(Outcome { status, output })
}
