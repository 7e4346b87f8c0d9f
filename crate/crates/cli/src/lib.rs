//! Command-line front end: argument model, output formats, the persistent
//! cache and the paper-verification harness.

pub mod cache;
pub mod format;

use std::path::PathBuf;
use std::sync::Arc;

use calogero::text::parse_rational;
use calogero::verify::{Verifier, CRITERIA};
use calogero::{AlgebraId, DominantWeight, Engine};
use clap::{Parser, Subcommand, ValueEnum};

use crate::cache::{CacheError, Store};
use crate::format::Formatter;

#[derive(Parser, Debug)]
#[command(name = "calogero", version, about = "Exact Calogero-Sutherland eigenfunctions for simply-laced root systems")]
pub struct Cli {
    /// Root system: A<n>, D<n> or E6/E7.
    #[arg(long, short, global = true, default_value = "E7")]
    pub algebra: String,

    #[arg(long, short, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Cache directory (default: $XDG_CACHE_HOME/calogero or ~/.cache/calogero).
    #[arg(long, global = true, env = "CALOGERO_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    /// Worker threads (default: all cores).
    #[arg(long, short = 'j', global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    /// More log output on stderr (repeatable).
    #[arg(long, short, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    /// Only errors on stderr.
    #[arg(long, short, global = true, conflicts_with = "verbose")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Mathematica,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OperatorPart {
    A,
    B,
    B0,
    B1,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Facts about the selected algebra.
    Algebra {
        #[command(subcommand)]
        what: AlgebraCommand,
    },
    /// Weyl orbit of a dominant weight.
    Orbit {
        weight: String,
        /// List the orbit elements too.
        #[arg(long)]
        elements: bool,
    },
    /// Dominant weight multiplicities of an irreducible representation.
    Mult { weight: String },
    /// The orbit sum M_w as a polynomial in the fundamental characters z_i.
    M2z { weight: String },
    /// The character χ_w as a polynomial in the fundamental characters z_i.
    Char2z { weight: String },
    /// Coefficients of the operator in z-coordinates.
    Operator {
        #[arg(long, value_enum, default_value_t = OperatorPart::B)]
        part: OperatorPart,
    },
    /// The Jacobi polynomial P_w, formal in κ or at a rational κ.
    Jacobi {
        weight: String,
        #[arg(long, short, allow_hyphen_values = true)]
        kappa: Option<String>,
    },
    /// Clebsch-Gordan series of P_a · P_b (or χ_a · χ_b with --classical).
    Cg {
        a: String,
        b: String,
        #[arg(long, short, allow_hyphen_values = true, conflicts_with = "classical")]
        kappa: Option<String>,
        #[arg(long)]
        classical: bool,
    },
    /// Re-derive the published E7 tables and run the structural checks.
    VerifyPaper {
        /// Run only these criteria (1-12).
        #[arg(long, short, value_parser = clap::value_parser!(u8).range(1..=12))]
        criterion: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCommand {
    /// Rank, positive roots and fundamental dimensions.
    Info,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] calogero::Error),
    #[error("cache: {0}")]
    Cache(#[from] CacheError),
    #[error("verification failed: {failed} of {total} criteria")]
    Verify { failed: usize, total: usize },
    #[error("{0}")]
    Setup(String),
}

impl CliError {
    /// Process exit code by error category.
    pub fn exit_code(&self) -> i32 {
        use calogero::Error as E;
        match self {
            CliError::Library(E::Parse { .. } | E::NotDominant(..) | E::DimensionMismatch { .. }) => 2,
            CliError::Library(E::Pole { .. } | E::DivisionByZero) => 3,
            CliError::Verify { .. } => 4,
            CliError::Library(E::UnsupportedAlgebra(_)) => 5,
            CliError::Cache(_) => 6,
            CliError::Library(E::Invariant(_)) | CliError::Setup(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os("XDG_CACHE_HOME")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .map(|d| d.join("calogero"))
}

/// Runs a command and returns what should be printed on stdout.
pub fn run(cli: &Cli) -> Result<String> {
    let algebra: AlgebraId = cli.algebra.parse()?;
    let engine = Arc::new(Engine::for_algebra(algebra)?);
    let mut store = match (cli.no_cache, cli.cache_dir.clone().or_else(default_cache_dir)) {
        (false, Some(dir)) => match Store::open(&dir, algebra) {
            Ok(mut s) => {
                let (loaded, skipped) = s.load_into(&engine)?;
                log::info!("cache {}: {loaded} records loaded, {skipped} ignored", dir.display());
                Some(s)
            }
            Err(e) => {
                log::warn!("cache disabled: {e}");
                None
            }
        },
        _ => None,
    };
    let out = execute(cli, &engine);
    if let Some(store) = store.as_mut() {
        match store.save_from(&engine) {
            Ok(n) => log::info!("cache: {n} records written"),
            Err(e) => log::warn!("cache not updated: {e}"),
        }
    }
    out
}

fn execute(cli: &Cli, engine: &Arc<Engine>) -> Result<String> {
    let rs = engine.root_system();
    let f = Formatter::new(cli.format, engine);
    let weight = |text: &str| -> Result<DominantWeight> { Ok(rs.parse_dominant(text)?) };
    let kappa = |text: &Option<String>| -> Result<Option<_>> { text.as_deref().map(parse_rational).transpose().map_err(Into::into) };
    Ok(match &cli.command {
        Command::Algebra { what: AlgebraCommand::Info } => f.algebra_info(),
        Command::Orbit { weight: w, elements } => {
            let w = weight(w)?;
            f.orbit(&w, elements.then(|| rs.orbit(&w)).as_deref())
        }
        Command::Mult { weight: w } => f.character(&*engine.character(&weight(w)?)?),
        Command::M2z { weight: w } => {
            let w = weight(w)?;
            f.z_polynomial("M", &w, &*engine.monomial_to_z(&w)?)
        }
        Command::Char2z { weight: w } => {
            let w = weight(w)?;
            f.z_polynomial("chi", &w, &*engine.char_to_z(&w)?)
        }
        Command::Operator { part } => f.operator(&*engine.operator()?, *part),
        Command::Jacobi { weight: w, kappa: k } => {
            let p = engine.jacobi(&weight(w)?)?;
            match kappa(k)? {
                None => f.z_polynomial("P", p.m(), p.zform()),
                Some(k) => f.z_polynomial("P", p.m(), &p.specialize(&k)?),
            }
        }
        Command::Cg { a, b, kappa: k, classical } => {
            let (a, b) = (weight(a)?, weight(b)?);
            if *classical {
                f.classical_series(&*engine.clebsch_gordan(&a, &b)?)
            } else {
                let series = engine.generalized_cg(&a, &b)?;
                match kappa(k)? {
                    None => f.generalized_series(&series),
                    Some(k) => f.specialized_series(&series, &series.specialize(&k)?),
                }
            }
        }
        Command::VerifyPaper { criterion } => {
            if rs.algebra() != AlgebraId::e7() {
                return Err(CliError::Setup("verify-paper checks the E7 tables; use --algebra E7".into()));
            }
            let verifier = Verifier::with_engine(engine.clone());
            let ids: Vec<u8> = if criterion.is_empty() {
                CRITERIA.iter().map(|c| c.id).collect()
            } else {
                criterion.clone()
            };
            let reports: Vec<_> = ids.iter().filter_map(|&id| verifier.run(id)).collect();
            let failed = reports.iter().filter(|r| !r.passed()).count();
            let text = f.reports(&reports);
            if failed > 0 {
                print!("{text}");
                return Err(CliError::Verify {
                    failed,
                    total: reports.len(),
                });
            }
            text
        }
    })
}
