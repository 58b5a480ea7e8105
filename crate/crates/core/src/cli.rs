//! Command-line configuration and the `run` entry point.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};

use crate::basis::{GradedBasis, DEFAULT_CAP};
use crate::closed_form::{Family, TheoremVariant};
use crate::dsl::parse_codifferential;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::report::{dump_matrices, CohomologyReport, IdentityReport};
use crate::verify::{self, Check, SuiteOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DSpec {
    Family(Family),
    Custom(String),
}

impl FromStr for DSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.strip_prefix("custom:") {
            Some(body) => Ok(DSpec::Custom(body.to_string())),
            None => {
                s.parse().map(DSpec::Family).map_err(|_| format!("expected thm1, thm2 or custom:<terms>, got `{s}`"))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Table,
    Verify,
    Representatives,
    Identities,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Cohomology of nilpotent codifferentials on free graded coalgebras.
#[derive(Debug, Clone, Parser)]
#[command(name = "nilcoh", version)]
pub struct RunConfig {
    /// Number of even generators.
    #[arg(long)]
    pub r: u16,
    /// Number of odd generators.
    #[arg(long)]
    pub s: u16,
    /// Codifferential: thm1, thm2, or custom:"a b -> t : c; ..."
    #[arg(long, default_value = "thm1")]
    pub d: DSpec,
    /// Highest degree computed.
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
    #[arg(long, value_enum, default_value_t = Mode::Table)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Largest cochain space (number of basis cochains) that may be built.
    #[arg(long, env = "NILCOH_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    /// Write the coboundary matrices D_0..D_nmax as triplet files here.
    #[arg(long)]
    pub dump_matrices: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub text: String,
    pub code: i32,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

fn engine_for(config: &RunConfig) -> Result<Engine> {
    let basis = GradedBasis::new(config.r, config.s)?.with_cap(config.cap);
    match &config.d {
        DSpec::Family(f) => Ok(Engine::for_variant(TheoremVariant::new(*f, basis)?)),
        DSpec::Custom(spec) => Engine::new(parse_codifferential(spec, &basis)?, basis),
    }
}

fn ladder_checks(engine: &Engine, n_max: usize) -> Result<(Vec<Check>, crate::engine::LadderReport)> {
    let l = engine.verify_inequality_ladder(n_max)?;
    let first_bad = l.rows.iter().find(|r| r.boundary_margin < 0);
    let second_bad = l.rows.iter().find(|r| r.h_margin < 0);
    let mk = |name: &str, bad: Option<String>| Check {
        name: name.into(),
        passed: bad.is_none(),
        cases: l.rows.len(),
        detail: bad.unwrap_or_default(),
    };
    let checks = vec![
        mk(
            "b^(n+1) + b^n >= (r+s)^(n+1) - (r+s-1)^(n+1)",
            first_bad.map(|r| format!("n={}: {} < {}", r.n, r.boundary_sum, r.boundary_bound)),
        ),
        mk("(r+s-1)^n <= h^n", second_bad.map(|r| format!("n={}: {} < {}", r.n, r.h, r.h_bound))),
        mk("h^n_a = (r+s-1)^n on free blocks", (!l.free_blocks_equal).then(|| "a free block differs".to_string())),
        mk(
            "b^(n+1)_a + b^n_a = (r+s)^n - (r+s-1)^n on free blocks",
            (!l.free_block_boundaries).then(|| "a free block differs".to_string()),
        ),
    ];
    Ok((checks, l))
}

fn try_run(config: &RunConfig) -> Result<RunOutput> {
    let engine = engine_for(config)?;
    if let Some(dir) = &config.dump_matrices {
        dump_matrices(&engine, config.nmax, dir)?;
    }
    let render = |rep: &CohomologyReport| match config.output {
        OutputFormat::Json => rep.to_json() + "\n",
        OutputFormat::Csv => rep.to_csv(),
        OutputFormat::Text => rep.to_text(),
    };
    match config.mode {
        Mode::Table => {
            let rep = CohomologyReport::build(&engine, config.nmax, false)?;
            Ok(RunOutput { text: render(&rep), code: EXIT_OK })
        }
        Mode::Representatives => {
            let rep = CohomologyReport::build(&engine, config.nmax, true)?;
            Ok(RunOutput { text: render(&rep), code: EXIT_OK })
        }
        Mode::Verify => {
            if engine.variant().is_none() {
                return Err(Error::InvalidVariant("verify mode needs --d thm1 or --d thm2".into()));
            }
            let rep = CohomologyReport::build(&engine, config.nmax, false)?;
            let code = if rep.all_match() { EXIT_OK } else { EXIT_MISMATCH };
            Ok(RunOutput { text: render(&rep), code })
        }
        Mode::Identities => {
            let options = SuiteOptions { rank_degree: config.nmax.min(4), ..Default::default() };
            let (checks, ladder) = match engine.variant() {
                Some(v) => {
                    let mut checks = verify::run_identity_suite(v, &options)?;
                    let (more, ladder) = ladder_checks(&engine, config.nmax)?;
                    checks.extend(more);
                    (checks, Some(ladder))
                }
                None => (verify::run_generic_suite(engine.codifferential(), engine.basis(), &options)?, None),
            };
            let rep = IdentityReport {
                r: config.r,
                s: config.s,
                d: engine.codifferential().to_string(),
                convention: engine.codifferential().convention().to_string(),
                checks,
                ladder,
            };
            let code = if rep.passed() { EXIT_OK } else { EXIT_MISMATCH };
            let text = match config.output {
                OutputFormat::Json => rep.to_json() + "\n",
                OutputFormat::Csv => rep.to_csv(),
                OutputFormat::Text => rep.to_text(),
            };
            Ok(RunOutput { text, code })
        }
    }
}

/// Runs one configuration; errors become a message and their exit code.
pub fn run(config: &RunConfig) -> RunOutput {
    match try_run(config) {
        Ok(out) => out,
        Err(e) => RunOutput { text: format!("error: {e}\n"), code: exit_code(&e) },
    }
}
