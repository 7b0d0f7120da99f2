//! Command-line plumbing: configuration, deterministic targets, the
//! subcommands and the self-test driver.

mod commands;
pub mod selftest;
mod table;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};
use serde::Deserialize;

use crate::algebra::{check_modulus, Poly};
use crate::diophantine::{screen_target, Prepared, Target, DEFAULT_SCALE_CAP};
use crate::error::{Error, Result};
use crate::laurent::{default_tail, Laurent};
use crate::quadratic::QuadField;

pub use commands::{poisson_samples, run_command, Outcome, PoissonSample};
pub use table::{round12, Cell, Format, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Command {
    Selftest,
    Factor,
    Unit,
    VaughanCheck,
    PoissonCheck,
    Pnt,
    Dirichlet,
    Scan,
    Typesums,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Selftest => "selftest",
            Command::Factor => "factor",
            Command::Unit => "unit",
            Command::VaughanCheck => "vaughan-check",
            Command::PoissonCheck => "poisson-check",
            Command::Pnt => "pnt",
            Command::Dirichlet => "dirichlet",
            Command::Scan => "scan",
            Command::Typesums => "typesums",
        }
    }
}

/// Flags and config-file keys. Every field is optional; flags override the
/// file and unset values take command defaults.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Field size (odd prime)
    #[arg(long)]
    pub q: Option<u64>,
    /// d as ascending coefficients, e.g. 1,0,1 for T^2+1
    #[arg(long)]
    pub d: Option<String>,
    /// Working tail exponent of targets (negative)
    #[arg(long, allow_hyphen_values = true)]
    pub prec: Option<i64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nmin: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nmax: Option<i64>,
    /// Fixed delta exponent (default: theorem window or -floor(N/8))
    #[arg(long, allow_hyphen_values = true)]
    pub delta_exp: Option<i64>,
    #[arg(long)]
    pub alpha: Option<u64>,
    #[arg(long)]
    pub beta: Option<u64>,
    /// Dirichlet constant exponent (default deg d / 2 + abs_exp u)
    #[arg(long, allow_hyphen_values = true)]
    pub c_exp: Option<i64>,
    #[arg(long)]
    pub max_norm_exp: Option<i64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Number of targets (scan, dirichlet) or sampled triples (poisson-check)
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest q^N any enumeration may reach
    #[arg(long)]
    pub scale_cap: Option<u64>,
    /// Polynomial to factor (ascending coefficients; default d)
    #[arg(long)]
    pub poly: Option<String>,
    /// Explicit target "x1;x2", each in the top:c,c,..:tail form
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
}

impl Options {
    /// Fills every unset field from `other`.
    fn or(self, other: Options) -> Options {
        Options {
            q: self.q.or(other.q),
            d: self.d.or(other.d),
            prec: self.prec.or(other.prec),
            seed: self.seed.or(other.seed),
            nmin: self.nmin.or(other.nmin),
            nmax: self.nmax.or(other.nmax),
            delta_exp: self.delta_exp.or(other.delta_exp),
            alpha: self.alpha.or(other.alpha),
            beta: self.beta.or(other.beta),
            c_exp: self.c_exp.or(other.c_exp),
            max_norm_exp: self.max_norm_exp.or(other.max_norm_exp),
            epsilon: self.epsilon.or(other.epsilon),
            samples: self.samples.or(other.samples),
            format: self.format.or(other.format),
            out: self.out.or(other.out),
            scale_cap: self.scale_cap.or(other.scale_cap),
            poly: self.poly.or(other.poly),
            target: self.target.or(other.target),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ffquad", version, about = "Prime Diophantine approximation in real quadratic function fields")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// TOML file with the same keys as the flags (snake_case)
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub options: Options,
}

/// A validated configuration with every default materialized.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub field: QuadField,
    pub d_text: String,
    pub tail: i64,
    pub seed: u64,
    pub nmin: i64,
    pub nmax: i64,
    pub delta_exp: Option<i64>,
    pub alpha: u64,
    pub beta: u64,
    pub c_exp: i64,
    pub max_norm_exp: i64,
    pub epsilon: f64,
    pub samples: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub scale_cap: u64,
    pub poly: Option<Poly>,
    pub target: Option<Target>,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_coeffs(q: u64, s: &str) -> Result<Poly> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    let coeffs = s
        .split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|_| config_err(format!("bad coefficient {c:?} in {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_i64(q, &coeffs))
}

fn parse_target(q: u64, s: &str) -> Result<Target> {
    let (a, b) = s
        .split_once(';')
        .ok_or_else(|| config_err("target must be \"x1;x2\""))?;
    Ok(Target::explicit(Laurent::parse(q, a.trim())?, Laurent::parse(q, b.trim())?))
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig> {
        let file = match &cli.config {
            Some(p) => read_config_file(p)?,
            None => Options::default(),
        };
        RunConfig::resolve(cli.command, cli.options.or(file))
    }

    /// Validates `o` for `command` and fills defaults.
    pub fn resolve(command: Command, o: Options) -> Result<RunConfig> {
        use Command::*;
        let q = o.q.unwrap_or(3);
        check_modulus(q).map_err(|e| config_err(e.to_string()))?;
        let d_text = o.d.clone().unwrap_or_else(|| if q == 5 { "2,0,1".into() } else { "1,0,1".into() });
        let d = parse_coeffs(q, &d_text)?;
        let field = QuadField::new(d.clone()).map_err(|e| config_err(format!("d = {d_text}: {e}")))?;
        let (nmin_def, nmax_def) = match command {
            Scan => (4, 8),
            Pnt => (1, 8),
            PoissonCheck => (1, 5),
            VaughanCheck | Typesums => (4, 4),
            _ => (1, 4),
        };
        let nmax = o.nmax.unwrap_or(nmax_def);
        let nmin = o.nmin.unwrap_or(nmin_def.min(nmax));
        if nmin > nmax || nmin < 0 {
            return Err(config_err(format!("need 0 <= nmin <= nmax (got {nmin}, {nmax})")));
        }
        let scale_cap = o.scale_cap.unwrap_or(DEFAULT_SCALE_CAP);
        if matches!(command, Scan | Pnt | Typesums)
            && q.checked_pow(nmax as u32).is_none_or(|x| x > scale_cap)
        {
            return Err(Error::ScaleCap(format!("q^nmax = {q}^{nmax} exceeds the cap {scale_cap}")));
        }
        let alpha = o.alpha.unwrap_or(3);
        let beta = o.beta.unwrap_or(3);
        if matches!(command, VaughanCheck | Typesums) {
            let x = q.checked_pow(nmax as u32).unwrap_or(u64::MAX);
            if alpha == 0 || beta == 0 {
                return Err(config_err("alpha and beta must be positive"));
            }
            if alpha.saturating_mul(beta) >= x {
                return Err(config_err(format!(
                    "αβ < X required: alpha * beta = {} >= X = q^{nmax} = {x}",
                    alpha.saturating_mul(beta)
                )));
            }
        }
        let max_norm_exp = o.max_norm_exp.unwrap_or(if command == Dirichlet { 6 } else { 2 });
        let depth = nmax.max(max_norm_exp);
        let tail = o.prec.unwrap_or_else(|| default_tail(depth, d.deg()));
        if tail >= 0 {
            return Err(config_err(format!("prec must be negative (got {tail})")));
        }
        let epsilon = o.epsilon.unwrap_or(0.01);
        if !(epsilon > 0.0 && epsilon < 0.125) {
            return Err(config_err(format!("epsilon must lie in (0, 1/8) (got {epsilon})")));
        }
        let samples = o.samples.unwrap_or(match command {
            PoissonCheck => 100,
            _ => 1,
        });
        let c_exp = o.c_exp.unwrap_or(field.half_deg() + field.unit().abs_exp);
        let poly = o.poly.as_deref().map(|s| parse_coeffs(q, s)).transpose()?;
        let target = o.target.as_deref().map(|s| parse_target(q, s)).transpose()?;
        Ok(RunConfig {
            command,
            field,
            d_text,
            tail,
            seed: o.seed.unwrap_or(1),
            nmin,
            nmax,
            delta_exp: o.delta_exp,
            alpha,
            beta,
            c_exp,
            max_norm_exp,
            epsilon,
            samples,
            format: o.format.unwrap_or_default(),
            out: o.out,
            scale_cap,
            poly,
            target,
        })
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// One-line echo of the resolved configuration.
    pub fn echo(&self) -> String {
        format!(
            "{}: q={} d={} prec={} seed={} nmin={} nmax={} delta_exp={} alpha={} beta={} c_exp={} \
             max_norm_exp={} epsilon={} samples={} format={:?} scale_cap={}",
            self.command.name(),
            self.q(),
            self.d_text,
            self.tail,
            self.seed,
            self.nmin,
            self.nmax,
            self.delta_exp.map_or("rule".into(), |e| e.to_string()),
            self.alpha,
            self.beta,
            self.c_exp,
            self.max_norm_exp,
            self.epsilon,
            self.samples,
            self.format,
            self.scale_cap
        )
    }
}

pub fn read_config_file(path: &Path) -> Result<Options> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

/// Seed of the i-th target of a run.
pub fn target_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add(i as u64)
}

/// Target `i` of a run: the explicit target if given, else seeded by
/// seed + i; either way screened against exact sigma(K) hits.
pub fn make_target(cfg: &RunConfig, i: usize) -> Result<Target> {
    let t = match &cfg.target {
        Some(t) => t.clone(),
        None => Target::seeded(cfg.q(), target_seed(cfg.seed, i), cfg.tail),
    };
    let prep = Prepared::new(&cfg.field, &t)?.with_scale_cap(cfg.scale_cap);
    screen_target(&prep, 2)?;
    Ok(t)
}

/// Process exit code for an error: 1 identity failure or I/O, 2 bad
/// configuration or input, 3 scale cap.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::IdentityFailure(_) | Error::Io(_) => 1,
        Error::ScaleCap(_) => 3,
        _ => 2,
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    eprintln!("{}", cfg.echo());
    match run_command(&cfg) {
        Ok(out) => {
            if let Err(e) = out.table.emit(cfg.format, cfg.out.as_deref()) {
                eprintln!("error: {e}");
                return exit_code(&e);
            }
            eprintln!("{}", out.summary);
            if out.failures > 0 {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests;
