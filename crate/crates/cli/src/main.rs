//! `krqt`: characters, verification sweeps and the `A_1` tables from the command line.
//!
//! Exit codes: `0` when everything requested passed, `1` when a check failed, `2` on
//! usage errors (bad flags, invalid labels, out-of-budget ranges).

mod cache;
mod sweep;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use krqt::cluster::a1_tables;
use krqt::tableaux::{character_or_one, KrLabel};
use krqt::ylattice::QtCharacter;
use serde_json::json;

use crate::cache::Cache;
use crate::sweep::{Ranges, VerifyReport};

const MAX_RANK: u32 = 8;
const MAX_KMAX: u32 = 8;
const MAX_JWINDOW: i32 = 16;
const MAX_TABLE: u32 = 64;

#[derive(Parser)]
#[command(
    name = "krqt",
    version,
    about = "Exact (q,t)-characters of type A KR-modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Json,
    Pretty,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Commute,
    Tsystem,
    Mutation,
    Compat,
    Thm31,
    Counterexample,
}

#[derive(Subcommand)]
enum Command {
    /// Print the (q,t)-character of W_{k,j}^{(i)}.
    Char {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        i: i32,
        #[arg(long)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        j: i32,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
        /// Skip the on-disk cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Run a verification sweep and print one report per instance.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(long, default_value_t = 1)]
        rank: u32,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        /// Spectral parameters `|j| <= jwindow` for the tsystem and mutation sweeps.
        #[arg(long, default_value_t = 4)]
        jwindow: i32,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
        /// Largest number of L-strips per pair for the thm31 subset search.
        #[arg(long, default_value_t = krqt::exchange::DEFAULT_STRIP_BUDGET)]
        strip_budget: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Include wall-clock times; without this flag JSON output is reproducible byte for byte.
        #[arg(long)]
        timings: bool,
    },
    /// Print the A_1 windows of B and ε with the closed-form comparison.
    Tables {
        #[arg(long)]
        rank: u32,
        #[arg(long, default_value_t = 9)]
        n: u32,
        #[arg(long, value_enum, default_value = "pretty")]
        format: TableFormat,
    },
}

/// An error that maps to exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() || e.downcast_ref::<krqt::Error>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Char {
            rank,
            i,
            k,
            j,
            format,
            no_cache,
        } => cmd_char(rank, i, k, j, format, no_cache),
        Command::Verify {
            check,
            rank,
            kmax,
            jwindow,
            jobs,
            strip_budget,
            format,
            timings,
        } => {
            let ranges = Ranges {
                rank,
                kmax,
                jwindow,
                strip_budget,
            };
            cmd_verify(check, ranges, jobs, format, timings)
        }
        Command::Tables { rank, n, format } => cmd_tables(rank, n, format),
    }
}

fn cmd_char(r: u32, i: i32, k: u32, j: i32, format: Format, no_cache: bool) -> Result<bool> {
    if r == 0 || r > MAX_RANK {
        return usage(format!("--rank must lie in 1..={MAX_RANK}"));
    }
    let chi = if k == 0 {
        QtCharacter::one()
    } else {
        let label = KrLabel::new(r, i, j, k)?;
        let compute = || character_or_one(r, i, k, j);
        match Cache::from_env().filter(|_| !no_cache) {
            Some(cache) => cache.get_or_compute(&label, compute)?.0,
            None => compute()?,
        }
    };
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json => {
            let doc = json!({
                "label": { "r": r, "i": i, "k": k, "j": j },
                "num_terms": chi.num_terms(),
                "character": chi,
            });
            writeln!(out, "{}", serde_json::to_string(&doc)?)?;
        }
        Format::Pretty => {
            if k == 0 {
                writeln!(out, "1")?;
            } else {
                writeln!(
                    out,
                    "χ_{{{k},{j}}}^({i})  rank {r}, {} terms",
                    chi.num_terms()
                )?;
                writeln!(out, "dominant {}", chi.dominant)?;
                for (m, c) in chi.terms() {
                    writeln!(out, "  {c} · {m}")?;
                }
            }
        }
    }
    Ok(true)
}

fn cmd_verify(
    check: Check,
    ranges: Ranges,
    jobs: Option<usize>,
    format: Format,
    timings: bool,
) -> Result<bool> {
    if ranges.rank == 0 || ranges.rank > MAX_RANK {
        return usage(format!("--rank must lie in 1..={MAX_RANK}"));
    }
    if ranges.kmax == 0 || ranges.kmax > MAX_KMAX {
        return usage(format!("--kmax must lie in 1..={MAX_KMAX}"));
    }
    if !(0..=MAX_JWINDOW).contains(&ranges.jwindow) {
        return usage(format!("--jwindow must lie in 0..={MAX_JWINDOW}"));
    }
    if check == Check::Compat && ranges.kmax < 2 {
        return usage("compat needs --kmax >= 2 so that some column has all its neighbours");
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return usage("--jobs must be positive");
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;
    let reports = pool.install(|| match check {
        Check::Commute => sweep::commute(ranges),
        Check::Tsystem => sweep::tsystem(ranges),
        Check::Mutation => sweep::mutation(ranges),
        Check::Compat => sweep::compat(ranges),
        Check::Thm31 => sweep::thm31(ranges),
        Check::Counterexample => sweep::counterexample(),
    })?;
    emit_reports(reports, format, timings)
}

fn emit_reports(mut reports: Vec<VerifyReport>, format: Format, timings: bool) -> Result<bool> {
    let mut out = std::io::stdout().lock();
    let all = reports.iter().all(|r| r.report.passed);
    for r in &mut reports {
        if !timings {
            r.wall_ms = None;
        }
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(r)?)?,
            Format::Pretty => {
                write!(out, "{}", r.report)?;
                if let Some(ms) = r.wall_ms {
                    write!(out, " ({ms:.1} ms)")?;
                }
                writeln!(out)?;
                for note in &r.report.notes {
                    writeln!(out, "    {note}")?;
                }
            }
        }
    }
    if format == Format::Pretty {
        let failed = reports.iter().filter(|r| !r.report.passed).count();
        writeln!(out, "{} instances, {failed} failed", reports.len())?;
    }
    Ok(all)
}

fn cmd_tables(rank: u32, n: u32, format: TableFormat) -> Result<bool> {
    if rank != 1 {
        return usage("tables are only defined for --rank 1");
    }
    if !(2..=MAX_TABLE).contains(&n) {
        return usage(format!("--n must lie in 2..={MAX_TABLE}"));
    }
    let t = a1_tables(n)?;
    let mut out = std::io::stdout().lock();
    match format {
        TableFormat::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&json!({
                "n": n,
                "b": t.b,
                "epsilon": t.epsilon,
                "b_minus_closed_form": t.b_diff,
                "epsilon_minus_closed_form": t.epsilon_diff,
                "matches_closed_forms": t.matches_closed_forms(),
            }))?
        )?,
        TableFormat::Csv => {
            writeln!(out, "# B")?;
            write!(out, "{}", t.b.to_csv())?;
            writeln!(out, "# epsilon")?;
            write!(out, "{}", t.epsilon.to_csv())?;
        }
        TableFormat::Pretty => {
            writeln!(out, "B ({n}x{n}):")?;
            write!(out, "{}", t.b)?;
            writeln!(out, "ε ({n}x{n}), Λ = 2ε:")?;
            write!(out, "{}", t.epsilon)?;
            let verdict = if t.matches_closed_forms() {
                "match"
            } else {
                "DIFFER"
            };
            writeln!(out, "closed forms: {verdict}")?;
        }
    }
    if !t.matches_closed_forms() {
        bail!("windows differ from the closed-form coefficients");
    }
    Ok(true)
}
