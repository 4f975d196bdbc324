//! `genus-cantor`: build, certify and export genus-g wild Cantor sets.
//!
//! Exit status is 0 when every requested certificate passes, 1 when any
//! fails or is inconclusive, and 2 on a usage or input error.

mod certify;
mod export;
mod output;

use anyhow::{bail, Result};
use certify::{Lemma, Settings};
use clap::{Args, Parser, Subcommand};
use export::{ExportOptions, What};
use genus_cantor::ladder::Construction;
use genus_cantor::sequences::{density_bound, FoldingSequence};
use serde::Serialize;
use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "genus-cantor", version, about = "Genus-g wild Cantor sets: construction, certificates and exports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Genus of the ladder.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    genus: u64,
    /// Scaffold density; defaults to the admissible N_g. Smaller values run in figure mode.
    #[arg(long = "N")]
    n: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the folding sequence a, widths c, prefix sums C and N_g as JSON.
    Seq {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
        genus: u64,
    },
    /// Run certificates and write one JSON file per lemma.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated lemmas; empty runs them all.
        #[arg(long, value_enum, value_delimiter = ',')]
        lemmas: Vec<Lemma>,
        /// Level depth for the genus-structure check.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(0..=3))]
        depth: u64,
        /// Covering radius of the nesting boundary samples.
        #[arg(long, default_value_t = 1e-4, value_parser = positive)]
        sample_step: f64,
        /// Sample this many copy pairs for linking instead of all near pairs.
        #[arg(long)]
        pair_budget: Option<usize>,
    },
    /// Write curves, tube meshes or a level of the defining sequence.
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u64).range(0..=3))]
        depth: u64,
        /// Comma-separated letters `1..=m` restricting the level to one branch.
        #[arg(long, value_delimiter = ',')]
        prefix: Option<Vec<usize>>,
        /// Angle samples per half circle of the tube meshes.
        #[arg(long, default_value_t = 12)]
        resolution: usize,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s}")),
    }
}

#[derive(Serialize)]
struct SeqReport {
    g: usize,
    a: Vec<u8>,
    c: Vec<u64>,
    #[serde(rename = "C")]
    prefix: Vec<u64>,
    #[serde(rename = "N")]
    n: u64,
    density_bound: f64,
}

fn construction(common: &Common) -> Result<Construction> {
    if let Some(j) = common.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global()?;
    }
    let g = common.genus as usize;
    let n = match common.n {
        Some(n) => n,
        None => FoldingSequence::new(g)?.n,
    };
    Ok(Construction::build(g, n)?)
}

/// `Ok(true)` when every check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Seq { genus } => {
            let s = FoldingSequence::new(genus as usize)?;
            let r = SeqReport {
                g: s.g,
                a: s.a.clone(),
                c: s.c.clone(),
                prefix: s.prefix.clone(),
                n: s.n,
                density_bound: density_bound(s.width()),
            };
            write!(std::io::stdout().lock(), "{}", output::document(&s, &r)?)?;
            Ok(true)
        }
        Command::Certify { common, lemmas, depth, sample_step, pair_budget } => {
            let c = construction(&common)?;
            let all = [
                Lemma::Sigma,
                Lemma::TauSep,
                Lemma::TauProx,
                Lemma::Linking,
                Lemma::Nesting,
                Lemma::GenusStructure,
                Lemma::Folding,
                Lemma::Conjugation,
            ];
            let lemmas = if lemmas.is_empty() { all.to_vec() } else { lemmas };
            let settings = Settings { depth: depth as usize, h: sample_step, pair_budget };
            certify::certify(&c, &lemmas, &settings, &common.out)
        }
        Command::Export { common, what, depth, prefix, resolution } => {
            if resolution < 8 {
                bail!("resolution must be at least 8, got {resolution}");
            }
            let c = construction(&common)?;
            let opts = ExportOptions { depth: depth as usize, prefix, resolution };
            let mut out = std::io::stdout().lock();
            for p in export::export(&c, what, &opts, &common.out)? {
                writeln!(out, "{}", p.display())?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
