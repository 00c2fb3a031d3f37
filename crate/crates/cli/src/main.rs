use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use abelmap_cli::commands;
use abelmap_cli::scan::ScanConfig;

/// Decides solvability of degree-2 Abel data given by an intersection
/// matrix, a polarization, a multidegree and a marked vertex, and finds or
/// verifies symmetric blowup sequences resolving it minimally.
#[derive(Parser)]
#[command(name = "abelmap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document, compute the singular locus and report
    /// solvability. Exit 0 solvable, 1 unsolvable, 2 on input errors.
    Check {
        file: PathBuf,
        /// Emit one JSON object instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Search for a minimal symmetric resolving sequence, or verify one
    /// from a file. Exit 0 when found/verified, 1 otherwise.
    Resolve {
        file: PathBuf,
        /// Cap on the sequence length searched (default: scales with the
        /// singular locus).
        #[arg(long)]
        max_len: Option<usize>,
        /// Verify this sequence file instead of searching.
        #[arg(long, value_name = "SEQFILE")]
        verify_only: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print one correction value and its underlying coefficients
    /// (all indices 1-based).
    Delta {
        file: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Sweep the degree-0 polarization grid, one representative per
    /// stratum signature; with --resolve run the full pipeline per row.
    Strata {
        file: PathBuf,
        #[arg(long)]
        denominator: i64,
        #[arg(long)]
        bound: i64,
        /// Run check + search per representative.
        #[arg(long)]
        resolve: bool,
        #[arg(long)]
        json: bool,
    },
    /// Generate seeded random instances, run the pipeline on each and
    /// append one JSON record per instance to --out. Exit 1 if any
    /// instance is unsolvable or its search fails.
    Scan {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        max_edges: usize,
        #[arg(long)]
        count: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        denominator: i64,
        #[arg(long, default_value_t = 1)]
        bound: i64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let (output, code) = match cli.command {
        Command::Check { file, json } => commands::cmd_check(&file, json)?,
        Command::Resolve {
            file,
            max_len,
            verify_only,
            json,
        } => commands::cmd_resolve(&file, max_len, verify_only.as_deref(), json)?,
        Command::Delta {
            file,
            i,
            k,
            m,
            n,
            json,
        } => commands::cmd_delta(&file, i, k, m, n, json)?,
        Command::Strata {
            file,
            denominator,
            bound,
            resolve,
            json,
        } => commands::cmd_strata(&file, denominator, bound, resolve, json)?,
        Command::Scan {
            vertices,
            max_edges,
            count,
            seed,
            denominator,
            bound,
            out,
        } => {
            let cfg = ScanConfig {
                vertices,
                max_edges,
                count,
                seed,
                denominator,
                bound,
            };
            commands::cmd_scan(&cfg, &out)?
        }
    };
    print!("{output}");
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
