mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperspec::analysis::Fingerprint;
use hyperspec::spectra::SpectralConfig;

use crate::output::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "hyperspec", version, about = "Exact spectra of uniform hypergraphs")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Largest characteristic-polynomial degree to attempt.
    #[arg(long, global = true, default_value_t = SpectralConfig::default().degree_cap, value_parser = positive)]
    degree_cap: usize,
    /// Largest Macaulay matrix dimension to attempt.
    #[arg(long, global = true, default_value_t = SpectralConfig::default().dim_cap, value_parser = positive)]
    dim_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout (a directory for `paper-example`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic polynomial of a hypergraph's adjacency tensor.
    Charpoly { file: PathBuf },
    /// E-characteristic polynomial (raw and normalized).
    Echarpoly { file: PathBuf },
    /// Whether two hypergraphs are cospectral.
    Cospectral {
        first: PathBuf,
        second: PathBuf,
        /// Compare E-characteristic polynomials instead.
        #[arg(long)]
        e: bool,
    },
    /// Number of simplices (k+1 vertices spanning only edges).
    Simplices { file: PathBuf },
    /// Validate a partition, switch, and check the tensor similarity exactly.
    VerifySwitch {
        file: PathBuf,
        /// 1-based vertices of V1, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "partition", required_unless_present = "partition")]
        v1: Vec<usize>,
        /// Partition file as written by `paper-example`.
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Write the switching example pair H, G and its partition.
    PaperExample {
        #[arg(long)]
        n: usize,
    },
    /// Check whether a hypergraph is determined by its spectrum.
    Ds {
        file: PathBuf,
        /// Only fingerprint candidates with the target's edge and simplex counts.
        #[arg(long)]
        prune: bool,
        #[arg(long, value_enum, default_value_t = FingerprintArg::CharPoly)]
        fingerprint: FingerprintArg,
        /// Resumable progress file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Check that cospectral pairs share edge and simplex counts.
    Lemma4 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Fewest simplices destroyed by deleting r edges of the complete hypergraph.
    SimplexBound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FingerprintArg {
    CharPoly,
    EdgeCountOnly,
}

impl From<FingerprintArg> for Fingerprint {
    fn from(f: FingerprintArg) -> Self {
        match f {
            FingerprintArg::CharPoly => Fingerprint::CharPoly,
            FingerprintArg::EdgeCountOnly => Fingerprint::EdgeCountOnly,
        }
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn config(cli: &Cli) -> Result<SpectralConfig, CliError> {
    let prime_seed = match std::env::var("HYPERSPEC_PRIME_SEED") {
        Ok(s) => {
            s.trim().parse().map_err(|_| CliError::Usage(format!("HYPERSPEC_PRIME_SEED={s} is not an integer")))?
        }
        Err(_) => 0,
    };
    Ok(SpectralConfig { degree_cap: cli.degree_cap, dim_cap: cli.dim_cap, prime_seed })
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let cfg = config(cli)?;
    let rendered = match &cli.command {
        Command::Charpoly { file } => commands::charpoly(file, &cfg)?,
        Command::Echarpoly { file } => commands::echarpoly(file, &cfg)?,
        Command::Cospectral { first, second, e } => commands::cospectral(first, second, *e, &cfg)?,
        Command::Simplices { file } => commands::simplices(file)?,
        Command::VerifySwitch { file, v1, partition } => commands::verify_switch(file, v1, partition.as_deref())?,
        Command::PaperExample { n } => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let rendered = commands::paper_example(*n, &dir)?;
            return output::emit(&rendered, cli.format, None);
        }
        Command::Ds { file, prune, fingerprint, checkpoint } => {
            commands::ds(file, *prune, (*fingerprint).into(), checkpoint.clone(), &cfg)?
        }
        Command::Lemma4 { n, k } => commands::lemma4(*n, *k, &cfg)?,
        Command::SimplexBound { n, k, r } => commands::simplex_bound(*n, *k, *r)?,
    };
    output::emit(&rendered, cli.format, cli.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(e.exit_code())
        }
    }
}
