mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "k3g2",
    version,
    about = "Genus-2 curves, their Kummer quartics and the associated elliptic K3 surfaces",
    after_help = "Sextics are given lowest degree first: --sextic \"f0,f1,f2,f3,f4,f5,f6\".\n\
                  K3G2_THREADS sets the number of worker threads.\n\
                  Exit status: 0 all checks pass, 1 a check failed, 2 bad arguments."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report to this file
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report on stdout instead of the text summary
    #[arg(long, global = true)]
    json: bool,
    /// Working precision in decimal digits for numeric checks
    #[arg(long, global = true, default_value_t = 60, value_parser = clap::value_parser!(u32).range(30..))]
    precision: u32,
    /// Seed for every random sample
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Clone, Debug, Default)]
pub struct CurveArgs {
    /// Sextic coefficients f0,f1,...,f6, lowest degree first
    #[arg(long, conflicts_with = "roots", allow_hyphen_values = true)]
    pub sextic: Option<String>,
    /// Six distinct rational roots, comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub roots: Option<String>,
    /// Leading coefficient used together with --roots
    #[arg(long, requires = "roots", allow_hyphen_values = true)]
    pub leading: Option<String>,
}

#[derive(Args, Clone, Debug)]
pub struct SourceArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Igusa-Clebsch invariants I2,I4,I6,I10
    #[arg(long, conflicts_with_all = ["sextic", "roots"], allow_hyphen_values = true)]
    pub ic: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    /// Exact identities and the lattice suite
    Fast,
    /// Adds the sampled involution check
    Full,
    /// Adds the Kummer-side construction of x, y, t
    Kummer,
}

#[derive(Subcommand)]
enum Command {
    /// Igusa-Clebsch invariants of a sextic
    Invariants(CurveArgs),
    /// Kummer quartic, nodes, tropes and the (16,6) configuration
    Kummer(CurveArgs),
    /// The surfaces X and Y attached to a curve or to invariants
    Build(SourceArgs),
    /// Kodaira fibers of X and Y and their trivial lattices
    Classify(SourceArgs),
    /// Discriminant, signature and roots of a named lattice
    Lattice {
        /// E8, D6, A3, U, Nikulin, Kummer, Lambda166, Naruki, <a>, with optional scale as in E8(-1)
        #[arg(long)]
        name: String,
        /// Count vectors of norm 2 (definite lattices only)
        #[arg(long)]
        roots: bool,
    },
    /// Run the verification suite
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: Level,
        #[command(flatten)]
        curve: CurveArgs,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("K3G2_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("K3G2_THREADS must be a positive integer, got '{v}'"))?;
    if n == 0 {
        return Err("K3G2_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let opts = commands::Options { precision: cli.precision as usize, seed: cli.seed };
    let outcome = match cli.command {
        Command::Invariants(c) => commands::invariants(&c, &opts),
        Command::Kummer(c) => commands::kummer(&c, &opts),
        Command::Build(s) => commands::build(&s, &opts),
        Command::Classify(s) => commands::classify(&s, &opts),
        Command::Lattice { name, roots } => commands::lattice(&name, roots, &opts),
        Command::Verify { level, curve } => commands::verify(level, &curve, &opts),
    };
    let report = match outcome {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            eprintln!("run with --help for usage");
            return ExitCode::from(2);
        }
    };
    let doc = report.to_json();
    let text = serde_json::to_string_pretty(&doc).expect("report serializes");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if cli.json {
        println!("{text}");
    } else {
        print!("{}", report.summary());
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
