//! `hardmat`: command-line front end.
//!
//! Results go to stdout as a single line of JSON (or `.slc` text for
//! `circuit emit`). Errors go to stderr. Exit codes: 0 success, 1 domain
//! error, 2 usage error, 3 budget exceeded.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hardmat",
    version,
    about = "Explicit hard matrices for bounded-depth linear circuits"
)]
pub struct Cli {
    /// Cap on enumerated subsets and kernel vectors (overrides HARDMAT_BUDGET).
    #[arg(long, global = true)]
    pub budget: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a t-wise Sidon set of size n² from powers of two modulo a prime.
    Sidon {
        #[arg(long, required_unless_present = "check")]
        n: Option<usize>,
        #[arg(long)]
        t: usize,
        /// Check the t-sums of a previous `sidon` output ("-" for stdin)
        /// instead of building a set.
        #[arg(long, conflicts_with = "n")]
        check: Option<PathBuf>,
    },
    /// Generate one of the explicit hard matrices.
    #[command(subcommand)]
    Hard(HardCommand),
    /// Shoup–Smolensky measures and size bounds.
    #[command(subcommand)]
    Ssdim(SsdimCommand),
    /// Probe vectors, Reed–Solomon generators and bilinear hits.
    #[command(subcommand)]
    Hitting(HittingCommand),
    /// The hard PSD instance and factorization refuters.
    #[command(subcommand)]
    Psd(PsdCommand),
    /// Parse, verify and re-emit `.slc` circuit files.
    #[command(subcommand)]
    Circuit(CircuitCommand),
    /// Exhaustive minimum-size depth-2 factorization of a tiny matrix.
    Search {
        #[command(flatten)]
        input: Input,
        /// Largest inner dimension; defaults to the matrix side.
        #[arg(long)]
        m_max: Option<usize>,
        /// Largest size considered; defaults to nnz(A) + n.
        #[arg(long)]
        s_max: Option<usize>,
        /// Search node cap.
        #[arg(long)]
        nodes: Option<u64>,
    },
}

/// A matrix JSON file; stdin when omitted.
#[derive(Args, Debug)]
pub struct Input {
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum HardCommand {
    /// α^{e_ij} over an extension of F_p of degree 10·t·Δ + 1.
    Finite {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    /// 2^{e_ij} over the integers.
    Integers {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    /// The doubly-exponential n×n integer matrix.
    Trivial {
        #[arg(long)]
        n: usize,
    },
    /// Block-diagonal copies of the doubly-exponential matrix.
    Quasipoly {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: u32,
    },
    /// I_m ⊗ A for an input matrix A.
    Amplify {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Subcommand, Debug)]
pub enum SsdimCommand {
    /// Dimension of the span of the t-wise products.
    Gamma {
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = Base::Prime)]
        base: Base,
        #[command(flatten)]
        input: Input,
    },
    /// Number of distinct nonempty subset sums of the t-wise products.
    Sigma {
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Evaluate the Γ and Σ bounds in log space.
    Bound {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        n: u64,
    },
    /// Largest size ruled out for depth-d circuits.
    Certify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        t: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    /// The prime subfield (finite fields); the rationals otherwise.
    Prime,
    /// The matrix's own field.
    #[value(name = "self")]
    Own,
}

#[derive(Subcommand, Debug)]
pub enum HittingCommand {
    /// Probe vectors (1, i, …, i^{n−1}) for i = 1..s over Q.
    Vand {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
    },
    /// q×k Reed–Solomon generator over F_q.
    Rs {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
    },
    /// Minimum Hamming weight of the kernel of Gᵀ.
    Kernelweight {
        #[command(flatten)]
        input: Input,
    },
    /// aᵀ·M·b.
    Hit {
        /// Comma-separated entries.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[command(flatten)]
        input: Input,
    },
    /// Least probe node on which a sparse rational row does not vanish.
    Rowhit {
        /// Comma-separated rational entries.
        #[arg(long, allow_hyphen_values = true)]
        row: String,
        #[arg(long)]
        s: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum PsdCommand {
    /// Build M̃ and M = M̃ᵀM̃.
    Build {
        #[arg(long)]
        n: usize,
    },
    /// Check a claim BᵀB = M.
    RefuteSym {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: PathBuf,
    },
    /// Check a claim B·C = M with one invertible factor.
    RefuteInv {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        c: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideArg {
    #[value(name = "left-invertible", alias = "left")]
    Left,
    #[value(name = "right-invertible", alias = "right")]
    Right,
}

#[derive(Subcommand, Debug)]
pub enum CircuitCommand {
    /// Parse a circuit and summarize its layers.
    Parse {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Multiply out a circuit and compare it with a target matrix.
    Verify {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Re-emit a circuit in canonical form.
    Emit {
        #[arg(long)]
        circuit: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version and 2 for usage errors.
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            if let Some(p) = &out.provenance {
                eprintln!("provenance: {p}");
            }
            println!("{}", out.stdout);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
