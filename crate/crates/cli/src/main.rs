//! `ultra`: exact ultrametric computations, each answer backed by checked
//! certificates and written as one JSON report on standard output.
//!
//! Exit status is 0 when every certificate holds, 1 when one is falsified
//! and 2 on errors (bad input, unmet preconditions, lost precision).

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "ultra", version, about = "Exact p-adic and ultrametric computations with JSON certificate reports")]
pub struct Cli {
    /// The prime p.
    #[arg(long, global = true, alias = "p")]
    pub prime: Option<u64>,
    /// Relative precision in p-adic digits.
    #[arg(long, global = true, default_value_t = 64)]
    pub prec: u32,
    /// Largest Eisenstein level a computation may reach.
    #[arg(long, global = true, default_value_t = 1024)]
    pub level_cap: u32,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Instances per property family in `verify all`.
    #[arg(long, global = true, default_value_t = 20)]
    pub trials: usize,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Arithmetic in Q_p.
    #[command(subcommand)]
    Padic(PadicCmd),
    /// Arithmetic in the ramified extensions Q_p(p^(1/e)).
    #[command(subcommand)]
    Eis(EisCmd),
    /// Gauss norms, Hensel lifting and root perturbation bounds.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Closed-ball calculus.
    #[command(subcommand)]
    Balls(BallsCmd),
    /// Distances, orthogonality, projections and extensions in K^n.
    #[command(subcommand)]
    Linalg(LinalgCmd),
    /// Constructive witnesses: dense norms and ball chains avoiding a sequence.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Eventually constant sequences modulo null sequences.
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Randomized property sweeps.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
pub enum PadicCmd {
    /// Valuation and norm of a value.
    Norm {
        #[arg(long, allow_hyphen_values = true)]
        value: String,
    },
    /// `a op b` with op one of add, sub, mul, div.
    Arith {
        #[arg(long)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum EisCmd {
    /// `a op b` for elements written `c0 + c1*pi + ... @ level e`.
    Arith {
        #[arg(long)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Valuation, a multiple of 1/e.
    Valuation {
        #[arg(long, allow_hyphen_values = true)]
        value: String,
    },
    /// Re-expresses an element at a level divisible by its own.
    Lift {
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        #[arg(long)]
        to: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum PolyCmd {
    /// Gauss norm, with the bound |f(alpha)| <= |f| checked at `alpha`.
    GaussNorm {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        alpha: String,
    },
    /// Newton lifting of a simple root modulo p^target.
    Hensel {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        a0: String,
        #[arg(long, default_value_t = 20)]
        target: u32,
    },
    /// Part 1 bounds |g(alpha)| for a root alpha of f; part 2 bounds the
    /// distance from alpha to the nearest root of g.
    RootsBound {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        part: u8,
        /// Monic f (part 1).
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// Monic g of the same degree (part 1).
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        /// Roots of f separated by `;` (part 2).
        #[arg(long, allow_hyphen_values = true)]
        f_roots: Option<String>,
        /// Roots of g separated by `;` (part 2).
        #[arg(long, allow_hyphen_values = true)]
        g_roots: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SpaceKind {
    Qp,
    Eis,
    Tower,
    Tree,
}

#[derive(Subcommand, Debug)]
pub enum BallsCmd {
    /// Checks every pair of balls listed in a file, and the chain they form
    /// when nested.
    ///
    /// Lines are `ball RADIUS CENTER`; a tree space starts with a line
    /// `tree (w leaf (w' leaf leaf) ...)`. `#` starts a comment.
    Check {
        #[arg(long, value_enum)]
        space: SpaceKind,
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum LinalgCmd {
    /// d(x, V) with V spanned by the rows of `span` (`;` between rows).
    Dist {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        span: Option<String>,
    },
    /// Whether |x| = d(x, span{y}).
    Orth {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Orthogonal projection onto the span of the rows.
    Project {
        #[arg(long, allow_hyphen_values = true)]
        span: String,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Norm-preserving extension of a map given on spanning vectors.
    HahnBanach {
        #[arg(long, allow_hyphen_values = true)]
        span: String,
        /// Images of the spanning vectors, one row each.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
    /// Immediacy of the range of an isometric embedding (n x k, by rows).
    Immediate {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum WitnessCmd {
    /// An element with a < |z| < b.
    NormDense {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Nested balls, each missing one more point of the dense sequence.
    Schikhof {
        #[arg(long, default_value_t = 5)]
        steps: usize,
        /// Radii r0, r1, ..., comma separated; overrides `--steps`.
        #[arg(long)]
        radii: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SeqCmd {
    /// Norm of the class modulo null sequences, written `[v1, v2 | tail]`.
    QuotientNorm {
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
    },
    /// The constant sequence of a vector.
    Embed {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Every property family, `--trials` instances each.
    All,
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let mut report = Report::new(argv[1..].join(" "));
    let err = commands::run(&cli, &mut report).err().map(|e| e.to_string());
    report.finish(err);
    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    // a closed pipe is not worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{json}");
    std::process::exit(report.outcome.exit_code());
}
