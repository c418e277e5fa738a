use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frobscheme::Execution;

mod commands;
mod report;

use report::{emit, Format, InputError};

const FORMATS: &str = "\
JSON FORMATS

Scheme (files passed to --scheme, iso and classify):
  {\"n\":<int>,\"rank\":<int>,\"star\":[<int>,...],\"colors\":[[<int>,...],...]}
  n       number of points
  rank    number of basis relations; relations are 0..rank-1
  star    star[r] is the transpose of relation r
  colors  n rows of n entries; colors[a][b] is the relation of (a,b)
  Relation 0 must be the diagonal and no other cell. Unknown keys are
  rejected.

Frobenius spec (files passed to --spec):
  {\"kernel\":[<factor>,...],\"complement_order\":<int>}
  factor is one of
    {\"cyclic\":<m>,\"units\":[<int>,...]}
        Z_m, the complement acts by multiplication; negative units are
        reduced mod m
    {\"elem_abelian\":[<p>,<d>],\"matrices\":[[[<int>,...],...],...]}
        F_p^d, the complement acts by the given d x d matrices on column
        vectors
  The i-th unit or matrix of every factor together form the i-th
  generator of the complement. complement_order is the order of the
  group they generate.

Reports (--format json):
  {\"command\":<str>,\"status\":\"pass\"|\"failed\"|\"unresolved\",
   \"summary\":<str>,\"report\":<object>}

EXIT CODES
  0  pass
  2  input error (malformed JSON is reported with line and column)
  3  check failed; the report carries the certificate
  4  unresolved or unknown";

#[derive(Parser)]
#[command(name = "frobscheme", version, about = "Frobenius and pseudofrobenius association schemes", after_long_help = FORMATS)]
struct Cli {
    /// Worker threads; 1 runs every kernel sequentially.
    #[arg(long, global = true, env = "FROBSCHEME_THREADS")]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate schemes, specs and circulants.
    #[command(subcommand, after_long_help = FORMATS)]
    Gen(GenCommand),
    /// Check scheme properties.
    #[command(subcommand, after_long_help = FORMATS)]
    Check(CheckCommand),
    /// Algebraic and combinatorial isomorphism.
    #[command(subcommand, after_long_help = FORMATS)]
    Iso(IsoCommand),
    /// Classification verdicts.
    #[command(subcommand, after_long_help = FORMATS)]
    Classify(ClassifyCommand),
    /// Run the acceptance suite and print a pass/fail matrix.
    VerifyPaper {
        /// Comma-separated criterion ids; all by default.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Args)]
pub struct SpecSource {
    /// Cyclic kernel Z_m.
    #[arg(long, conflicts_with = "spec", requires = "units")]
    pub cyclic: Option<u64>,
    /// Complement generators for --cyclic, comma-separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub units: Vec<i64>,
    /// Frobenius spec JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrobeniusEmit {
    Scheme,
    Spec,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CirculantEmit {
    Graph,
    Edges,
    Closure,
}

#[derive(Subcommand)]
pub enum GenCommand {
    /// Orbital scheme (or normalized spec) of a Frobenius group.
    Frobenius {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long, value_enum, default_value_t = FrobeniusEmit::Scheme)]
        emit: FrobeniusEmit,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Scheme of a spread of F_q^2: Desarguesian, or Andre with --andre.
    Spread {
        #[arg(long)]
        q: u64,
        /// Andre spread replacing one regulus; needs q = s^2.
        #[arg(long)]
        andre: bool,
        /// Subfield element index selecting the replaced regulus.
        #[arg(long, default_value_t = 1, requires = "andre")]
        delta: usize,
        /// `spec` emits the Frobenius spec of a Desarguesian spread.
        #[arg(long, value_enum, default_value_t = FrobeniusEmit::Scheme, conflicts_with = "andre")]
        emit: FrobeniusEmit,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Circulant on Z_n from a connection set or from complement orbits.
    Circulant {
        #[arg(long)]
        n: u64,
        /// Connection set, or orbit representatives when --units is given.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        conn: Vec<i64>,
        /// Complement generators; the connection set becomes a union of orbits.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        units: Vec<i64>,
        #[arg(long, value_enum, default_value_t = CirculantEmit::Graph)]
        emit: CirculantEmit,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum CheckCommand {
    /// C1-C3 and the triangle identities.
    Axioms {
        #[arg(long)]
        scheme: PathBuf,
    },
    /// The t-condition; a failure carries a witness.
    Tcond {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long, default_value_t = 4)]
        t: usize,
    },
    /// Parabolic lattice and the pseudofrobenius screen.
    Parabolics {
        #[arg(long)]
        scheme: PathBuf,
    },
    /// Separability verdict from the parabolic lattice.
    Separability {
        #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
        scheme: Option<PathBuf>,
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Automorphisms from base triples after a 4-condition check.
    Schurity {
        #[arg(long)]
        scheme: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum IsoCommand {
    /// Algebraic isomorphisms between two schemes.
    Alg {
        x: PathBuf,
        y: PathBuf,
        /// Enumerate every algebraic isomorphism.
        #[arg(long, conflicts_with = "limit")]
        all: bool,
        #[arg(long, default_value_t = 1)]
        limit: usize,
    },
    /// Whether some algebraic isomorphism is induced by a point bijection.
    Induced {
        x: PathBuf,
        y: PathBuf,
        /// Most algebraic isomorphisms to examine.
        #[arg(long, default_value_t = 64)]
        limit: usize,
        /// Chooses the anchor point of the base triple; never the verdict.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
pub enum ClassifyCommand {
    /// Chain depth, case analysis and separability of a Frobenius spec.
    Thm2 {
        #[command(flatten)]
        source: SpecSource,
    },
    /// WL-dimension verdict for a circulant.
    Wl {
        #[arg(long)]
        n: u64,
        /// Connection set, or orbit representatives when --units is given.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        conn: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        units: Vec<i64>,
    },
    /// Frobenius, proper pseudofrobenius or neither, via the 4-condition.
    Frobenius {
        #[arg(long)]
        scheme: PathBuf,
        /// Frobenius spec of the reference group.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = match cli.threads {
        Some(0) => {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        Some(1) => Execution::Sequential,
        Some(t) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
                eprintln!("error: cannot start {t} threads: {e}");
                return ExitCode::from(2);
            }
            Execution::Parallel
        }
        None => Execution::Parallel,
    };
    let output = match commands::run(cli.command, exec) {
        Ok(output) => output,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.downcast_ref::<InputError>().is_some() { 2 } else { 1 };
            return ExitCode::from(code);
        }
    };
    match emit(&mut std::io::stdout().lock(), &output, cli.format) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
