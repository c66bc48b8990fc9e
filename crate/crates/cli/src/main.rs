use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kquot_core::cli::{
    demo_example_1_2, dispatch, parse_problem, run_conic, run_count, run_specialize,
    verify_suite, DispatchOptions, ProblemSpec, ResultDocument,
};

#[derive(Parser)]
#[command(name = "kquot", version, about = "Classes of quotients V/G in the Grothendieck ring of varieties")]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Print the derivation trace.
    #[arg(long, global = true)]
    trace: bool,

    /// Search height or enumeration budget.
    #[arg(long, global = true)]
    bound: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// Pretty-printed JSON.
    Canonical,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the class of the quotient described by a problem file.
    QuotientClass {
        file: PathBuf,
        /// Force a route: split, prime-power, descent, dim-le-2, semilinear.
        #[arg(long)]
        route: Option<String>,
        /// Prove the class differs from this expression.
        #[arg(long)]
        certify_not: Option<String>,
        /// Compare point counts over F_q for these q.
        #[arg(long, value_delimiter = ',')]
        check_counts: Vec<u64>,
    },
    /// Run a worked example end to end.
    Demo {
        #[arg(value_enum)]
        name: Demo,
    },
    /// Decide whether a x^2 + b y^2 = z^2 has a rational point.
    Conic {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Count F_q-points of the quotient with one method.
    Count {
        file: PathBuf,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "twisted")]
        method: String,
        #[arg(long)]
        route: Option<String>,
    },
    /// Point count predicted by the class at an odd prime.
    Specialize {
        file: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        route: Option<String>,
    },
    /// Run the built-in batteries.
    VerifySuite,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Demo {
    #[value(name = "example-1-2")]
    Example12,
}

fn load(path: &Path) -> Result<ProblemSpec, ResultDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        let mut doc = ResultDocument::default();
        doc.fail(
            kquot_core::cli::ExitStatus::ParseError,
            "input",
            format!("cannot read {}: {e}", path.display()),
        );
        doc
    })?;
    parse_problem(&text).map_err(|e| ResultDocument::problem_failure(&e))
}

fn run(args: &Args) -> ResultDocument {
    let base = DispatchOptions {
        trace: args.trace,
        bound: args.bound,
        ..Default::default()
    };
    let with_spec = |file: &Path, f: &dyn Fn(&ProblemSpec) -> ResultDocument| match load(file) {
        Ok(spec) => f(&spec),
        Err(doc) => doc,
    };
    match &args.command {
        Command::QuotientClass {
            file,
            route,
            certify_not,
            check_counts,
        } => {
            let opts = DispatchOptions {
                route: route.clone(),
                certify_not: certify_not.clone(),
                check_counts: check_counts.clone(),
                ..base.clone()
            };
            with_spec(file, &|s| dispatch(s, &opts))
        }
        Command::Demo { name: Demo::Example12 } => demo_example_1_2(&base),
        Command::Conic { a, b } => run_conic(*a, *b, args.bound),
        Command::Count {
            file,
            q,
            method,
            route,
        } => {
            let opts = DispatchOptions {
                route: route.clone(),
                ..base.clone()
            };
            with_spec(file, &|s| run_count(s, *q, method, &opts))
        }
        Command::Specialize { file, prime, route } => {
            let opts = DispatchOptions {
                route: route.clone(),
                ..base.clone()
            };
            with_spec(file, &|s| run_specialize(s, *prime, &opts))
        }
        Command::VerifySuite => verify_suite(),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let doc = run(&args);
    match args.format {
        Format::Text => print!("{}", doc.render()),
        Format::Canonical => print!("{}", doc.render_canonical()),
    }
    ExitCode::from(doc.status.code() as u8)
}
