//! `sepcomp`: batch analyses of function groups, homomorphisms and codes.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "sepcomp", version, about = "Separating maps between function groups and codes")]
struct Cli {
    /// Input file; may be repeated. All files share one namespace.
    #[arg(long = "workspace", short = 'w', value_name = "FILE", global = true)]
    workspace: Vec<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Function-group predicates with witnesses.
    Analyze {
        #[arg(required = true, value_name = "FGROUP")]
        names: Vec<String>,
    },
    /// Weighted-composition form of a homomorphism.
    Represent {
        /// Require a bijection and recover both directions.
        #[arg(long)]
        iso: bool,
        #[arg(required = true, value_name = "HOM")]
        names: Vec<String>,
    },
    /// Monomial equivalence of two codes.
    Equiv { code1: String, code2: String },
    /// Monomial automorphisms of a code.
    Aut { code: String },
    /// Hamming weight enumerator.
    Wenum {
        #[arg(required = true, value_name = "CODE")]
        names: Vec<String>,
    },
}

fn max_closure() -> Result<usize, Failure> {
    match std::env::var("SEPCOMP_MAX_CLOSURE") {
        Ok(v) => v
            .trim()
            .parse()
            .ok()
            .filter(|&n: &usize| n > 0)
            .ok_or_else(|| Failure::input("BadEnvironment", format!("SEPCOMP_MAX_CLOSURE={v} is not a positive integer"))),
        Err(_) => Ok(sepcomp::fgroup::DEFAULT_MAX_CLOSURE),
    }
}

fn run(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    if cli.workspace.is_empty() {
        return Err(Failure::input("NoWorkspace", "at least one --workspace FILE is required".into()));
    }
    let ws = sepcomp::Workspace::load(&cli.workspace, max_closure()?).map_err(Failure::from)?;
    let ctx = commands::Context { ws: &ws, json: cli.json };
    match &cli.command {
        Command::Analyze { names } => ctx.analyze(names, out),
        Command::Represent { iso, names } => ctx.represent(names, *iso, out),
        Command::Equiv { code1, code2 } => ctx.equiv(code1, code2, out),
        Command::Aut { code } => ctx.aut(code, out),
        Command::Wenum { names } => ctx.wenum(names, out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            if code != 0 {
                eprintln!("ERR 4 UsageError: invalid command line");
            }
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let result = run(&cli, &mut out);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = stdout.flush();
            eprintln!("ERR {} {}: {}", f.code, f.kind, f.message);
            ExitCode::from(f.code)
        }
    }
}
