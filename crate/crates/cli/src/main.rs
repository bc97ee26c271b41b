use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use solvhull_cli::commands::{self, EXIT_VALIDATION};
use solvhull_cli::{report, Command, Options, SpecFile};

#[derive(Parser)]
#[command(name = "solvhull", version, about = "Algebraic hulls, flat connections and exponential iterated integrals")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON spec file.
    #[arg(long, conflicts_with = "example")]
    spec: Option<PathBuf>,
    /// Built-in example: sol or sect4.
    #[arg(long)]
    example: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol_alg: Option<f64>,
    #[arg(long)]
    tol_num: Option<f64>,
    /// Truncation depth of the exponential series.
    #[arg(long)]
    depth: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Nilradical, ad_s and Jordan residuals.
    Analyze(Common),
    /// Semisimple splitting and triangular connection form.
    Hull(Common),
    /// Lattice monodromy and its consistency checks.
    Monodromy(Common),
    /// Evaluate an (exponential) iterated integral along a path.
    Integrate {
        #[command(flatten)]
        common: Common,
        /// Named path from the spec.
        #[arg(long, conflicts_with = "word")]
        path: Option<String>,
        /// Lattice word whose loop is used as the path.
        #[arg(long)]
        word: Option<String>,
        /// Integral such as "e^(ipi*dt) dx e^(0)".
        #[arg(long)]
        integral: String,
    },
    /// Run every invariant check.
    Verify(Common),
    /// Print a built-in example as a spec file.
    Example {
        name: String,
    },
}

fn load(common: &Common) -> Result<(SpecFile, String), String> {
    match (&common.spec, &common.example) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let spec = SpecFile::parse(&text).map_err(|e| format!("invalid spec: {e}"))?;
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((spec, format!("file:{name}")))
        }
        (None, Some(name)) => SpecFile::builtin(name)
            .map(|s| (s, format!("example:{name}")))
            .ok_or_else(|| format!("unknown example `{name}` (expected sol or sect4)")),
        _ => Err("give exactly one of --spec or --example".into()),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, command) = match cli.command {
        Cmd::Analyze(c) => (c, Command::Analyze),
        Cmd::Hull(c) => (c, Command::Hull),
        Cmd::Monodromy(c) => (c, Command::Monodromy),
        Cmd::Verify(c) => (c, Command::Verify),
        Cmd::Integrate { common, path, word, integral } => (common, Command::Integrate { path, word, integral }),
        Cmd::Example { name } => {
            return match SpecFile::builtin(&name) {
                Some(spec) => {
                    println!("{}", serde_json::to_string_pretty(&spec).expect("spec serializes"));
                    ExitCode::SUCCESS
                }
                None => {
                    eprintln!("unknown example `{name}`");
                    ExitCode::from(EXIT_VALIDATION as u8)
                }
            };
        }
    };
    let (spec, source) = match load(&common) {
        Ok(v) => v,
        Err(msg) => {
            let body = json!({
                "command": command.name(),
                "error": {"kind": "InvalidSpec", "message": msg},
                "exit_code": EXIT_VALIDATION,
                "pass": false,
            });
            let _ = emit(&report::render(&body), common.out.as_ref());
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
    };
    let opts = Options { seed: common.seed, tol_alg: common.tol_alg, tol_num: common.tol_num, depth: common.depth };
    let outcome = commands::run(&command, &spec, &source, &opts);
    eprintln!("{} finished in {:.3} s", command.name(), outcome.elapsed);
    if let Err(msg) = emit(&commands::render(&outcome), common.out.as_ref()) {
        eprintln!("{msg}");
        return ExitCode::from(EXIT_VALIDATION as u8);
    }
    ExitCode::from(outcome.exit_code as u8)
}
