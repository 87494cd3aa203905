use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use volform::{dsl, runner, scenarios, Document, RunConfig};

#[derive(Parser)]
#[command(name = "volform", version, about = "Exact checks of volume-form identities on affine varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a document file or a built-in scenario.
    Check {
        /// Path to a document, or a scenario name such as `surface:p=x,q=y`.
        target: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        degree_bound: u32,
        #[arg(long, default_value_t = 32)]
        lnd_bound: usize,
        /// Sample points for Condition (A).
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Include per-check wall time (breaks byte-identical output).
        #[arg(long)]
        timings: bool,
    },
    /// List the built-in scenarios.
    Scenarios,
    /// Print a scenario or document in canonical document syntax.
    Show { target: String },
    /// Syntax-check a document without running it.
    Parse {
        file: String,
        /// Also resolve names and print the canonical form.
        #[arg(long)]
        print: bool,
    },
}

fn load(target: &str) -> Result<Document, String> {
    let path = Path::new(target);
    if path.is_file() {
        let src = std::fs::read_to_string(path).map_err(|e| format!("{target}: {e}"))?;
        dsl::parse(&src).map_err(|e| format!("{target}: {e}"))
    } else {
        scenarios::by_name(target)
            .map(|s| s.document)
            .map_err(|e| format!("{target}: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::Scenarios => {
            for (name, about) in scenarios::CATALOG {
                println!("{name:<18} {about}");
            }
            ExitCode::SUCCESS
        }
        Command::Show { target } => match load(&target) {
            Ok(doc) => {
                print!("{}", dsl::print(&doc));
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
        Command::Parse { file, print } => {
            let src = match std::fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{file}: {e}");
                    return ExitCode::from(2);
                }
            };
            let result = if print {
                dsl::parse(&src).map(|d| print!("{}", dsl::print(&d)))
            } else {
                dsl::parse_syntax(&src)
            };
            match result {
                Ok(()) => {
                    if !print {
                        println!("{file}: ok");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{file}: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Check {
            target,
            seed,
            degree_bound,
            lnd_bound,
            points,
            format,
            timings,
        } => {
            let doc = match load(&target) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            let cfg = RunConfig {
                seed,
                degree_bound,
                lnd_bound,
                points,
                timings,
            };
            let report = runner::run(&doc, &target, &cfg);
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json()),
            }
            if report.summary.unknown > 0 && matches!(format, Format::Json) {
                eprintln!("warning: {} check(s) inconclusive at the configured bounds", report.summary.unknown);
            }
            if report.success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
