use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use igl_cli::{batch, corpus, decide_file, verify_file, Report, Trace};

#[derive(Parser)]
#[command(name = "igl", version, about = "Freeness of groups of invertible and divisorial ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceArg {
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance file, or every instance in a directory.
    Decide {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        /// Echo the inputs of every certificate step.
        #[arg(long, value_enum)]
        trace: Option<TraceArg>,
    },
    /// Print the group expression only.
    Expr { path: PathBuf },
    /// Run the abelian-engine checks on the instance and its sub-claims.
    Verify { path: PathBuf },
    /// Run the built-in corpus.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Decide { path, format, trace } => {
            let trace = if trace.is_some() { Trace::Full } else { Trace::Rules };
            let results = match batch(&path, decide_file) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code() as u8);
                }
            };
            let mut code = 0;
            let mut reports: Vec<Report> = Vec::new();
            for (_, r) in results {
                match r {
                    Ok(rep) => reports.push(rep.with_trace(trace)),
                    Err(e) => {
                        eprintln!("error: {e}");
                        code = code.max(e.exit_code());
                    }
                }
            }
            match format {
                Format::Json if path.is_dir() => {
                    println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
                }
                Format::Json => {
                    for r in &reports {
                        println!("{}", r.to_json());
                    }
                }
                Format::Human => {
                    let human: Vec<String> = reports.iter().map(Report::to_human).collect();
                    print!("{}", human.join("\n"));
                }
            }
            code
        }
        Command::Expr { path } => match decide_file(&path) {
            Ok(r) => {
                println!("{}", r.expr);
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::Verify { path } => {
            let results = match batch(&path, verify_file) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code() as u8);
                }
            };
            let mut code = 0;
            for (p, r) in results {
                match r {
                    Ok(checks) => {
                        println!("{}", p.display());
                        for c in checks {
                            let mark = if c.passed { "PASS" } else { "FAIL" };
                            if c.detail.is_empty() {
                                println!("  {mark} {}", c.name);
                            } else {
                                println!("  {mark} {} ({})", c.name, c.detail);
                            }
                            if !c.passed {
                                code = code.max(1);
                            }
                        }
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        code = code.max(e.exit_code());
                    }
                }
            }
            code
        }
        Command::Selftest => {
            let results = corpus::selftest();
            let failed = results.iter().filter(|r| !r.passed()).count();
            for r in &results {
                if r.passed() {
                    println!("ok    {}", r.file);
                } else {
                    println!("FAIL  {}", r.file);
                    for f in &r.failures {
                        println!("        {f}");
                    }
                }
            }
            println!("{} cases, {} passed, {} failed", results.len(), results.len() - failed, failed);
            i32::from(failed > 0)
        }
    };
    ExitCode::from(code as u8)
}
