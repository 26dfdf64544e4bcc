use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twisted_fd::cli::{error_document, exit_code, parse_kind, run, Command, JobSpec, VerifyTarget};
use twisted_fd::Error;

#[derive(Parser)]
#[command(name = "twisted-fd", version, about = "Twisted (co)homology, connection and monodromy data for F_D")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON payload file, or `-` for stdin.
    #[arg(long, global = true, default_value = "-")]
    input: String,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// `all` or `p,q`.
    #[arg(long, global = true, default_value = "all")]
    pairs: String,
    /// r, xi or theta.
    #[arg(long, global = true, default_value = "xi")]
    kind: String,
    /// JSON file with the evaluation point for `pfaffian`.
    #[arg(long, global = true)]
    at: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    Classify,
    Basis,
    Ih,
    Ic,
    Pfaffian,
    Monodromy,
    Verify {
        #[command(subcommand)]
        target: Target,
    },
    Eval,
}

#[derive(Subcommand, Clone, Copy)]
enum Target {
    Tpr,
    Euler,
    Monodromy,
    Integrability,
}

fn read_json(path: &str) -> Result<serde_json::Value, Error> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Malformed(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{path}: {e}")))?;
    }
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{path}: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Classify => Command::Classify,
        Cmd::Basis => Command::Basis,
        Cmd::Ih => Command::Ih,
        Cmd::Ic => Command::Ic,
        Cmd::Pfaffian => Command::Pfaffian,
        Cmd::Monodromy => Command::Monodromy,
        Cmd::Eval => Command::Eval,
        Cmd::Verify { target } => Command::Verify(match target {
            Target::Tpr => VerifyTarget::Tpr,
            Target::Euler => VerifyTarget::Euler,
            Target::Monodromy => VerifyTarget::Monodromy,
            Target::Integrability => VerifyTarget::Integrability,
        }),
    };
    let prepared = (|| {
        let params = read_json(&cli.input)?;
        let at = cli.at.as_ref().map(|p| read_json(&p.to_string_lossy())).transpose()?;
        let kind = parse_kind(&cli.kind)?;
        Ok::<_, Error>(JobSpec { command, params, tol: cli.tol, seed: cli.seed, pairs: cli.pairs.clone(), kind, at })
    })();
    let (status, text) = match prepared {
        Ok(job) => {
            let out = run(&job);
            (out.status, out.render())
        }
        Err(e) => {
            let doc = error_document(&command.name(), None, cli.seed, &e);
            (exit_code(&e), serde_json::to_string_pretty(&doc).unwrap() + "\n")
        }
    };
    match &cli.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(status as u8)
}
