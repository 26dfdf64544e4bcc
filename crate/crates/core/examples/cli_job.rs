//! Runs command-line jobs in process and prints the JSON documents.
//!
//!     cargo run --example cli_job

use serde_json::json;
use twisted_fd::cli::{run, Command, JobSpec, VerifyTarget};
use twisted_fd::connection::PfaffianKind;

fn main() {
    let job = |command, params| JobSpec { command, params, tol: None, seed: 0, pairs: "all".into(), kind: PfaffianKind::Xi, at: None };
    let out = run(&job(Command::Classify, json!({"alpha": [0, 0, 0, 0, 0]})));
    println!("classify -> status {}\n{}", out.status, out.render());
    let out = run(&job(Command::Verify(VerifyTarget::Euler), json!({"a": 0.3, "b": [0.2, 0.5], "c": 1.7, "x": [0.1, 0.2]})));
    println!("verify euler -> status {}, residual {}", out.status, out.document["residual"]);
    let out = run(&job(Command::Ic, json!({"alpha": [0, 0, 0, 0, 0], "x": [0.3, 0.3]})));
    println!("ic on the singular locus -> status {}, {}", out.status, out.document["error"]);
}
