mod args;
mod commands;
mod session;

use std::io::{self, BufRead, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use plambda::Error;

const SCHEMA: &str = "plambda.report/1";

/// Rendered output of one command and its exit status.
struct Rendered {
    stdout: String,
    stderr: String,
    code: u8,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } => 3,
        e if e.is_usage() => 2,
        _ => 1,
    }
}

fn execute(cli: &Cli, force_json: bool) -> Rendered {
    let name = commands::command_name(&cli.command);
    let json_out = cli.session.json || force_json;
    let started = Instant::now();
    let outcome = commands::run(&cli.command, &cli.session);
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(o) => {
            let stdout = if json_out {
                let mut report = json!({"schema": SCHEMA, "command": name, "result": o.result, "summary": o.summary});
                if cli.session.timing {
                    report["timing_ms"] = json!(elapsed_ms);
                }
                report.to_string()
            } else if cli.session.timing {
                format!("{}\n({elapsed_ms:.1} ms)", o.summary)
            } else {
                o.summary
            };
            Rendered { stdout, stderr: String::new(), code: 0 }
        }
        Err(e) => {
            let code = exit_code(&e);
            if json_out {
                let report = json!({
                    "schema": SCHEMA,
                    "command": name,
                    "error": {"kind": e.kind(), "message": e.to_string()},
                });
                Rendered { stdout: report.to_string(), stderr: String::new(), code }
            } else {
                Rendered { stdout: String::new(), stderr: format!("error: {e}"), code }
            }
        }
    }
}

fn usage_error(message: String, json_out: bool) -> Rendered {
    if json_out {
        let report = json!({"schema": SCHEMA, "error": {"kind": "usage", "message": message}});
        Rendered { stdout: report.to_string(), stderr: String::new(), code: 2 }
    } else {
        Rendered { stdout: String::new(), stderr: message, code: 2 }
    }
}

fn batch_line(line: &str, force_json: bool) -> Rendered {
    let Some(words) = shlex::split(line) else {
        return usage_error(format!("unbalanced quotes in `{line}`"), force_json);
    };
    match Cli::try_parse_from(std::iter::once("plambda".to_string()).chain(words)) {
        Ok(cli) if matches!(cli.command, Command::Batch { .. }) => {
            usage_error("batch cannot be nested".into(), force_json || cli.session.json)
        }
        Ok(cli) => execute(&cli, force_json),
        Err(e) => usage_error(e.to_string().trim_end().to_string(), force_json),
    }
}

fn run_batch(parallel: bool, force_json: bool) -> u8 {
    let lines: Vec<String> = io::stdin()
        .lock()
        .lines()
        .map_while(|l| l.ok())
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();
    let rendered: Vec<Rendered> = if parallel && cfg!(feature = "parallel") {
        run_parallel(&lines, force_json)
    } else {
        lines.iter().map(|l| batch_line(l, force_json)).collect()
    };
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    for r in &rendered {
        emit(&mut out, &mut err, r);
    }
    rendered.iter().map(|r| r.code).max().unwrap_or(0)
}

#[cfg(feature = "parallel")]
fn run_parallel(lines: &[String], force_json: bool) -> Vec<Rendered> {
    use rayon::prelude::*;
    lines.par_iter().map(|l| batch_line(l, force_json)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_parallel(lines: &[String], force_json: bool) -> Vec<Rendered> {
    lines.iter().map(|l| batch_line(l, force_json)).collect()
}

fn emit(out: &mut impl Write, err: &mut impl Write, r: &Rendered) {
    if !r.stdout.is_empty() {
        let _ = writeln!(out, "{}", r.stdout);
    }
    if !r.stderr.is_empty() {
        let _ = writeln!(err, "{}", r.stderr);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let code = match &cli.command {
        Command::Batch { parallel } => run_batch(*parallel, cli.session.json),
        _ => {
            let r = execute(&cli, false);
            emit(&mut io::stdout().lock(), &mut io::stderr().lock(), &r);
            r.code
        }
    };
    ExitCode::from(code)
}
