mod args;
mod commands;
mod config;
mod error;
mod output;
mod parse;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use config::RunConfig;
use error::{classify, record, EXIT_FAILED, EXIT_INVALID, EXIT_OK};

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let cfg = RunConfig::resolve(&cli.global)?;
    if let Some(n) = cfg.threads {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = commands::run(&cli.command, &cfg)?;
    match &cli.global.output {
        Some(path) => fs::write(path, &out.body).with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.body.as_bytes())?;
            stdout.flush()?;
        }
    }
    for w in &out.warnings {
        eprintln!("{w}");
    }
    Ok(if out.passed { EXIT_OK } else { EXIT_FAILED })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::from(EXIT_OK);
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", record("usage", first.trim_start_matches("error: ")));
            return ExitCode::from(EXIT_INVALID);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let (code, status) = classify(&e);
            eprintln!("{}", record(code, &format!("{e:#}")));
            ExitCode::from(status)
        }
    }
}
