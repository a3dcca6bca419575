mod args;
mod commands;
mod output;

use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{CommandFactory, Parser};

use args::{Cli, Command, ReplayArgs};
use commands::{Completed, UsageError};
use output::RunManifest;

/// Validation errors exit with 2, numerical non-convergence with 3,
/// everything else (I/O, replay mismatch) with 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<gmn_core::Error>() {
        Some(gmn_core::Error::NonConvergence { .. }) => 3,
        Some(gmn_core::Error::Io(_) | gmn_core::Error::Csv(_) | gmn_core::Error::Json(_)) => 1,
        Some(_) => 2,
        None => 1,
    }
}

/// Resolves defaults so the manifest holds every value the run used.
fn resolve(command: Command) -> Result<Command> {
    Ok(match command {
        Command::Simulate(a) => Command::Simulate(a.resolve()?),
        other => other,
    })
}

fn execute(command: &Command) -> Result<Completed> {
    match command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Exact(a) => commands::exact(a),
        Command::Table2(a) => commands::table2(a),
        Command::Figure1(a) => commands::figure1(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Census(a) => commands::census(a),
        Command::Replay(_) => unreachable!("replay is dispatched separately"),
    }
}

/// Runs a resolved command and commits its outputs plus the manifest.
fn run_and_commit(mut command: Command) -> Result<(RunManifest, u8)> {
    let out_dir = command.out_args_mut().resolve();
    let done = execute(&command)?;
    done.outputs.write_all(&out_dir)?;
    let manifest = RunManifest::new(&command, &out_dir, &done.outputs);
    manifest.write()?;
    eprintln!("wrote {} file(s) and {} to {}", done.outputs.files.len(), output::MANIFEST_FILE, out_dir.display());
    Ok((manifest, done.exit_code))
}

fn replay(args: &ReplayArgs) -> Result<u8> {
    let recorded = RunManifest::read(&args.manifest)?;
    // outputs are resolved relative to the manifest's own directory, so a
    // moved run directory still replays
    let original_dir = match args.manifest.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => ".".into(),
    };
    let mut command = recorded.command.clone();
    command.out_args_mut().out = Some(args.out.out.clone().unwrap_or_else(|| original_dir.clone()));
    let originals: Vec<_> = recorded
        .outputs
        .iter()
        .map(|rel| fs::read(original_dir.join(rel)).with_context(|| format!("reading recorded output {}", rel.display())))
        .collect::<Result<_>>()?;
    let (manifest, code) = run_and_commit(command)?;
    if !args.check {
        return Ok(code);
    }
    let mut mismatches = 0;
    if manifest.outputs != recorded.outputs {
        eprintln!("replay produced a different file list");
        mismatches += 1;
    }
    for (rel, before) in recorded.outputs.iter().zip(&originals) {
        let after = fs::read(manifest.out_dir.join(rel))?;
        if &after != before {
            eprintln!("differs: {}", rel.display());
            mismatches += 1;
        }
    }
    if mismatches > 0 {
        anyhow::bail!("{mismatches} output(s) differ from the recorded run");
    }
    println!("replay check: {} output(s) byte-identical", recorded.outputs.len());
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Replay(args) => replay(&args),
        command => resolve(command).and_then(run_and_commit).map(|(_, code)| code),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let code = exit_code(&err);
            if let Some(usage) = err.downcast_ref::<UsageError>() {
                let _ = Cli::command().error(clap::error::ErrorKind::ArgumentConflict, usage).print();
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(code)
        }
    }
}
