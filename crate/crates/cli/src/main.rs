mod args;
mod config;
mod experiments;
mod output;
mod svg;

use std::ffi::OsString;
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Format};
use experiments::CliError;
use output::{write_file, Manifest};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_ACCEPTANCE: u8 = 4;

fn run(argv: Vec<OsString>) -> u8 {
    let argv = match config::merge(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("sfq: {msg}");
            return EXIT_CONFIG;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };

    let name = cli.command.name();
    let start = Instant::now();
    let outcome = match experiments::run(&cli.command, cli.global.seed) {
        Ok(o) => o,
        Err(CliError::Config(msg)) => {
            eprintln!("sfq {name}: invalid configuration: {msg}");
            return EXIT_CONFIG;
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("sfq {name}: numerical failure: {msg}");
            return EXIT_NUMERICAL;
        }
    };
    let wall = start.elapsed().as_secs_f64();

    let dir = &cli.global.out;
    if let Err(e) = fs::create_dir_all(dir) {
        eprintln!("sfq: --out {}: {e}", dir.display());
        return EXIT_CONFIG;
    }
    let mut artifacts: Vec<(String, Vec<u8>)> = Vec::new();
    if cli.global.format.contains(&Format::Csv) {
        match outcome.table.to_csv() {
            Ok(bytes) => artifacts.push((format!("{name}.csv"), bytes)),
            Err(e) => {
                eprintln!("sfq {name}: cannot serialise table: {e}");
                return EXIT_NUMERICAL;
            }
        }
    }
    if cli.global.format.contains(&Format::Svg) {
        match &outcome.chart {
            Some(c) => artifacts.push((format!("{name}.svg"), c.render().into_bytes())),
            None => log::info!("{name} produces a single row; no chart written"),
        }
    }
    for (file, text) in &outcome.extra {
        artifacts.push((file.clone(), text.clone().into_bytes()));
    }
    let manifest = Manifest {
        experiment: name,
        version: env!("CARGO_PKG_VERSION"),
        seed: cli.global.seed,
        global: serde_json::to_value(&cli.global).unwrap_or_default(),
        parameters: cli.command.parameters(),
        files: artifacts.iter().map(|(f, _)| f.clone()).collect(),
        wall_time_s: wall,
    };
    let manifest_json = serde_json::to_vec_pretty(&manifest).unwrap_or_default();
    artifacts.push(("manifest.json".into(), manifest_json));
    for (file, bytes) in &artifacts {
        if let Err(e) = write_file(dir, file, bytes) {
            eprintln!("sfq: --out {}: cannot write {file}: {e}", dir.display());
            return EXIT_CONFIG;
        }
    }

    for line in &outcome.summary {
        println!("{line}");
    }
    if outcome.failed {
        EXIT_ACCEPTANCE
    } else {
        0
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    ExitCode::from(run(std::env::args_os().collect()))
}
