use std::path::PathBuf;
use std::process::ExitCode;

use spinladder::io::{parse_config, run_experiment, Experiment};
use spinladder::Error;

const USAGE: &str = "\
usage: spinladder <experiment> [--config FILE] [--key value ...] --out DIR

experiments: reference, field-sweep, heatmap, disorder, scaling, freq-table, effective-check

Keys given as flags override the config file. Exit codes: 0 ok,
2 configuration error, 3 numeric failure, 4 io error.";

struct Args {
    experiment: Experiment,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    overrides: Vec<(String, String)>,
}

fn usage_error(msg: impl Into<String>) -> Error {
    Error::Config {
        key: "<command line>".into(),
        location: "arguments".into(),
        message: msg.into(),
    }
}

fn parse_args(mut argv: impl Iterator<Item = String>) -> Result<Args, Error> {
    let name = argv.next().ok_or_else(|| usage_error("missing experiment"))?;
    let experiment: Experiment = name.parse().map_err(|e: Error| usage_error(e.to_string()))?;
    let mut args = Args {
        experiment,
        config: None,
        out: None,
        overrides: Vec::new(),
    };
    while let Some(flag) = argv.next() {
        let key = flag
            .strip_prefix("--")
            .ok_or_else(|| usage_error(format!("expected a --flag, got `{flag}`")))?;
        let value = argv
            .next()
            .ok_or_else(|| usage_error(format!("flag --{key} needs a value")))?;
        match key {
            "config" => args.config = Some(PathBuf::from(value)),
            "out" => args.out = Some(PathBuf::from(value)),
            _ => args.overrides.push((key.to_string(), value)),
        }
    }
    Ok(args)
}

fn run() -> Result<Vec<PathBuf>, Error> {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.is_empty() || argv[0] == "--help" || argv[0] == "-h" {
        println!("{USAGE}");
        return Ok(Vec::new());
    }
    let args = parse_args(argv.into_iter())?;
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?,
        None => String::new(),
    };
    let mut config = parse_config(args.experiment, &text, &args.overrides)?;
    if let Some(out) = args.out {
        config.out = Some(out);
    }
    let out = config
        .out
        .clone()
        .ok_or_else(|| usage_error("an output directory is required (--out DIR)"))?;
    run_experiment(&config, &out)
}

fn main() -> ExitCode {
    match run() {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("spinladder: {e}");
            if matches!(e, Error::Config { .. }) {
                eprintln!("\n{USAGE}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
