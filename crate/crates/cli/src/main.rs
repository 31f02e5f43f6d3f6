//! `noisy-amp`: writes the dataset behind each figure as CSV or JSON.

mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Arg, ArgAction, ArgMatches, Command};

use commands::{CommandSpec, RunError, COMMANDS};
use config::{config_error, read_config, ConfigError, Params, COMMON_KEYS};
use output::{write_csv, write_json, Format, Header};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn cli() -> Command {
    let mut app = Command::new("noisy-amp")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Phase-insensitive amplifier followed by heralded photonic operations: figure datasets")
        .after_help(
            "Parameters resolve as built-in defaults < --config file < flags.\n\
             NOISY_AMP_THREADS caps the worker threads (default: all cores).\n\
             SOURCE_DATE_EPOCH, when set, is written as the generated_at time.",
        )
        .subcommand_required(true)
        .arg_required_else_help(true);
    for spec in COMMANDS {
        app = app.subcommand(subcommand(spec));
    }
    app
}

fn subcommand(spec: &CommandSpec) -> Command {
    let mut cmd = Command::new(spec.name)
        .about(spec.about)
        .arg(
            Arg::new("output")
                .short('o')
                .long("output")
                .value_name("PATH")
                .required(true)
                .help("output file ('-' for standard output)"),
        )
        .arg(
            Arg::new("format")
                .long("format")
                .value_parser(["csv", "json"])
                .help("output format [default: json for *.json paths, else csv]"),
        )
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("key = value file; '#' starts a comment"),
        )
        .arg(
            Arg::new("timing")
                .long("timing")
                .action(ArgAction::SetTrue)
                .help("add per-row wall time (output is then not reproducible)"),
        );
    for k in spec.keys.iter().chain(&COMMON_KEYS) {
        cmd = cmd.arg(
            Arg::new(k.name)
                .long(&*Box::leak(k.name.replace('_', "-").into_boxed_str()))
                .value_name("VALUE")
                .allow_hyphen_values(true)
                .help(format!("{} [default: {}]", k.help, k.default)),
        );
    }
    cmd
}

fn flag_values(spec: &CommandSpec, m: &ArgMatches) -> Vec<(String, String)> {
    spec.keys
        .iter()
        .chain(&COMMON_KEYS)
        .filter_map(|k| m.get_one::<String>(k.name).map(|v| (k.name.to_string(), v.clone())))
        .collect()
}

fn configure_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var("NOISY_AMP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| config_error(format!("NOISY_AMP_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| config_error(format!("cannot configure {n} threads: {e}")))
}

fn generated_at() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()))
}

fn pick_format(explicit: Option<&String>, path: &Path) -> Format {
    match explicit.map(String::as_str) {
        Some("json") => Format::Json,
        Some(_) => Format::Csv,
        None if path.extension().is_some_and(|e| e == "json") => Format::Json,
        None => Format::Csv,
    }
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let spec = commands::find(name).expect("registered subcommand");

    let resolved = configure_threads().and_then(|_| {
        let file = match sub.get_one::<String>("config") {
            Some(path) => read_config(Path::new(path))?,
            None => Vec::new(),
        };
        Params::resolve(spec.keys.iter().chain(&COMMON_KEYS), &file, &flag_values(spec, sub))
    });
    let params = match resolved {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let table = match commands::run(spec, &params) {
        Ok(t) => t,
        Err(RunError::Config(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(RunError::Numeric(e)) => {
            eprintln!("numeric failure: {e}");
            return ExitCode::from(EXIT_NUMERIC);
        }
    };

    let path = PathBuf::from(sub.get_one::<String>("output").expect("required"));
    let format = pick_format(sub.get_one::<String>("format"), &path);
    let timing = sub.get_flag("timing");
    let header = Header {
        command: spec.name,
        params: &params,
        generated_at: generated_at(),
    };
    let written = if path.as_os_str() == "-" {
        emit(io::stdout().lock(), format, &header, &table, timing)
    } else {
        File::create(&path).and_then(|f| emit(BufWriter::new(f), format, &header, &table, timing))
    };
    if let Err(e) = written {
        eprintln!("error: cannot write {}: {e}", path.display());
        return ExitCode::from(EXIT_CONFIG);
    }

    let failed = table.failed_rows();
    if failed > 0 {
        eprintln!("{failed} of {} rows failed:", table.rows.len());
        for row in table.rows.iter().filter_map(|r| r.error.as_deref()).take(5) {
            eprintln!("  {row}");
        }
        return ExitCode::from(EXIT_NUMERIC);
    }
    eprintln!("wrote {} rows to {}", table.rows.len(), path.display());
    ExitCode::SUCCESS
}

fn emit<W: Write>(
    mut out: W,
    format: Format,
    header: &Header,
    table: &noisy_amp::experiments::Table,
    timing: bool,
) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(&mut out, header, table, timing)?,
        Format::Json => write_json(&mut out, table, timing)?,
    }
    out.flush()
}
