mod args;
mod suites;

use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use perminv_core::report::{Envelope, SCHEMA_VERSION};
use perminv_core::Error;
use serde::Serialize;
use serde_json::json;

use args::{Cli, Command, Format};
use suites::{CliError, SuiteOutput};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Serialize)]
struct RunConfig<'a> {
    suite: String,
    seed: u64,
    format: Format,
    out: Option<String>,
    threads: Option<usize>,
    #[serde(flatten)]
    command: &'a Command,
}

#[derive(Serialize)]
struct Payload<'a> {
    config: &'a RunConfig<'a>,
    result: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli))
}

fn failure_record(kind: &str, message: &str) {
    let record = json!({"schema": SCHEMA_VERSION, "error": {"kind": kind, "message": message}});
    eprintln!("{record}");
}

fn run(cli: Cli) -> u8 {
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    let config = RunConfig {
        suite: cli.command.name(),
        seed: cli.seed,
        format,
        out: cli.out.as_ref().map(|p| p.display().to_string()),
        threads: cli.threads,
        command: &cli.command,
    };
    match serde_json::to_string(&config) {
        Ok(c) => eprintln!("config: {c}"),
        Err(e) => {
            failure_record("internal", &e.to_string());
            return EXIT_FAIL;
        }
    }

    if let Some(t) = cli.threads {
        if t == 0 {
            failure_record("usage", "--threads must be positive");
            return EXIT_USAGE;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            failure_record("internal", &e.to_string());
            return EXIT_FAIL;
        }
    }

    let output = match suites::run(&cli.command, cli.seed) {
        Ok(o) => o,
        Err(CliError::Usage(msg)) => {
            failure_record("usage", &msg);
            return EXIT_USAGE;
        }
        Err(CliError::Core(e)) => {
            let (kind, code) = classify(&e);
            failure_record(kind, &e.to_string());
            return code;
        }
    };

    let rendered = match render(&config, &output, format) {
        Ok(r) => r,
        Err(CliError::Usage(msg)) => {
            failure_record("usage", &msg);
            return EXIT_USAGE;
        }
        Err(CliError::Core(e)) => {
            failure_record("internal", &e.to_string());
            return EXIT_FAIL;
        }
    };
    let written = match &cli.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(rendered.as_bytes())),
        None => io::stdout().lock().write_all(rendered.as_bytes()),
    };
    if let Err(e) = written {
        failure_record("io", &e.to_string());
        return EXIT_FAIL;
    }
    if output.pass {
        EXIT_PASS
    } else {
        eprintln!("verification failed: {}", config.suite);
        EXIT_FAIL
    }
}

/// Bad inputs are usage errors; anything raised while running a valid request is a failure.
fn classify(e: &Error) -> (&'static str, u8) {
    match e {
        Error::InvalidPartition(_)
        | Error::BoxOutsideDiagram { .. }
        | Error::InvalidBar { .. }
        | Error::SizeMismatch { .. }
        | Error::Capacity { .. }
        | Error::InvalidAssignment { .. }
        | Error::InvalidPermutation(_)
        | Error::Budget { .. }
        | Error::Parameter(_)
        | Error::Parse(_) => ("usage", EXIT_USAGE),
        Error::InvalidProgram { .. } => ("invalid-program", EXIT_FAIL),
        Error::ZeroPostselection { .. } => ("zero-postselection", EXIT_FAIL),
        Error::WalkExceeded { .. } => ("walk-exceeded", EXIT_FAIL),
        _ => ("internal", EXIT_FAIL),
    }
}

fn render(config: &RunConfig<'_>, output: &SuiteOutput, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let payload = Payload {
                config,
                result: output.report.clone(),
            };
            let mut s = Envelope::new(config.suite.clone(), output.pass, payload).to_json()?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let table = output
                .table
                .as_ref()
                .ok_or_else(|| CliError::Usage(format!("csv output is not available for {}", config.suite)))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| CliError::Core(Error::Csv(e));
            w.write_record(&table.headers).map_err(csv_err)?;
            for row in &table.rows {
                w.write_record(row).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Core(Error::Io(e.into_error())))?;
            Ok(String::from_utf8_lossy(&bytes).into_owned())
        }
        Format::Text => {
            let mut s = format!("# {} seed={} pass={}\n", config.suite, config.seed, output.pass);
            s.push_str(&output.text);
            Ok(s)
        }
    }
}
