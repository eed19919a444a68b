use std::process::ExitCode;

use clap::Parser;
use rsmoment_cli::{run_suite, split_args, ExperimentConfig, Format, RunError, SUITES};

/// Run a verification suite and write its report.
///
/// Suite parameters are passed as `--key value` after the suite name; run
/// `verify list` to see every suite with its parameters and defaults.
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Cli {
    /// Suite name, or `list`.
    suite: String,
    /// Report path; standard output when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn list() {
    for s in SUITES {
        println!("{}: {}", s.name, s.about);
        for p in s.params {
            println!("    --{} <{}> (default {}): {}", p.key, if p.integer { "int" } else { "real" }, p.default, p.help);
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let (globals, overrides) = match split_args(&args[1..]) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(std::iter::once(args[0].clone()).chain(globals)) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.suite == "list" {
        list();
        return ExitCode::SUCCESS;
    }
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let config = ExperimentConfig {
        suite: cli.suite,
        overrides,
        seed: cli.seed,
        out: cli.out,
        format: cli.format,
    };
    let result = run_suite(&config).and_then(|(outcome, bytes)| {
        match &config.out {
            Some(path) => std::fs::write(path, &bytes)?,
            None => {
                use std::io::Write;
                std::io::stdout().write_all(&bytes)?;
            }
        }
        Ok::<_, RunError>(outcome)
    });
    match result {
        Ok(o) if o.pass => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("contract failure in suite '{}'", config.suite);
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
