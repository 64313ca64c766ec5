use std::io::Write;
use std::process::ExitCode;

use rks::cli::{execute, parse_args, RunError};
use rks::experiments::threads_from_env;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let config = match parse_args(&argv) {
        Ok(c) => c,
        Err(e) => {
            // help and version exit 0, usage errors 2
            e.exit();
        }
    };
    let table = match execute(&config, &argv[1..], threads_from_env()) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if config.is_randomized() && config.explicit_seed().is_none() {
        if let Some(seed) = table.meta_value("seed") {
            eprintln!("seed: {seed}");
        }
    }
    let written = match &config.out {
        Some(path) => std::fs::File::create(path)
            .and_then(|f| {
                let mut w = std::io::BufWriter::new(f);
                table.write_to(&mut w)?;
                w.flush()
            })
            .map_err(|source| RunError::Io {
                path: path.clone(),
                source,
            }),
        None => table
            .write_to(std::io::stdout().lock())
            .map_err(|source| RunError::Io {
                path: "<stdout>".into(),
                source,
            }),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
