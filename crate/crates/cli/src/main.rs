use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gcover_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(report.render(cli.json).as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
