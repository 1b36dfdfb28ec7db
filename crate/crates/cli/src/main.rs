use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use qdouble_cli::{run, Cli, RunConfig, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    if cli.common.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.common.jobs)
            .build_global()
            .expect("thread pool is configured once");
    }
    let config = RunConfig::from(&cli);
    let start = Instant::now();
    match run(&config) {
        Ok(doc) => {
            print!("{}", doc.render(config.format));
            eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
            ExitCode::from(doc.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
