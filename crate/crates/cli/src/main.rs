use clap::Parser;

use ael_cli::commands::{execute, Cli};
use ael_cli::exit;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { exit::CONFIG_OR_IO } else { exit::PASS });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            std::process::exit(exit::CONFIG_OR_IO);
        }
    }
    let code = match execute(cli.command) {
        Ok(true) => exit::PASS,
        Ok(false) => exit::ASSERTION_FAILED,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit::CONFIG_OR_IO
        }
    };
    std::process::exit(code);
}
