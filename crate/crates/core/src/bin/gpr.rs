use clap::Parser;
use gabor_phase::cli::{run, Cli, EXIT_ERROR};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    std::process::exit(run(cli));
}
