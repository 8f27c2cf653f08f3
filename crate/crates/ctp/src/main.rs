use clap::Parser;
use ctp::cli::{run, Cli, EXIT_ERROR};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(ctp::CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    };
    drop(out);
    std::process::exit(code);
}
