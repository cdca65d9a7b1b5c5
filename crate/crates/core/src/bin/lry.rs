use clap::Parser;
use lry::cli::{run_command, Cli};

fn main() {
    let cli = Cli::parse();
    let code = run_command(&cli, &mut std::io::stdin().lock(), &mut std::io::stdout().lock(), &mut std::io::stderr());
    std::process::exit(code);
}
