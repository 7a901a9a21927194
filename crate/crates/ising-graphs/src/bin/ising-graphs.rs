use clap::Parser;
use ising_graphs::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(manifest) => {
            println!(
                "{}: wrote {} file(s)",
                manifest.command,
                manifest.outputs.len() + 1
            );
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
