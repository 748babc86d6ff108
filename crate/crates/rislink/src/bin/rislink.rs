use clap::Parser;
use rislink::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    std::process::exit(execute(cli));
}
