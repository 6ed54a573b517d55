use clap::Parser;
use turan::cli::{self, Cli};

fn main() {
    std::process::exit(cli::run(Cli::parse()));
}
