use clap::Parser;

fn main() {
    std::process::exit(mahler_census::cli::run(mahler_census::cli::Cli::parse()));
}
