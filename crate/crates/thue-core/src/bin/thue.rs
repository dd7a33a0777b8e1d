use clap::Parser;

fn main() {
    let cli = thue_core::cli::Cli::parse();
    std::process::exit(thue_core::cli::run(cli));
}
