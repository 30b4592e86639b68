use clap::Parser;

fn main() {
    let cli = a2lattice::cli::Cli::parse();
    std::process::exit(a2lattice::cli::main_with(cli));
}
