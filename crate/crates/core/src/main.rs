use clap::Parser;

fn main() {
    let cli = caustics::cli::Cli::parse();
    std::process::exit(caustics::cli::run(cli));
}
