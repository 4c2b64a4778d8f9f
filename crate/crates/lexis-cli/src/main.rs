use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = lexis_cli::Cli::parse();
    if let Err(e) = lexis_cli::run(cli) {
        eprintln!("lexis: {e}");
        std::process::exit(e.exit_code());
    }
}
