use clap::error::ErrorKind;
use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match extremogram_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version are not failures; anything else is usage (1)
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(extremogram_cli::run(cli));
}
