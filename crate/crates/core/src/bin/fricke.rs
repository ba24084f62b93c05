use clap::Parser;
use fricke::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let code = match run(&cli, &mut stdout.lock()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("fricke: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
