use clap::Parser;

fn main() {
    let cli = bethe_cli::Cli::parse();
    match bethe_cli::execute(cli) {
        Ok((output, code)) => {
            println!("{output}");
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
