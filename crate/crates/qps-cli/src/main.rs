use clap::Parser;
use qps_cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let mut notes = Vec::new();
    let result = execute(&cli, &mut notes);
    for n in &notes {
        eprintln!("{n}");
    }
    let code = match result {
        Ok(outcome) => {
            println!("{}", outcome.document.display());
            for f in &outcome.files {
                println!("{}", f.display());
            }
            if !outcome.passed {
                eprintln!("error: one or more tolerance checks failed; see {}", outcome.document.display());
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
