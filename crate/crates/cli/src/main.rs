use std::io::Write;

use clap::Parser;
use stieltjes_cli::commands::{run, Cli, Format};
use stieltjes_cli::ExitCode;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::Usage } else { ExitCode::Ok };
            let _ = e.print();
            std::process::exit(code as i32);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not an error of the command.
            let _ = match cli.output {
                Format::Json => writeln!(stdout, "{}", out.json),
                Format::Text => write!(stdout, "{}", out.text),
            };
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code() as i32);
        }
    }
}
