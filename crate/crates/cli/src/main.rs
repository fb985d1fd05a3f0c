use std::process::exit;

use fftbench::{main_flow, parse_args, CliError, USAGE};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match parse_args(&args) {
        Ok(settings) => exit(main_flow(&settings)),
        Err(CliError::HelpRequested) => {
            print!("{USAGE}");
            exit(0);
        }
        Err(err) => {
            eprintln!("error: {err}");
            eprintln!("run 'fftbench --help' for usage");
            exit(2);
        }
    }
}
