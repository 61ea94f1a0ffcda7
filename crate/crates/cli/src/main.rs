use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use kmloop_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli).and_then(|out| Ok((out.report.render(cli.format)?, out))) {
        Ok((text, out)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            for line in &out.diagnostics {
                eprintln!("{line}");
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
