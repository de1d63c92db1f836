use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use sagnac_cli::args::Cli;
use sagnac_cli::dispatch;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let diag = serde_json::json!({
                "error": "usage",
                "kind": format!("{:?}", e.kind()),
                "message": msg.trim_end(),
            });
            eprintln!("{diag}");
            return ExitCode::from(2);
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code())
        }
    }
}
