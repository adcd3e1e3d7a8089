use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use wuclass_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(result) => {
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            if cli.json {
                println!("{}", result.to_json());
            } else {
                println!("{}", result.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.exit_code();
            if cli.json {
                let body = json!({ "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": code } });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&body).expect("error serializes")
                );
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code as u8)
        }
    }
}
