use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ogpd_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = run(&cli);
    if let (Some(path), Some(dot)) = (&cli.dot, &out.dot) {
        if let Err(e) = std::fs::write(path, dot) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let mut text = String::new();
    if cli.json {
        text.push_str(&out.report.verdict_json());
        text.push('\n');
    } else {
        if let Some(file) = &out.file_text {
            text.push_str(file);
            text.push('\n');
        }
        text.push_str(&out.report.render());
    }
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(out.report.exit_code())
}
