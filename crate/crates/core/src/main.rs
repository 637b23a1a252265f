use bureau::cli::{run, Cli, Format};
use clap::Parser;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let out = match run(&cli, &argv) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = serde_json::to_string_pretty(&out.report).expect("reports serialize");
    let shown = match cli.format {
        Format::Text => out.text.clone(),
        Format::Machine => format!("{report}\n"),
    };
    // a closed pipe (`| head`) is not an error
    let _ = std::io::stdout().write_all(shown.as_bytes());
    if let Some(dir) = &cli.out {
        let write = |name: &str, body: &str| std::fs::create_dir_all(dir).and_then(|_| std::fs::write(dir.join(name), body));
        for (name, body) in out.files.iter().map(|(n, b)| (n.as_str(), b.as_str())).chain([("report.json", report.as_str())]) {
            if let Err(e) = write(name, body) {
                eprintln!("error: {}: {e}", dir.join(name).display());
                return ExitCode::from(2);
            }
        }
    }
    // timing stays out of the report so that it is reproducible
    if cli.format == Format::Text {
        eprintln!("done in {:.2?}", start.elapsed());
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
