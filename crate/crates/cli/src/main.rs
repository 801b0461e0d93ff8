use clap::Parser;
use std::process::ExitCode;
use theta_verify::config::{Cli, RunConfig};
use theta_verify::report::Status;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let report = match theta_verify::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    for s in &report.suites {
        let count = |st: Status| s.checks.iter().filter(|c| c.status == st).count();
        println!(
            "{:<18} pass {:>3}  fail {:>3}  skipped {:>3}  ({} ms)",
            s.suite,
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Skipped),
            s.runtime_ms
        );
        for c in s.checks.iter().filter(|c| c.status != Status::Pass) {
            println!(
                "  {:?} {}: expected {} got {}",
                c.status, c.name, c.expected, c.actual
            );
        }
    }
    let m = &report.summary;
    println!(
        "total: {} checks, {} pass, {} fail, {} skipped",
        m.checks, m.pass, m.fail, m.skipped
    );
    if let Some(path) = &cfg.report_path {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
