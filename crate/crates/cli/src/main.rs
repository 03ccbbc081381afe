use std::process::ExitCode;

use clap::Parser;
use polarlog_cli::matrix_io::MatrixFile;
use polarlog_cli::{run, Cli, Command};

fn print_matrix(name: &str, value: Option<&serde_json::Value>) {
    let Some(m) = value.and_then(|v| serde_json::from_value::<MatrixFile>(v.clone()).ok()) else {
        return;
    };
    println!("{name} ({}x{}):", m.rows, m.cols);
    for row in m.data.chunks(m.cols) {
        let cells: Vec<String> = row
            .iter()
            .map(|[re, im]| format!("{re:>12.6} {im:+.6}i"))
            .collect();
        println!("  {}", cells.join("  "));
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Command::Polar(_) = cli.command {
        print_matrix("U_p", report.artifacts.get("unitary"));
        print_matrix("H", report.artifacts.get("hermitian"));
    }
    print!("{}", report.table());
    let out = match &cli.command {
        Command::Polar(a) => &a.common.out,
        Command::Logmin(a) => &a.common.out,
        Command::Cohen(a) => &a.common.out,
        Command::Kyfan(a) => &a.common.out,
    };
    if let Some(path) = out {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(if report.pass { 0 } else { 1 })
}
