use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gaudinqq_cli::{run, Command, Mode, Settings};

#[derive(Parser)]
#[command(name = "gaudinqq", version, about = "Solve and verify twisted Gaudin qq-systems")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Arithmetic mode; overrides the input file.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Tolerance for float-mode checks.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Offset into the multistart sequence.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Largest Weyl group to enumerate.
    #[arg(long, global = true, default_value_t = gaudinqq::cartan::DEFAULT_WEYL_CAP)]
    weyl_cap: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find Bethe roots and qq-solutions for a scenario.
    Solve { scenario: PathBuf },
    /// Check residuals and nondegeneracy of a solutions file.
    Verify { solutions: PathBuf },
    /// Generate the full qq-system by Bäcklund steps.
    Orbit { solutions: PathBuf },
    /// Build the G-Wronskian and check its minors.
    Wronskian { solutions: PathBuf },
    /// Run every stage on a scenario.
    Report { scenario: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
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
    let (command, input) = match cli.command {
        Cmd::Solve { scenario } => (Command::Solve, scenario),
        Cmd::Verify { solutions } => (Command::Verify, solutions),
        Cmd::Orbit { solutions } => (Command::Orbit, solutions),
        Cmd::Wronskian { solutions } => (Command::Wronskian, solutions),
        Cmd::Report { scenario } => (Command::Report, scenario),
    };
    let settings = Settings {
        mode: cli.mode.map(|m| match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }),
        tol: cli.tol,
        seed: cli.seed,
        weyl_cap: cli.weyl_cap,
    };
    let text = match std::fs::read_to_string(&input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", input.display());
            return ExitCode::from(2);
        }
    };
    let outcome = match run(command, &text, &settings) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{}: {e}", input.display());
            return ExitCode::from(e.exit_code());
        }
    };
    for line in &outcome.summary {
        eprintln!("{line}");
    }
    let json = outcome.to_json_string();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{json}"),
    }
    ExitCode::from(if outcome.passed { 0 } else { 1 })
}
