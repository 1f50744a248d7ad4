mod run;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use run::{Failure, Job};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Task {
    /// Cohomology of a pair, or of every level of a tower.
    Cohomology,
    /// Star-cover Čech cohomology against simplicial cohomology.
    Leray,
    /// Long exact sequence of a pair, or its tower version.
    Les,
    /// The (r, s) table, colimit classifications and inferred limit.
    TowerReport,
    /// Finite-level checks of Čech = simplicial along a tower.
    TheoremCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

/// Cohomology of finite simplicial pairs and towers of covers over Z/p^s.
///
/// Exit status: 0 success, 1 unreadable input or arguments, 2 invalid
/// complex, tower or generator, 3 a check failed, 4 internal error.
#[derive(Parser, Debug)]
#[command(name = "towercoh", version)]
struct Args {
    /// Input document (`towercoh/1` JSON); `-` or absent reads stdin.
    input: Option<PathBuf>,
    /// Use a built-in generator instead of an input document, e.g. `cycle3`,
    /// `solenoid`, `trivial-circle`, `voltage`.
    #[arg(long, conflicts_with = "input")]
    generate: Option<String>,
    #[arg(long, value_enum, default_value = "cohomology")]
    task: Task,
    #[arg(long, default_value_t = 2, value_parser = parse_prime)]
    p: u64,
    /// Coefficients Z/p^s for single-modulus tasks.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    s: u32,
    /// Largest s for tower tasks.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    s_max: u32,
    /// Highest degree; each task has its own default.
    #[arg(long)]
    n_max: Option<usize>,
    /// Tower height for generators.
    #[arg(long, default_value_t = 3)]
    r_max: usize,
    /// Degree for `tower-report`.
    #[arg(long, default_value_t = 1)]
    degree: usize,
    /// For `theorem-check`: also compare against absolute cohomology with
    /// every Z_r empty.
    #[arg(long)]
    absolute: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if towercoh::residue::is_prime(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not prime"))
    }
}

fn read_input(args: &Args) -> Result<String, Failure> {
    let mut text = String::new();
    match &args.input {
        Some(path) if path.as_os_str() != "-" => {
            text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Parse(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let source = match &args.generate {
        Some(name) => Ok(run::Source::Generator(name.clone())),
        None => read_input(&args).map(run::Source::Document),
    };
    let job = Job {
        task: args.task,
        p: args.p,
        s: args.s,
        s_max: args.s_max,
        n_max: args.n_max,
        r_max: args.r_max,
        degree: args.degree,
        absolute: args.absolute,
    };
    match source.and_then(|src| run::run(&job, src)) {
        Ok(report) => {
            print!("{}", report.render(args.format));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("check failed: {}", report.failure.as_deref().unwrap_or("see report"));
                ExitCode::from(3)
            }
        }
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
