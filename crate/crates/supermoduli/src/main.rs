use std::io::{IsTerminal, Read, Write};
use std::process::ExitCode;

use clap::builder::FalseyValueParser;
use clap::{Parser, Subcommand, ValueEnum};

use supermoduli::cli::{
    default_nr, eval_expr, load_susy, parse_checks, parse_nr, render, run_suite, Format, SuiteOptions,
};

#[derive(Parser, Debug)]
#[command(name = "supermoduli", version, about = "Exact checks for genus-zero supermoduli with Ramond punctures")]
struct Args {
    #[command(subcommand)]
    command: Option<Cmd>,

    /// Puncture count(s): `6`, `4..12` or `4,6,8`.
    #[arg(long)]
    nr: Option<String>,

    /// Comma-separated check ids.
    #[arg(long)]
    check: Option<String>,

    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Čech window radius override.
    #[arg(long)]
    window: Option<i64>,

    /// Adds n = 12 to the default set.
    #[arg(long)]
    extended: bool,

    /// SUSY form fixture used by the stabilizer and superconformal checks.
    #[arg(long)]
    susy: Option<String>,

    /// Records wall time per check (reports are then not reproducible).
    #[arg(long)]
    timings: bool,

    #[arg(long, env = "SUPERMODULI_NO_COLOR", value_parser = FalseyValueParser::new())]
    no_color: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parses fixture text (file or stdin) and prints it in canonical form.
    Eval { path: Option<String> },
    /// Lists check ids.
    Checks,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Table,
    JsonLines,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(args: Args) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match &args.command {
        Some(Cmd::Eval { path }) => {
            let text = match path {
                Some(p) => std::fs::read_to_string(p)?,
                None => {
                    let mut s = String::new();
                    std::io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            emit(&format!("{}\n", eval_expr(&text)?))?;
            return Ok(ExitCode::SUCCESS);
        }
        Some(Cmd::Checks) => {
            let list: String = supermoduli::cli::CHECKS.iter().map(|c| format!("{c}\n")).collect();
            emit(&list)?;
            return Ok(ExitCode::SUCCESS);
        }
        None => {}
    }
    let nr = match &args.nr {
        Some(s) => parse_nr(s)?,
        None => default_nr(args.extended),
    };
    let checks = match &args.check {
        Some(s) => parse_checks(s)?,
        None => Vec::new(),
    };
    let susy = match &args.susy {
        Some(path) => {
            if nr.len() != 1 {
                return Err("--susy needs a single --nr value".into());
            }
            Some(load_susy(path, nr[0])?)
        }
        None => None,
    };
    let opts = SuiteOptions { nr, checks, window: args.window, susy, timings: args.timings };
    let doc = run_suite(&opts)?;
    let format = match args.format {
        FormatArg::Table => Format::Table,
        FormatArg::JsonLines => Format::JsonLines,
    };
    let color = !args.no_color && std::io::stdout().is_terminal();
    emit(&render(&doc, format, color))?;
    Ok(if doc.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> std::io::Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r,
    }
}
