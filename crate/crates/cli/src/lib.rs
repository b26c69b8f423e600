//! `mathieu` command-line front end over `mathieu-core`.
//!
//! Numbers are written as decimal strings at the working precision, so CSV
//! and JSON output survive round trips without loss. Rows always come out in
//! grid order, whatever order the worker threads finish in.

pub mod args;
pub mod coeffs;
pub mod eval;
pub mod report;
pub mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::Parser;
use mathieu_core::Error;
use serde::Serialize;

use args::{Cli, Command, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

pub fn write_rows<S: Serialize>(rows: &[S], format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(io::Error::other)?;
            }
            w.flush()
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence(_) | Error::Overflow(_) => EXIT_NONCONVERGENCE,
        _ => EXIT_USAGE,
    }
}

fn emit<S: Serialize>(rows: &[S], cli: &Cli, stdout: &mut dyn Write) -> io::Result<()> {
    match &cli.output {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            write_rows(rows, cli.format, &mut f)?;
            f.flush()
        }
        None => write_rows(rows, cli.format, stdout),
    }
}

/// Parses `argv` and runs the command; returns the process exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    if cli.digits < mathieu_core::MIN_DIGITS {
        let _ = writeln!(stderr, "error: --digits must be at least {}", mathieu_core::MIN_DIGITS);
        return EXIT_USAGE;
    }
    let ok = |r: io::Result<()>| r.map(|_| EXIT_OK);
    let result = match &cli.command {
        Command::Eval(a) => eval::eval_point(&a.series, &a.trunc, cli.digits).map(|r| {
            if cli.format == Format::Csv {
                ok(emit(&[r.summary], &cli, stdout))
            } else {
                ok(emit(&[r], &cli, stdout))
            }
        }),
        Command::Sweep(a) => eval::sweep(a, cli.digits).map(|rs| {
            if cli.format == Format::Csv {
                let flat: Vec<_> = rs.into_iter().map(|r| r.summary).collect();
                ok(emit(&flat, &cli, stdout))
            } else {
                ok(emit(&rs, &cli, stdout))
            }
        }),
        Command::Table1 => {
            if cli.digits < 50 {
                let _ = writeln!(stderr, "warning: Table 1 was computed at 50 digits; {} may not suffice", cli.digits);
            }
            eval::table1(cli.digits).map(|rows| ok(emit(&rows, &cli, stdout)))
        }
        Command::Coeffs(a) => coeffs::coeffs(a, cli.digits).map(|rows| ok(emit(&rows, &cli, stdout))),
        Command::Verify(a) => verify::verify(cli.digits, a.perturb).map(|rows| {
            for r in rows.iter().filter(|r| !r.pass) {
                let _ = writeln!(stderr, "FAILED {}: {} (measured {}, threshold {})", r.check, r.case, r.measured, r.threshold);
            }
            let all = rows.iter().all(|r| r.pass);
            emit(&rows, &cli, stdout).map(|_| if all { EXIT_OK } else { EXIT_VERIFY })
        }),
    };
    match result {
        Ok(Ok(code)) => code,
        Ok(Err(io)) => {
            let _ = writeln!(stderr, "error: {io}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
