//! `cbd`: command-line front end for contextuality analysis.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cbd_core::io::{parse_system, render_text, report_to_json, system_to_json};
use cbd_core::lp::vertex::{enumerate_min, DEFAULT_BASIS_LIMIT};
use cbd_core::rational::{format_decimal, format_exact};
use cbd_core::{
    analyze, build_coupling_lp, c2_criterion, detect_cyclic, isolated_delta, liar_mixture,
    ContentId, Error, Rational, DEFAULT_ATOM_CAP,
};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

const NONCONTEXTUAL: u8 = 0;
const FAILURE: u8 = 1;
const USAGE: u8 = 2;
const CONTEXTUAL: u8 = 3;

const ATOM_CAP_VAR: &str = "CBD_ATOM_CAP";

#[derive(Parser)]
#[command(name = "cbd", version, about = "Contextuality-by-Default analysis of content-context systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: isolated deltas, system delta, CNT and verdict.
    Analyze {
        /// System file, or `-` for standard input.
        file: PathBuf,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Include an optimal coupling.
        #[arg(long)]
        witness: bool,
        /// Maximum number of coupling atoms (overrides CBD_ATOM_CAP).
        #[arg(long, value_name = "N")]
        atom_cap: Option<u128>,
    },
    /// Isolated deltas for the pairs of one connection.
    Delta {
        file: PathBuf,
        #[arg(long, value_name = "q")]
        content: String,
    },
    /// Cyclic structure and, for rank 2, the closed-form criterion.
    Cyclic { file: PathBuf },
    /// Write the uniform-mixture Liar system with `n` statements.
    Liar {
        #[arg(value_parser = clap::value_parser!(u16).range(2..))]
        n: u16,
        /// Output file, or `-` for standard output.
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// System delta by exhaustive vertex enumeration (small systems only).
    Oracle { file: PathBuf },
}

fn show(r: &Rational) -> String {
    format!("{} ({})", format_exact(r), format_decimal(r, 6))
}

fn atom_cap(flag: Option<u128>) -> Result<u128, String> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(ATOM_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{ATOM_CAP_VAR} must be a nonnegative integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_ATOM_CAP),
    }
}

fn write_output(path: &Path, text: &str) -> Result<(), Error> {
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if path.as_os_str() == "-" {
        std::io::stdout().write_all(text.as_bytes()).map_err(io_err)
    } else {
        fs::write(path, text).map_err(io_err)
    }
}

fn verdict_code(contextual: bool) -> u8 {
    if contextual {
        CONTEXTUAL
    } else {
        NONCONTEXTUAL
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Analyze { file, json, witness, atom_cap: flag } => {
            let cap = match atom_cap(flag) {
                Ok(cap) => cap,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return Ok(USAGE);
                }
            };
            let sys = parse_system(&file)?;
            let report = analyze(&sys, cap)?;
            if json {
                println!("{}", report_to_json(&report, witness));
            } else {
                print!("{}", render_text(&report, witness));
            }
            Ok(verdict_code(report.contextual))
        }
        Command::Delta { file, content } => {
            let sys = parse_system(&file)?;
            let q = ContentId::new(content);
            let conn = cbd_core::connections(&sys)
                .into_iter()
                .find(|c| c.content == q)
                .ok_or_else(|| Error::UnknownContent {
                    context: "<any>".into(),
                    content: q.to_string(),
                })?;
            println!("connection {}", conn.content);
            if conn.is_singleton() {
                println!("  measured in a single context; no pairs");
            }
            for (i, j) in conn.pairs() {
                let (ci, mi) = &conn.members[i];
                let (cj, mj) = &conn.members[j];
                println!("  delta({ci}, {cj}) = {}", show(&isolated_delta(mi, mj)?));
            }
            Ok(NONCONTEXTUAL)
        }
        Command::Cyclic { file } => {
            let sys = parse_system(&file)?;
            let Some(ring) = detect_cyclic(&sys) else {
                println!("not cyclic");
                return Ok(NONCONTEXTUAL);
            };
            println!("cyclic system of rank {}", ring.rank);
            for link in &ring.cycle {
                println!("  {}: ({}, {})", link.context, link.first, link.second);
            }
            if ring.rank != 2 {
                println!("no closed-form criterion for this rank; use `analyze`");
                return Ok(NONCONTEXTUAL);
            }
            let c = c2_criterion(&sys)?;
            println!("correlation difference: {}", show(&c.lhs));
            println!("marginal differences:   {}", show(&c.rhs));
            println!("margin:                 {}", show(&c.margin));
            println!("verdict: {}", if c.contextual { "contextual" } else { "noncontextual" });
            Ok(verdict_code(c.contextual))
        }
        Command::Liar { n, output } => {
            let mut text = system_to_json(&liar_mixture(n.into()));
            text.push('\n');
            write_output(&output, &text)?;
            Ok(NONCONTEXTUAL)
        }
        Command::Oracle { file } => {
            let sys = parse_system(&file)?;
            let cap = match atom_cap(None) {
                Ok(cap) => cap,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return Ok(USAGE);
                }
            };
            let lp = build_coupling_lp(&sys, cap)?;
            let best = enumerate_min(&lp, DEFAULT_BASIS_LIMIT)?
                .expect("coupling polytope of a valid system is nonempty");
            println!("atoms: {}", lp.atom_count());
            println!("constraint rank: {}", best.rank);
            println!("feasible bases: {}", best.vertices);
            println!("system delta:           {}", show(&best.optimum));
            Ok(NONCONTEXTUAL)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(FAILURE)
        }
    }
}
