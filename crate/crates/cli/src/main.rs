use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use morsepoly::generate::ComplexParams;
use morsepoly_cli::{run, Command, Format, GenKind, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    /// 2-wide, parity rank and downward Eulerian checks
    Check,
    /// Critical/ordinary verdict per element
    Classify,
    /// The normalized function and what each stage changed
    Normalize,
    /// Combinatorial indices against their predicted values
    Index,
    /// Coordinates of the embedded order complex
    Embed,
    /// Full pipeline including the geometric cross-check
    Verify,
    /// Euler characteristics and critical counts by rank
    Euler,
    /// Seeded random complex (--kind complex) or Morse function (--kind morse)
    Gen,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Complex,
    Morse,
}

/// Discrete Morse functions on posets: validation, normalization and
/// Banchoff indices, computed exactly.
#[derive(Debug, Parser)]
#[command(name = "morsepoly", version, about)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Poset document or complex description (JSON)
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Function values by element (JSON); defaults to the rank function
    #[arg(long, value_name = "FILE")]
    morse: Option<PathBuf>,
    /// Write here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Fmt,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exit 1 when `check` finds a property failing
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value = "complex")]
    kind: Kind,
    #[arg(long, default_value_t = 4)]
    vertices: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
}

impl From<Args> for RunConfig {
    fn from(a: Args) -> Self {
        let command = match a.command {
            Cmd::Check => Command::Check,
            Cmd::Classify => Command::Classify,
            Cmd::Normalize => Command::Normalize,
            Cmd::Index => Command::Index,
            Cmd::Embed => Command::Embed,
            Cmd::Verify => Command::Verify,
            Cmd::Euler => Command::Euler,
            Cmd::Gen => Command::Gen,
        };
        RunConfig {
            command,
            input_path: a.input,
            morse_path: a.morse,
            output_path: a.out,
            format: match a.format {
                Fmt::Json => Format::Json,
                Fmt::Text => Format::Text,
                Fmt::Csv => Format::Csv,
            },
            seed: a.seed,
            strict: a.strict,
            gen_kind: match a.kind {
                Kind::Complex => GenKind::Complex,
                Kind::Morse => GenKind::Morse,
            },
            gen_params: ComplexParams {
                n_vertices: a.vertices,
                dimension: a.dim,
                density: a.density,
            },
        }
    }
}

fn main() -> ExitCode {
    let cfg = RunConfig::from(Args::parse());
    match run(&cfg) {
        Ok(outcome) => {
            let written = match &cfg.output_path {
                Some(p) => std::fs::write(p, &outcome.output).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{}", outcome.output);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
