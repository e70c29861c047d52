//! `tvl`: compile, lint and inspect tactile chart specs.
//!
//! Exit status is 0 on success (warnings allowed), 1 when the spec has
//! errors and 2 on I/O, parse or usage failures.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use tvl_core::braille::{Grade, TranslationTable};
use tvl_core::compile::{CompileOptions, CompileOutput, Compiler, Stage};
use tvl_core::spec::RenderMode;
use tvl_core::{Diagnostic, Severity};

#[derive(Parser)]
#[command(name = "tvl", version, about = "Compile tactile chart specs to embossable SVG")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a spec to SVG; diagnostics go to stderr.
    Compile {
        input: PathBuf,
        /// Output file, `-` for stdout. Defaults to the input with an .svg extension.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Report diagnostics without writing SVG.
    Lint {
        input: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Print the defaults table as JSON.
    DumpDefaults,
    /// Write the texture and line-style sampler sheet.
    Palette {
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 96.0)]
        dpi: f64,
    },
}

#[derive(Args)]
struct Flags {
    /// Braille grade, overriding the spec.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    grade: Option<u8>,
    /// JSON translation table to load and use.
    #[arg(long, value_name = "PATH")]
    braille_table: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_parser = positive_dpi)]
    dpi: Option<f64>,
    /// Diagnostics format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Dots,
    Font,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn positive_dpi(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("{s:?} is not a positive number")),
    }
}

/// Failures that map to exit status 2.
struct Fatal(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.into())
    }
}

fn compiler_for(input: &Path, flags: &Flags) -> Result<(Compiler, CompileOptions)> {
    let base = input.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut compiler = Compiler::with_base_dir(base);
    let mut options = CompileOptions {
        grade: flags.grade.map(|g| if g == 1 { Grade::One } else { Grade::Two }),
        mode: flags.mode.map(|m| match m {
            Mode::Dots => RenderMode::Dots,
            Mode::Font => RenderMode::Font,
        }),
        dpi: flags.dpi,
        braille_table: None,
    };
    if let Some(path) = &flags.braille_table {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let table = TranslationTable::from_json(&text, &compiler.tables)
            .with_context(|| format!("loading braille table {}", path.display()))?;
        options.braille_table = Some(table.id.clone());
        compiler.tables.register(table);
    }
    Ok((compiler, options))
}

fn run_compile(input: &Path, flags: &Flags) -> Result<CompileOutput> {
    let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let (compiler, options) = compiler_for(input, flags)?;
    Ok(compiler.compile(&text, &options))
}

fn format_diagnostics(diags: &[Diagnostic], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(diags).expect("diagnostics serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for d in diags {
                s.push_str(&format!("{}[{}] {}: {}\n", d.severity, d.rule_id, d.node_path, d.message));
                if let Some(fix) = &d.fix {
                    s.push_str(&format!("  fix: {fix}\n"));
                }
                if !d.citation.is_empty() {
                    s.push_str(&format!("  see: {}\n", d.citation));
                }
            }
            s
        }
    }
}

fn status(out: &CompileOutput) -> ExitCode {
    match out.failed_at {
        Some(Stage::Input) => ExitCode::from(2),
        _ if out.diagnostics.iter().any(|d| d.severity == Severity::Error) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Fatal> {
    match cli.command {
        Command::Compile { input, output, flags } => {
            let out = run_compile(&input, &flags)?;
            eprint!("{}", format_diagnostics(&out.diagnostics, flags.format));
            if let Some(svg) = &out.svg {
                let path = output.unwrap_or_else(|| input.with_extension("svg"));
                write_output(Some(&path), svg)?;
            }
            Ok(status(&out))
        }
        Command::Lint { input, flags } => {
            let out = run_compile(&input, &flags)?;
            print!("{}", format_diagnostics(&out.diagnostics, flags.format));
            Ok(status(&out))
        }
        Command::DumpDefaults => {
            println!("{}", tvl_core::defaults::defaults_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Palette { output, dpi } => {
            positive_dpi(&dpi.to_string()).map_err(anyhow::Error::msg)?;
            write_output(output.as_deref(), &tvl_core::render::palette_svg(dpi))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Fatal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
