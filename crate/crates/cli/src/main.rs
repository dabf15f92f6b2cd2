//! `tq`: light-cone distances, hereditary sections and thread quivers from
//! the command line.
//!
//! Exit codes: 0 success, 1 a failed certificate or analysis, 2 usage or
//! input errors, 3 window-scale inconclusiveness under `--strict`.

mod commands;
mod load;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::commands::{Outcome, Report};

#[derive(Debug, Parser)]
#[command(name = "tq", version, about = "Hereditary sections and light-cone distances over quiver windows")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Global {
    /// Number of τ-translates kept on each side of the projectives.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub radius: u32,
    /// Depth to which thread arrows are expanded before building a window.
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    /// Emit versioned JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Treat window-scale inconclusive results as errors (exit 3).
    #[arg(long, global = true)]
    pub strict: bool,
    /// Include representation matrices where applicable.
    #[arg(long, global = true)]
    pub full: bool,
    /// Report errors as JSON on stderr.
    #[arg(long, global = true)]
    pub json_errors: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a thread quiver and summarise it.
    Parse { input: PathBuf },
    /// Build the window and list its objects and mesh arrows.
    Window { input: PathBuf },
    /// Light-cone distances between two window objects (`name` or `name@level`).
    Distance { input: PathBuf, from: String, to: String },
    /// Objects of a section r-in-between two picks.
    Interval {
        input: PathBuf,
        x: String,
        y: String,
        /// Section file; the projective slice by default.
        #[arg(long)]
        section: Option<PathBuf>,
    },
    /// Hereditary sections.
    #[command(subcommand)]
    Section(SectionCmd),
    /// Thread and nonthread objects, rays, anchors and marks.
    #[command(subcommand)]
    Threads(ThreadsCmd),
    /// Rewrites of thread quivers.
    #[command(subcommand)]
    Rewrite(RewriteCmd),
    /// DOT drawing of the thread quiver, or of the window with `--window`.
    Export {
        input: PathBuf,
        #[arg(long)]
        section: Option<PathBuf>,
        #[arg(long)]
        window: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum SectionCmd {
    /// Check nonnegative distances between picks and τ-convexity.
    Verify { input: PathBuf, section: PathBuf },
    /// Refine seeds and build the tilted section.
    Tilt {
        input: PathBuf,
        /// Comma-separated seed objects.
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<String>,
    },
    /// Heart and projectives of the split t-structure of a section.
    Heart { input: PathBuf, section: PathBuf },
    /// Condition (*) for a section, including its thread policies.
    Star { input: PathBuf, section: PathBuf },
    /// Extend by marks and comarks and tilt.
    Extend { input: PathBuf, section: PathBuf },
    /// Finite presentation of standard simples at window scale.
    Dualizing { input: PathBuf, section: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum ThreadsCmd {
    /// Classification of every pick, nonthread objects and rays.
    Report {
        input: PathBuf,
        /// Section file; the projective slice by default.
        section: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RewriteCmd {
    /// Contract chains of interior vertices to thread arrows.
    Contract { input: PathBuf },
    /// Replace a zig-zag tail by one thread arrow.
    Zigzag {
        input: PathBuf,
        #[arg(long)]
        base: String,
        /// Tail vertices in order, starting next to the base.
        #[arg(long, value_delimiter = ',', required = true)]
        tail: Vec<String>,
        #[arg(long)]
        fresh: Option<String>,
    },
    /// Replace thread arrows by finite windows of their completions.
    Expand {
        input: PathBuf,
        /// Thread to expand; all threads by default.
        #[arg(long)]
        thread: Option<String>,
    },
}

fn emit(global: &Global, report: &Report) -> anyhow::Result<()> {
    let text = if global.json {
        let mut v = report.json.clone();
        if let Some(obj) = v.as_object_mut() {
            obj.insert("schema".into(), json!(1));
        }
        serde_json::to_string_pretty(&v)? + "\n"
    } else {
        report.text.clone()
    };
    match &global.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let global = cli.global.clone();
    let result = commands::run(&cli).and_then(|report| {
        emit(&global, &report)?;
        Ok(report.outcome)
    });
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Ok(Outcome::Inconclusive) => ExitCode::from(if global.strict { 3 } else { 0 }),
        Err(e) => {
            let (kind, code) = commands::classify_error(&e, global.strict);
            if global.json_errors {
                eprintln!("{}", json!({ "schema": 1, "error": { "kind": kind, "message": format!("{e:#}") } }));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
