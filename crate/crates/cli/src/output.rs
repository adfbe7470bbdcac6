//! Rendering of command results. Every artifact carries the tool version and
//! the fully resolved configuration so a file alone reproduces its run.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use contagion::{fmt_sig, OutputFormat, RunConfig};
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One output file: a CSV table and its JSON mirror.
pub struct Artifact {
    pub stem: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Extra `# key: value` lines for the CSV header.
    pub notes: Vec<String>,
    pub json: Value,
}

impl Artifact {
    pub fn new(stem: &'static str, columns: Vec<&'static str>) -> Self {
        Artifact {
            stem,
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
            json: Value::Null,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn num(x: f64) -> String {
    fmt_sig(x)
}

pub fn render(
    artifact: &Artifact,
    command: &str,
    config: &RunConfig,
    format: OutputFormat,
) -> Result<String> {
    match format {
        OutputFormat::Json => {
            let doc = json!({
                "tool": "contagion",
                "version": VERSION,
                "command": command,
                "config": config,
                "result": artifact.json,
            });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        OutputFormat::Csv => {
            let mut out = Vec::new();
            writeln!(out, "# contagion {VERSION} {command}")?;
            writeln!(out, "# config: {}", serde_json::to_string(config)?)?;
            for note in &artifact.notes {
                writeln!(out, "# {note}")?;
            }
            {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&artifact.columns)?;
                for row in &artifact.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            Ok(String::from_utf8(out)?)
        }
    }
}

fn extension(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}

/// Writes artifacts into `dir`, or to stdout when no directory is set.
/// Returns the written paths.
pub fn emit(
    artifacts: &[Artifact],
    command: &str,
    config: &RunConfig,
    format: OutputFormat,
    dir: Option<&Path>,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let stdout = std::io::stdout();
    for a in artifacts {
        let text = render(a, command, config, format)?;
        match dir {
            Some(dir) => {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                let path = dir.join(format!("{}.{}", a.stem, extension(format)));
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                written.push(path);
            }
            None => {
                let mut lock = stdout.lock();
                if artifacts.len() > 1 {
                    writeln!(lock, "# file: {}.{}", a.stem, extension(format))?;
                }
                lock.write_all(text.as_bytes())?;
            }
        }
    }
    Ok(written)
}
