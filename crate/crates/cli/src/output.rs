//! CSV emission and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::CliError;

/// 17 significant digits, enough to round-trip an f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Default)]
pub struct Table {
    text: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut t = Self::default();
        t.line(header.iter().copied());
        t
    }

    pub fn line<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.text.push(',');
            }
            self.text.push_str(f.as_ref());
            first = false;
        }
        self.text.push('\n');
    }

    pub fn blank(&mut self) {
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// What a command produced, written from one place after it returns.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub table: Table,
    /// `key = value` lines for the manifest.
    pub summary: Vec<(String, String)>,
    pub failed_cells: Vec<String>,
}

fn io(path: &str) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_string(), source }
}

pub fn write_output(path: &str, out: &RunOutput, command: &str) -> Result<(), CliError> {
    if path == "-" {
        std::io::stdout().write_all(out.table.as_str().as_bytes()).map_err(io("<stdout>"))?;
        for (k, v) in &out.summary {
            eprintln!("{k} = {v}");
        }
        for c in &out.failed_cells {
            eprintln!("failed cell: {c}");
        }
        return Ok(());
    }
    if let Some(dir) = Path::new(path).parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io(path))?;
    }
    fs::write(path, out.table.as_str()).map_err(io(path))?;
    let manifest = format!("{path}.manifest");
    fs::write(&manifest, manifest_text(out, command)).map_err(io(&manifest))
}

pub fn manifest_text(out: &RunOutput, command: &str) -> String {
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut m = String::new();
    let _ = writeln!(m, "# written at unix time {stamp}");
    let _ = writeln!(m, "command = {command}");
    let _ = writeln!(m, "status = {}", if out.failed_cells.is_empty() { "ok" } else { "partial" });
    for (k, v) in &out.summary {
        let _ = writeln!(m, "{k} = {v}");
    }
    let _ = writeln!(m, "failed_cells = {}", out.failed_cells.len());
    for c in &out.failed_cells {
        let _ = writeln!(m, "failed {c}");
    }
    m
}
