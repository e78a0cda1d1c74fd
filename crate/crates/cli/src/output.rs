use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use heatpot::scenario::{Scenario, SCHEMA_VERSION};
use heatpot::transparent_bc::Check;
use serde::Serialize;

/// Wall-clock timings, kept apart so the rest of a report is reproducible.
#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub total_seconds: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub level_seconds: Vec<f64>,
}

#[derive(Serialize)]
pub struct Report<'a, R: Serialize> {
    pub schema_version: u32,
    pub command: &'static str,
    pub scenario: &'a Scenario,
    pub result: R,
    pub checks: &'a [Check],
    pub pass: bool,
    pub timings: Timings,
}

impl<'a, R: Serialize> Report<'a, R> {
    pub fn new(command: &'static str, scenario: &'a Scenario, result: R, checks: &'a [Check], timings: Timings) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            scenario,
            result,
            checks,
            pass: checks.iter().all(|c| c.pass),
            timings,
        }
    }
}

fn write_file(path: &str, text: &str) -> Result<()> {
    let path = Path::new(path);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Writes the report as pretty JSON to `path`, or stdout when there is none.
pub fn emit_report<R: Serialize>(report: &Report<'_, R>, path: Option<&str>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    match path {
        Some(p) => {
            write_file(p, &text)?;
            eprintln!("report written to {p}");
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// CSV table with a header row.
pub struct Table {
    lines: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            lines: vec![header.join(",")],
        }
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = String>) {
        self.lines.push(cells.into_iter().collect::<Vec<_>>().join(","));
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }

    pub fn save(&self, path: Option<&str>) -> Result<()> {
        if let Some(p) = path {
            write_file(p, &self.render())?;
            eprintln!("values written to {p}");
        }
        Ok(())
    }
}

pub fn print_checks(checks: &[Check]) {
    for c in checks {
        let tag = if c.pass { "ok  " } else { "FAIL" };
        eprintln!("{tag} {:<32} {:>12.4e}  (limit {:.1e})", c.name, c.value, c.limit);
    }
}
