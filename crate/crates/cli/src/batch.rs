//! Append-only batch runner keyed by content key.

use std::collections::BTreeSet;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::input::{raw_line_key, InputRecord, RunOptions, TOOL_VERSION};
use crate::report::build_report;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub new_reports: usize,
    pub new_errors: usize,
    pub skipped: usize,
    pub total_records: usize,
}

impl Summary {
    pub fn message(&self) -> String {
        format!("{} new, {} skipped, {} errors", self.new_reports, self.skipped, self.new_errors)
    }

    pub fn to_json(&self, out: &Path) -> Value {
        json!({
            "kind": "summary",
            "new": self.new_reports.to_string(),
            "errors": self.new_errors.to_string(),
            "skipped": self.skipped.to_string(),
            "total_records": self.total_records.to_string(),
            "output": out.display().to_string(),
            "message": self.message(),
        })
    }
}

enum Job {
    Compute(InputRecord, RunOptions, String),
    Failed(usize, String, String, String),
}

/// Content keys already present in an output file. Lines that are not JSON
/// objects (a torn final write, say) are ignored.
pub fn existing_keys(text: &str) -> BTreeSet<String> {
    text.lines()
        .filter_map(|l| serde_json::from_str::<Value>(l).ok())
        .filter(|v| v.get("kind").and_then(Value::as_str) != Some("manifest"))
        .filter_map(|v| v.get("content_key").and_then(Value::as_str).map(str::to_owned))
        .collect()
}

pub fn run(input: &Path, output: &Path, jobs: usize, global: &RunOptions) -> Result<Summary, CliError> {
    let text = fs::read_to_string(input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
    let previous = match fs::read_to_string(output) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
        Err(e) => return Err(CliError::Io(format!("{}: {e}", output.display()))),
    };
    let mut seen = existing_keys(&previous);
    let mut skipped = 0;
    let mut todo = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let job = match InputRecord::parse(line).and_then(|r| {
            let o = global.with_overrides(&r.options)?;
            Ok((r, o))
        }) {
            Ok((r, o)) => {
                let key = r.content_key(&o);
                Job::Compute(r, o, key)
            }
            Err(e) => Job::Failed(i + 1, line.to_string(), raw_line_key(line, global), e.to_string()),
        };
        let key = match &job {
            Job::Compute(_, _, k) | Job::Failed(_, _, k, _) => k.clone(),
        };
        if !seen.insert(key) {
            skipped += 1;
            continue;
        }
        todo.push(job);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Io(format!("worker pool: {e}")))?;
    let lines: Vec<Value> = pool.install(|| {
        todo.par_iter()
            .map(|job| match job {
                Job::Compute(r, o, _) => build_report(r, o),
                Job::Failed(line_no, raw, key, msg) => json!({
                    "kind": "error",
                    "content_key": key,
                    "line": line_no.to_string(),
                    "raw": raw,
                    "version": TOOL_VERSION,
                    "error": "Malformed",
                    "message": msg,
                }),
            })
            .collect()
    });
    let new_errors = lines.iter().filter(|v| v["kind"] == "error").count();
    let summary =
        Summary { new_reports: lines.len() - new_errors, new_errors, skipped, total_records: seen.len() };

    let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = json!({
        "kind": "manifest",
        "tool_version": TOOL_VERSION,
        "options_fingerprint": global.fingerprint(),
        "record_count": lines.len().to_string(),
        "skipped": skipped.to_string(),
        "total_records": summary.total_records.to_string(),
        "created_unix": created.to_string(),
    });
    let mut buf = String::new();
    if !previous.is_empty() && !previous.ends_with('\n') {
        buf.push('\n');
    }
    for v in lines.iter().chain(std::iter::once(&manifest)) {
        buf.push_str(&v.to_string());
        buf.push('\n');
    }
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", output.display()));
    let mut f = OpenOptions::new().create(true).append(true).open(output).map_err(io)?;
    f.write_all(buf.as_bytes()).map_err(io)?;
    f.flush().map_err(io)?;
    Ok(summary)
}
