//! CSV aggregation of result records.
//!
//! Schema version 1: `instance,parameter,value,bound,margin,pass`, one row per
//! check, files visited in path order.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::artifacts::{load, ResultRecord};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const REPORT_COLUMNS: [&str; 6] = ["instance", "parameter", "value", "bound", "margin", "pass"];
pub const RESULT_SUFFIX: &str = ".result.toml";

fn collect(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_dir() {
            collect(&path, out)?;
        } else if path.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.ends_with(RESULT_SUFFIX)) {
            out.push(path);
        }
    }
    Ok(())
}

/// Every result record under `dir`, recursively, sorted by path.
pub fn load_results(dir: &Path) -> Result<Vec<ResultRecord>> {
    let mut paths = Vec::new();
    collect(dir, &mut paths)?;
    paths.sort();
    paths.iter().map(|p| load(p)).collect()
}

/// Writes the CSV and returns whether every row passed.
pub fn write_report(dir: &Path, out: &Path) -> Result<bool> {
    let records = load_results(dir)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let mut w = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
    w.write_record(REPORT_COLUMNS)?;
    for rec in &records {
        for c in &rec.checks {
            let pass = if c.pass { "true" } else { "false" };
            w.write_record([rec.instance.as_str(), &c.parameter, &c.value, &c.bound, &c.margin, pass])?;
        }
    }
    w.flush()?;
    Ok(records.iter().all(ResultRecord::pass))
}
