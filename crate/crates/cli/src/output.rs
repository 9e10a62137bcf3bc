//! CSV and JSON writers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::{json, Value};

use crate::config::{Format, JobSpec};
use crate::run::{JobOutput, Table};

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest text that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:?}")
    }
}

fn header(t: &Table) -> Vec<String> {
    let mut h = t.columns.clone();
    if t.errors.is_some() {
        h.push("error".into());
    }
    h
}

pub fn write_csv(t: &Table, sink: impl Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header(t))?;
    for (k, row) in t.rows.iter().enumerate() {
        let mut rec: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
        if let Some(errors) = &t.errors {
            rec.push(errors[k].clone());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_json(t: &Table, mode: &str) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .enumerate()
        .map(|(k, row)| {
            // non-finite values have no JSON form
            let mut cells: Vec<Value> = row.iter().map(|&x| serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)).collect();
            if let Some(errors) = &t.errors {
                cells.push(Value::String(errors[k].clone()));
            }
            Value::Array(cells)
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "mode": mode,
        "columns": header(t),
        "rows": rows,
    })
}

pub fn write_table(t: &Table, format: Format, mode: &str, mut sink: impl Write) -> anyhow::Result<()> {
    match format {
        Format::Csv => write_csv(t, sink),
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &to_json(t, mode))?;
            writeln!(sink)?;
            Ok(())
        }
    }
}

/// `runs/fig2.csv` → `runs/fig2_joint.csv`.
pub fn joint_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_joint.{}", ext.to_string_lossy()),
        None => format!("{stem}_joint"),
    };
    out.with_file_name(name)
}

fn write_file(path: &Path, t: &Table, spec: &JobSpec) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let file = fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    let mut w = std::io::BufWriter::new(file);
    write_table(t, spec.format, &spec.mode.to_string(), &mut w)?;
    w.flush()?;
    Ok(())
}

/// Writes the tables to `spec.out` (or stdout) and returns the files created.
pub fn write_output(spec: &JobSpec, output: &JobOutput) -> anyhow::Result<Vec<PathBuf>> {
    let mode = spec.mode.to_string();
    let Some(out) = &spec.out else {
        let stdout = std::io::stdout();
        write_table(&output.main, spec.format, &mode, stdout.lock())?;
        if output.joint.is_some() {
            eprintln!("note: the two-angle table is only written when an output path is set");
        }
        return Ok(vec![]);
    };
    let mut written = vec![out.clone()];
    write_file(out, &output.main, spec)?;
    if let Some(joint) = &output.joint {
        let path = joint_path(out);
        write_file(&path, joint, spec)?;
        written.push(path);
    }
    Ok(written)
}
