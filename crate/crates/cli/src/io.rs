//! Plain-text vector and CSV matrix files.
//!
//! Values are written with Rust's shortest round-trip formatting, so `parse(format(v)) == v`
//! bit for bit.

use std::fs;
use std::path::{Path, PathBuf};

use oscar_core::DenseMatrix;

use crate::error::{CliError, CliResult};

/// Name of the environment variable that redirects relative output paths.
pub const OUT_DIR_ENV: &str = "OSCAR_OUT_DIR";

/// Resolves an output path against `OSCAR_OUT_DIR` when it is relative.
pub fn output_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

pub fn create_parent(path: &Path) -> CliResult<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir)
            .map_err(|e| CliError::io(format!("creating {}", dir.display()), e)),
        _ => Ok(()),
    }
}

fn parse_value(token: &str, path: &str, line: usize) -> CliResult<f64> {
    let value: f64 = token.parse().map_err(|_| CliError::Parse {
        path: path.to_string(),
        line,
        message: format!("'{token}' is not a number"),
    })?;
    if !value.is_finite() {
        return Err(CliError::Parse {
            path: path.to_string(),
            line,
            message: format!("'{token}' is not finite"),
        });
    }
    Ok(value)
}

/// Parses one value per line. Blank lines and lines starting with `#` are skipped.
pub fn parse_vector(text: &str, origin: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_value(line, origin, i + 1)?);
    }
    Ok(out)
}

pub fn format_vector(v: &[f64]) -> String {
    let mut s = String::with_capacity(v.len() * 20);
    for x in v {
        s.push_str(&format!("{x:?}\n"));
    }
    s
}

pub fn read_vector(path: &Path) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse_vector(&text, &path.display().to_string())
}

pub fn write_vector(path: &Path, v: &[f64]) -> CliResult<()> {
    create_parent(path)?;
    fs::write(path, format_vector(v))
        .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

/// Parses a comma-separated matrix, one row per line; `#` lines are comments.
pub fn parse_matrix(text: &str, origin: &str) -> CliResult<DenseMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(CliError::Parse {
                    path: origin.to_string(),
                    line,
                    message: format!("expected {c} columns, found {}", record.len()),
                })
            }
            Some(_) => {}
        }
        for field in record.iter() {
            data.push(parse_value(field, origin, line)?);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| CliError::Usage(format!("{origin}: matrix file is empty")))?;
    Ok(DenseMatrix::new(rows, cols, data)?)
}

pub fn read_matrix(path: &Path) -> CliResult<DenseMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse_matrix(&text, &path.display().to_string())
}

pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut s = String::new();
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(|x| format!("{x:?}")).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn write_matrix(path: &Path, a: &DenseMatrix) -> CliResult<()> {
    create_parent(path)?;
    fs::write(path, format_matrix(a))
        .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

/// Writes `rows` as CSV with a header taken from the field names.
pub fn write_csv<T: serde::Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    create_parent(path)?;
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
        .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

/// Writes the JSON mirror of a results file next to it, with a `.json` extension.
pub fn write_json_mirror<T: serde::Serialize + ?Sized>(
    csv_path: &Path,
    value: &T,
) -> CliResult<PathBuf> {
    let path = csv_path.with_extension("json");
    create_parent(&path)?;
    let text = serde_json::to_string_pretty(value)?;
    fs::write(&path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    Ok(path)
}
