//! Matrix loaders and writers, run records and sweep tables.
//!
//! Three matrix formats are supported: dense delimited text, whitespace
//! triplets (`row col value`, optional `%%dims R C` and `%%base 1` header
//! lines) and Matrix Market coordinate files. Numbers are written with 17
//! significant digits so that every `f64` reloads bit-identically.

mod records;

pub use records::{
    content_hash, read_run, read_sweep, write_run, write_sweep, RunRecord, SweepRow, TraceSummary, SWEEP_HEADER,
};

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::RawMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dense { delimiter: u8 },
    Triplets,
    MatrixMarket,
}

impl Format {
    /// Guesses a format from the file extension: `.mtx` is Matrix Market,
    /// `.tsv` tab-separated dense, `.csv` comma-separated dense and anything
    /// else triplets.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") => Format::MatrixMarket,
            Some("csv") => Format::Dense { delimiter: b',' },
            Some("tsv") => Format::Dense { delimiter: b'\t' },
            _ => Format::Triplets,
        }
    }
}

pub fn load(path: &Path, format: Format) -> Result<RawMatrix> {
    match format {
        Format::Dense { delimiter } => load_dense_csv(path, delimiter),
        Format::Triplets => load_triplets(path),
        Format::MatrixMarket => load_matrix_market(path),
    }
}

pub fn save(path: &Path, raw: &RawMatrix, format: Format) -> Result<()> {
    match format {
        Format::Dense { delimiter } => write_dense_csv(path, raw, delimiter),
        Format::Triplets => write_triplets(path, raw),
        Format::MatrixMarket => write_matrix_market(path, raw),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_value(field: &str, line: usize, col: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse { line, col, msg: format!("{:?} is not a number", field.trim()) })
}

fn parse_index(field: &str, line: usize, col: usize) -> Result<usize> {
    field.parse::<usize>().map_err(|_| Error::Parse { line, col, msg: format!("{field:?} is not an index") })
}

fn check_value(v: f64, row: usize, col: usize) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::NonFinite(row, col));
    }
    if v < 0.0 {
        return Err(Error::NegativeEntry(row, col));
    }
    Ok(())
}

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Reads a rectangular table of nonnegative numbers without a header.
/// Lines and columns in errors are 1-based.
pub fn load_dense_csv(path: &Path, delimiter: u8) -> Result<RawMatrix> {
    let text = read(path)?;
    parse_dense(&text, delimiter)
}

pub fn parse_dense(text: &str, delimiter: u8) -> Result<RawMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(delimiter)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            col: 0,
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        if let Some(first) = rows.first() {
            if record.len() != first.len() {
                return Err(Error::RaggedRows { line, expected: first.len(), found: record.len() });
            }
        }
        let mut row = Vec::with_capacity(record.len());
        for (c, field) in record.iter().enumerate() {
            let v = parse_value(field, line, c + 1)?;
            check_value(v, rows.len(), c)?;
            row.push(v);
        }
        rows.push(row);
    }
    RawMatrix::from_dense(&rows)
}

/// Reads `row col value` lines; see [`parse_triplets`].
pub fn load_triplets(path: &Path) -> Result<RawMatrix> {
    parse_triplets(&read(path)?, 0)
}

/// Like [`load_triplets`] with a default index base for files without a
/// `%%base` line.
pub fn load_triplets_with_base(path: &Path, base: usize) -> Result<RawMatrix> {
    parse_triplets(&read(path)?, base)
}

/// Whitespace-separated `row col value` lines. Fields after the third are
/// ignored, so rating files with timestamps load directly. Duplicate cells
/// are summed. Lines starting with `%` or `#` are comments, except the
/// headers `%%dims R C` (declared shape) and `%%base B` (0 or 1). Without
/// `%%dims` the shape is one past the largest index on each side.
pub fn parse_triplets(text: &str, default_base: usize) -> Result<RawMatrix> {
    let mut dims: Option<(usize, usize)> = None;
    let mut base = default_base;
    let mut cells = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("%%") {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            match fields.first().copied() {
                Some("dims") if fields.len() == 3 => {
                    dims = Some((parse_index(fields[1], line_no, 2)?, parse_index(fields[2], line_no, 3)?));
                }
                Some("base") if fields.len() == 2 => {
                    base = parse_index(fields[1], line_no, 2)?;
                    if base > 1 {
                        return Err(Error::Parse { line: line_no, col: 2, msg: format!("index base {base} is not 0 or 1") });
                    }
                }
                _ => return Err(Error::Parse { line: line_no, col: 1, msg: format!("unknown header {line:?}") }),
            }
            continue;
        }
        if line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(Error::Parse {
                line: line_no,
                col: fields.len() + 1,
                msg: "expected row, column and value".into(),
            });
        }
        let r = parse_index(fields[0], line_no, 1)?;
        let c = parse_index(fields[1], line_no, 2)?;
        if r < base || c < base {
            return Err(Error::Parse { line: line_no, col: if r < base { 1 } else { 2 }, msg: format!("index below base {base}") });
        }
        let v = parse_value(fields[2], line_no, 3)?;
        let (r, c) = (r - base, c - base);
        check_value(v, r, c)?;
        cells.push((r, c, v));
    }
    let (n_rows, n_cols) = dims.unwrap_or_else(|| {
        let rows = cells.iter().map(|e| e.0 + 1).max().unwrap_or(0);
        let cols = cells.iter().map(|e| e.1 + 1).max().unwrap_or(0);
        (rows, cols)
    });
    RawMatrix::from_triplets(n_rows, n_cols, cells)
}

pub fn load_matrix_market(path: &Path) -> Result<RawMatrix> {
    parse_matrix_market(&read(path)?)
}

/// Matrix Market coordinate files with `real` or `integer` values and
/// `general` symmetry. Duplicate entries are summed.
pub fn parse_matrix_market(text: &str) -> Result<RawMatrix> {
    let mut lines = text.lines().enumerate();
    let banner = lines.next().map(|(_, l)| l.trim()).unwrap_or("");
    let fields: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    let ok = fields.len() == 5
        && fields[0] == "%%matrixmarket"
        && fields[1] == "matrix"
        && fields[2] == "coordinate"
        && (fields[3] == "real" || fields[3] == "integer")
        && fields[4] == "general";
    if !ok {
        return Err(Error::UnsupportedHeader(banner.to_string()));
    }
    let mut size: Option<(usize, usize, usize)> = None;
    let mut cells = Vec::new();
    for (idx, raw_line) in lines {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        match size {
            None => {
                if f.len() != 3 {
                    return Err(Error::Parse { line: line_no, col: 1, msg: "expected rows, columns and entry count".into() });
                }
                size = Some((parse_index(f[0], line_no, 1)?, parse_index(f[1], line_no, 2)?, parse_index(f[2], line_no, 3)?));
            }
            Some((n_rows, n_cols, _)) => {
                if f.len() != 3 {
                    return Err(Error::Parse { line: line_no, col: f.len() + 1, msg: "expected row, column and value".into() });
                }
                let r = parse_index(f[0], line_no, 1)?;
                let c = parse_index(f[1], line_no, 2)?;
                if r == 0 || c == 0 || r > n_rows || c > n_cols {
                    return Err(Error::IndexOutOfDeclaredRange { row: r, col: c, n_rows, n_cols });
                }
                let v = parse_value(f[2], line_no, 3)?;
                check_value(v, r - 1, c - 1)?;
                cells.push((r - 1, c - 1, v));
            }
        }
    }
    let Some((n_rows, n_cols, nnz)) = size else {
        return Err(Error::Parse { line: 2, col: 1, msg: "missing size line".into() });
    };
    if cells.len() != nnz {
        return Err(Error::Parse {
            line: text.lines().count(),
            col: 1,
            msg: format!("expected {nnz} entries, found {}", cells.len()),
        });
    }
    RawMatrix::from_triplets(n_rows, n_cols, cells)
}

fn write_text(path: &Path, body: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn write_dense_csv(path: &Path, raw: &RawMatrix, delimiter: u8) -> Result<()> {
    let sep = (delimiter as char).to_string();
    write_text(path, |w| {
        for row in raw.to_dense() {
            let fields: Vec<String> = row.iter().map(|&v| if v == 0.0 { "0".into() } else { fmt_f64(v) }).collect();
            writeln!(w, "{}", fields.join(&sep))?;
        }
        Ok(())
    })
}

/// 0-based triplets with a `%%dims` header.
pub fn write_triplets(path: &Path, raw: &RawMatrix) -> Result<()> {
    write_text(path, |w| {
        writeln!(w, "%%dims {} {}", raw.n_rows(), raw.n_cols())?;
        for (r, c, v) in raw.iter() {
            writeln!(w, "{r} {c} {}", fmt_f64(v))?;
        }
        Ok(())
    })
}

pub fn write_matrix_market(path: &Path, raw: &RawMatrix) -> Result<()> {
    write_text(path, |w| {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", raw.n_rows(), raw.n_cols(), raw.nnz())?;
        for (r, c, v) in raw.iter() {
            writeln!(w, "{} {} {}", r + 1, c + 1, fmt_f64(v))?;
        }
        Ok(())
    })
}
