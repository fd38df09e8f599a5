//! Matrix Market coordinate files (`real`, `general` or `symmetric`) and
//! dense `array` vectors.
//!
//! Values are written with `{:e}`, which round-trips `f64` exactly.

use std::io::{self, BufRead, Write};

use msp_core::linalg::{CsrMatrix, SparseSymMatrix, Triplet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MtxError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported header: {0}")]
    Unsupported(String),
}

/// A matrix read from a coordinate file.
#[derive(Debug, Clone, PartialEq)]
pub enum MtxMatrix {
    Symmetric(SparseSymMatrix),
    General(CsrMatrix),
}

/// Writes the lower triangle of `m` with a `symmetric` header.
pub fn write_symmetric<W: Write>(mut w: W, m: &SparseSymMatrix) -> io::Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(w, "{} {} {}", m.dim(), m.dim(), m.nnz_upper())?;
    for (i, j, v) in m.iter_upper() {
        writeln!(w, "{} {} {:e}", j + 1, i + 1, v)?;
    }
    Ok(())
}

pub fn write_general<W: Write>(mut w: W, m: &CsrMatrix) -> io::Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for (i, j, v) in m.iter() {
        writeln!(w, "{} {} {:e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

pub fn write_vector<W: Write>(mut w: W, v: &[f64]) -> io::Result<()> {
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} 1", v.len())?;
    for x in v {
        writeln!(w, "{x:e}")?;
    }
    Ok(())
}

struct Lines<R> {
    inner: io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    /// Next line that is neither blank nor a comment.
    fn next_data(&mut self) -> Result<Option<String>, MtxError> {
        for l in self.inner.by_ref() {
            self.line += 1;
            let l = l?;
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('%') {
                return Ok(Some(t.to_string()));
            }
        }
        Ok(None)
    }

    fn err(&self, msg: impl Into<String>) -> MtxError {
        MtxError::Parse { line: self.line, msg: msg.into() }
    }

    fn expect_data(&mut self, what: &str) -> Result<String, MtxError> {
        self.next_data()?.ok_or_else(|| self.err(format!("unexpected end of file, expected {what}")))
    }

    fn parse<T: std::str::FromStr>(&self, tok: Option<&str>, what: &str) -> Result<T, MtxError> {
        tok.and_then(|t| t.parse().ok()).ok_or_else(|| self.err(format!("bad {what}")))
    }
}

fn header<R: BufRead>(r: R) -> Result<(Lines<R>, Vec<String>), MtxError> {
    let mut lines = Lines { inner: r.lines(), line: 0 };
    let first = lines.inner.next().transpose()?.ok_or_else(|| MtxError::Unsupported("empty file".into()))?;
    lines.line = 1;
    let words: Vec<String> = first.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(MtxError::Unsupported(first));
    }
    Ok((lines, words))
}

/// Reads a `coordinate real` (or `integer`) matrix.
pub fn read<R: BufRead>(r: R) -> Result<MtxMatrix, MtxError> {
    let (mut lines, words) = header(r)?;
    let symmetric = match (words[2].as_str(), words[3].as_str(), words[4].as_str()) {
        ("coordinate", "real" | "integer", "symmetric") => true,
        ("coordinate", "real" | "integer", "general") => false,
        _ => return Err(MtxError::Unsupported(words.join(" "))),
    };
    let size = lines.expect_data("size line")?;
    let mut it = size.split_whitespace();
    let rows: usize = lines.parse(it.next(), "row count")?;
    let cols: usize = lines.parse(it.next(), "column count")?;
    let nnz: usize = lines.parse(it.next(), "entry count")?;
    if symmetric && rows != cols {
        return Err(lines.err("symmetric matrix must be square"));
    }
    let mut triplets: Vec<Triplet> = Vec::with_capacity(nnz);
    for _ in 0..nnz {
        let entry = lines.expect_data("entry")?;
        let mut it = entry.split_whitespace();
        let i: usize = lines.parse(it.next(), "row index")?;
        let j: usize = lines.parse(it.next(), "column index")?;
        let v: f64 = lines.parse(it.next(), "value")?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(lines.err(format!("index ({i}, {j}) out of range")));
        }
        if symmetric && i < j {
            return Err(lines.err("symmetric files store the lower triangle"));
        }
        triplets.push((i - 1, j - 1, v));
    }
    if lines.next_data()?.is_some() {
        return Err(lines.err("more entries than announced"));
    }
    let m = if symmetric {
        MtxMatrix::Symmetric(SparseSymMatrix::from_triangle_triplets(rows, &triplets).map_err(|e| lines.err(e.to_string()))?)
    } else {
        MtxMatrix::General(CsrMatrix::from_triplets(rows, cols, &triplets).map_err(|e| lines.err(e.to_string()))?)
    };
    Ok(m)
}

/// Reads a single-column `array real general` file.
pub fn read_vector<R: BufRead>(r: R) -> Result<Vec<f64>, MtxError> {
    let (mut lines, words) = header(r)?;
    if words[2] != "array" || !matches!(words[3].as_str(), "real" | "integer") || words[4] != "general" {
        return Err(MtxError::Unsupported(words.join(" ")));
    }
    let size = lines.expect_data("size line")?;
    let mut it = size.split_whitespace();
    let rows: usize = lines.parse(it.next(), "row count")?;
    let cols: usize = lines.parse(it.next(), "column count")?;
    if cols != 1 {
        return Err(lines.err("only single-column arrays are supported"));
    }
    let mut v = Vec::with_capacity(rows);
    for _ in 0..rows {
        let l = lines.expect_data("value")?;
        v.push(lines.parse(Some(l.as_str()), "value")?);
    }
    if lines.next_data()?.is_some() {
        return Err(lines.err("more values than announced"));
    }
    Ok(v)
}
