use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::{parse_num, tokens};
use crate::linalg::DenseMatrix;

pub const BINARY_MAGIC: &[u8; 4] = b"OPNM";
pub const BINARY_VERSION: u32 = 1;
const BINARY_HEADER: usize = 4 + 4 + 8 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixMarket,
    Csv,
    Binary,
}

impl MatrixFormat {
    /// By extension: `.mtx`/`.mm`, `.csv`, `.bin`/`.opnm`.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "mtx" | "mm" => Some(Self::MatrixMarket),
            "csv" => Some(Self::Csv),
            "bin" | "opnm" => Some(Self::Binary),
            _ => None,
        }
    }
}

/// Reads a matrix, choosing the format by content first (binary magic,
/// Matrix Market banner) and by extension otherwise, defaulting to CSV.
pub fn read_matrix(path: &Path) -> Result<DenseMatrix<f64>> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(BINARY_MAGIC) {
        return decode_binary(&bytes);
    }
    let text = String::from_utf8(bytes).map_err(|e| {
        let upto = &e.as_bytes()[..e.utf8_error().valid_up_to()];
        let line = upto.iter().filter(|&&b| b == b'\n').count() + 1;
        Error::parse(
            line,
            1,
            "file is neither UTF-8 text nor an OPNM binary matrix",
        )
    })?;
    if text.trim_start().starts_with("%%MatrixMarket") {
        return parse_matrix_market(&text);
    }
    match MatrixFormat::from_path(path) {
        Some(MatrixFormat::MatrixMarket) => parse_matrix_market(&text),
        Some(MatrixFormat::Binary) => Err(Error::parse(1, 1, "missing OPNM magic")),
        _ => parse_csv(&text),
    }
}

pub fn write_matrix(path: &Path, a: &DenseMatrix<f64>, format: MatrixFormat) -> Result<()> {
    match format {
        MatrixFormat::MatrixMarket => fs::write(path, write_matrix_market(a))?,
        MatrixFormat::Csv => fs::write(path, write_csv(a))?,
        MatrixFormat::Binary => fs::write(path, encode_binary(a))?,
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

/// Matrix Market `matrix` objects in `coordinate` or `array` layout with
/// `real` or `integer` fields and `general`, `symmetric` or
/// `skew-symmetric` symmetry.
pub fn parse_matrix_market(text: &str) -> Result<DenseMatrix<f64>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty file"))?;
    let fields: Vec<_> = tokens(header).collect();
    if fields.len() != 5 || !fields[0].1.eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(Error::parse(
            hline,
            1,
            "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'",
        ));
    }
    let lower: Vec<String> = fields.iter().map(|f| f.1.to_ascii_lowercase()).collect();
    if lower[1] != "matrix" {
        return Err(Error::parse(
            hline,
            fields[1].0,
            format!("unsupported object '{}'", fields[1].1),
        ));
    }
    let layout = match lower[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        _ => {
            return Err(Error::parse(
                hline,
                fields[2].0,
                format!("unknown layout '{}'", fields[2].1),
            ))
        }
    };
    if lower[3] != "real" && lower[3] != "integer" && lower[3] != "double" {
        return Err(Error::parse(
            hline,
            fields[3].0,
            format!("unsupported field '{}'", fields[3].1),
        ));
    }
    let symmetry = match lower[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        _ => {
            return Err(Error::parse(
                hline,
                fields[4].0,
                format!("unsupported symmetry '{}'", fields[4].1),
            ))
        }
    };
    let mut body = lines.filter(|(_, l)| {
        let t = l.trim_start();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sline, size) = body
        .next()
        .ok_or_else(|| Error::parse(hline + 1, 1, "missing size line"))?;
    let size: Vec<_> = tokens(size).collect();
    let want = if layout == Layout::Coordinate { 3 } else { 2 };
    if size.len() != want {
        return Err(Error::parse(
            sline,
            1,
            format!("size line needs {want} integers"),
        ));
    }
    let rows: usize = parse_num(size[0], sline, "row count")?;
    let cols: usize = parse_num(size[1], sline, "column count")?;
    if rows == 0 || cols == 0 {
        return Err(Error::parse(sline, 1, "matrix dimensions must be positive"));
    }
    if symmetry != Symmetry::General && rows != cols {
        return Err(Error::parse(
            sline,
            1,
            "symmetric storage needs a square matrix",
        ));
    }
    let mut data = vec![0.0; rows * cols];
    let mut put = |i: usize, j: usize, v: f64| {
        data[i * cols + j] = v;
        match symmetry {
            Symmetry::Symmetric => data[j * cols + i] = v,
            Symmetry::SkewSymmetric => data[j * cols + i] = -v,
            Symmetry::General => {}
        }
    };
    let mut last_line = sline;
    match layout {
        Layout::Coordinate => {
            let nnz: usize = parse_num(size[2], sline, "entry count")?;
            let mut seen = 0;
            for (ln, l) in body {
                last_line = ln;
                let t: Vec<_> = tokens(l).collect();
                if t.len() != 3 {
                    return Err(Error::parse(
                        ln,
                        1,
                        "coordinate entry needs 'row column value'",
                    ));
                }
                let i: usize = parse_num(t[0], ln, "row index")?;
                let j: usize = parse_num(t[1], ln, "column index")?;
                if i == 0 || i > rows {
                    return Err(Error::parse(
                        ln,
                        t[0].0,
                        format!("row index {i} outside 1..={rows}"),
                    ));
                }
                if j == 0 || j > cols {
                    return Err(Error::parse(
                        ln,
                        t[1].0,
                        format!("column index {j} outside 1..={cols}"),
                    ));
                }
                if symmetry != Symmetry::General && j > i {
                    return Err(Error::parse(
                        ln,
                        t[1].0,
                        "symmetric storage lists the lower triangle only",
                    ));
                }
                if symmetry == Symmetry::SkewSymmetric && i == j {
                    return Err(Error::parse(
                        ln,
                        t[1].0,
                        "skew-symmetric storage has no diagonal entries",
                    ));
                }
                let v: f64 = parse_finite(t[2], ln)?;
                put(i - 1, j - 1, v);
                seen += 1;
                if seen > nnz {
                    return Err(Error::parse(
                        ln,
                        1,
                        format!("more than the declared {nnz} entries"),
                    ));
                }
            }
            if seen != nnz {
                return Err(Error::parse(
                    last_line + 1,
                    1,
                    format!("expected {nnz} entries, found {seen}"),
                ));
            }
        }
        Layout::Array => {
            // column-major; symmetric storage lists the lower triangle
            let slots: Vec<(usize, usize)> = (0..cols)
                .flat_map(|j| {
                    let start = match symmetry {
                        Symmetry::General => 0,
                        Symmetry::Symmetric => j,
                        Symmetry::SkewSymmetric => j + 1,
                    };
                    (start..rows).map(move |i| (i, j))
                })
                .collect();
            let mut k = 0;
            for (ln, l) in body {
                last_line = ln;
                for tok in tokens(l) {
                    let Some(&(i, j)) = slots.get(k) else {
                        return Err(Error::parse(
                            ln,
                            tok.0,
                            format!("more than the expected {} values", slots.len()),
                        ));
                    };
                    put(i, j, parse_finite(tok, ln)?);
                    k += 1;
                }
            }
            if k != slots.len() {
                return Err(Error::parse(
                    last_line + 1,
                    1,
                    format!("expected {} values, found {k}", slots.len()),
                ));
            }
        }
    }
    DenseMatrix::new(rows, cols, data)
}

fn parse_finite(tok: (usize, &str), line: usize) -> Result<f64> {
    let v: f64 = parse_num(tok, line, "a number")?;
    if !v.is_finite() {
        return Err(Error::parse(
            line,
            tok.0,
            format!("non-finite value '{}'", tok.1),
        ));
    }
    Ok(v)
}

/// Dense `array real general` layout, shortest round-trip decimal digits.
pub fn write_matrix_market(a: &DenseMatrix<f64>) -> String {
    let mut out = String::from("%%MatrixMarket matrix array real general\n");
    out.push_str(&format!("{} {}\n", a.rows(), a.cols()));
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            out.push_str(&format!("{:?}\n", a[(i, j)]));
        }
    }
    out
}

/// Comma-separated rows. Blank lines and lines starting with `#` are skipped.
pub fn parse_csv(text: &str) -> Result<DenseMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width_line = 0;
    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        let mut col = 1;
        for field in line.split(',') {
            let lead = field.len() - field.trim_start().len();
            let at = col + field[..lead].chars().count();
            let v = parse_finite((at, field.trim()), ln)?;
            row.push(v);
            col += field.chars().count() + 1;
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::parse(
                    ln,
                    1,
                    format!(
                        "row has {} fields, line {width_line} has {}",
                        row.len(),
                        first.len()
                    ),
                ));
            }
        } else {
            width_line = ln;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse(1, 1, "no matrix rows"));
    }
    DenseMatrix::from_rows(&rows)
}

pub fn write_csv(a: &DenseMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `OPNM`, `u32` version, `u64` rows, `u64` cols, then `f64` entries in
/// row-major order, all little-endian.
pub fn encode_binary(a: &DenseMatrix<f64>) -> Vec<u8> {
    let mut out = Vec::with_capacity(BINARY_HEADER + 8 * a.as_slice().len());
    out.extend_from_slice(BINARY_MAGIC);
    out.extend_from_slice(&BINARY_VERSION.to_le_bytes());
    out.extend_from_slice(&(a.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(a.cols() as u64).to_le_bytes());
    for v in a.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_binary(bytes: &[u8]) -> Result<DenseMatrix<f64>> {
    // line numbers are meaningless here, so the column is the byte offset
    let bad = |offset: usize, msg: String| Error::parse(1, offset + 1, msg);
    if bytes.len() < BINARY_HEADER || &bytes[..4] != BINARY_MAGIC {
        return Err(bad(0, "missing OPNM header".into()));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != BINARY_VERSION {
        return Err(bad(4, format!("unsupported version {version}")));
    }
    let rows = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let cols = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let count = rows
        .checked_mul(cols)
        .and_then(|c| usize::try_from(c).ok())
        .ok_or_else(|| bad(8, "dimensions overflow".into()))?;
    if rows == 0 || cols == 0 {
        return Err(bad(8, "matrix dimensions must be positive".into()));
    }
    let expected = count
        .checked_mul(8)
        .and_then(|b| b.checked_add(BINARY_HEADER));
    if expected != Some(bytes.len()) {
        return Err(bad(
            BINARY_HEADER,
            format!(
                "expected {count} entries, payload has {} bytes",
                bytes.len() - BINARY_HEADER
            ),
        ));
    }
    let data: Vec<f64> = bytes[BINARY_HEADER..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Some(k) = data.iter().position(|v| !v.is_finite()) {
        return Err(bad(BINARY_HEADER + 8 * k, "non-finite entry".into()));
    }
    DenseMatrix::new(rows as usize, cols as usize, data)
}
