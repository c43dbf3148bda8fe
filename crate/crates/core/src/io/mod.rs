//! File formats: matrices, Label Cover instances and JSON-lines reports.
//! Byte-level layouts are described in `docs/formats.md`.

mod labelcover;
mod matrix;
mod report;

pub use labelcover::{parse_instance, parse_labeling, write_instance, write_labeling};
pub use matrix::{
    decode_binary, encode_binary, parse_csv, parse_matrix_market, read_matrix, write_csv,
    write_matrix, write_matrix_market, MatrixFormat, BINARY_MAGIC, BINARY_VERSION,
};
pub use report::{report_record, SCHEMA_VERSION};

use crate::error::{Error, Result};

/// Whitespace-separated tokens with their 1-based columns.
pub(crate) fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let col = line[..offset + start].chars().count() + 1;
        let tok = &tail[..len];
        offset += start + len;
        rest = &tail[len..];
        Some((col, tok))
    })
}

pub(crate) fn parse_num<F: std::str::FromStr>(
    tok: (usize, &str),
    line: usize,
    what: &str,
) -> Result<F> {
    tok.1
        .parse()
        .map_err(|_| Error::parse(line, tok.0, format!("expected {what}, found '{}'", tok.1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_columns() {
        let t: Vec<_> = tokens("  ab c\td").collect();
        assert_eq!(t, vec![(3, "ab"), (6, "c"), (8, "d")]);
        assert_eq!(tokens("   ").count(), 0);
    }
}
