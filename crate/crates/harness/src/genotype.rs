//! Genotype file ingestion: rectangular numeric text (CSV/TSV) with rows as
//! individuals and columns as SNPs.
//!
//! The format is deliberately dumb: one delimiter, no quoting, an optional
//! header row that is auto-detected (a first row with any non-numeric cell
//! is treated as a header and skipped). Every malformed cell is reported
//! with its 1-based file line and column so a 79k-column matrix is
//! debuggable. Ragged rows are rejected: downstream everything assumes a
//! proper n×d matrix.

use std::fs;
use std::path::Path;

use primo_core::Matrix;

use crate::error::{HarnessError, Result};

/// Parses delimiter-separated numeric text into a matrix. `source_name` is
/// used only in error messages. Lines are split on `delimiter`; a trailing
/// carriage return is tolerated so CRLF files load. Row numbers in errors
/// are 1-based physical line numbers, including any header.
pub fn parse_genotype_text(text: &str, delimiter: u8, source_name: &str) -> Result<Matrix> {
    let delim = delimiter as char;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim_end_matches('\r');
        let cells: Vec<&str> = line.split(delim).map(str::trim).collect();

        // Header auto-detection: only the first physical row may be a
        // header, and it is one exactly when any cell fails numeric parsing.
        if idx == 0 && cells.iter().any(|c| c.parse::<f64>().is_err()) {
            continue;
        }

        let expected = *width.get_or_insert(cells.len());
        if cells.len() != expected {
            return Err(HarnessError::Ragged {
                source_name: source_name.to_string(),
                row: line_no,
                expected,
                got: cells.len(),
            });
        }

        let mut row = Vec::with_capacity(expected);
        for (j, cell) in cells.iter().enumerate() {
            match cell.parse::<f64>() {
                Ok(v) => row.push(v),
                Err(_) => {
                    return Err(HarnessError::Parse {
                        source_name: source_name.to_string(),
                        row: line_no,
                        col: j + 1,
                        token: (*cell).to_string(),
                    });
                }
            }
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(HarnessError::Empty { source_name: source_name.to_string() });
    }

    let (n, d) = (rows.len(), rows[0].len());
    let mut data = Vec::with_capacity(n * d);
    for row in &rows {
        data.extend_from_slice(row);
    }
    Ok(Matrix::new(n, d, data))
}

/// Reads and parses a genotype (or phenotype) matrix from `path`.
pub fn load_genotype_matrix(path: &Path, delimiter: u8) -> Result<Matrix> {
    let text = fs::read_to_string(path)?;
    parse_genotype_text(&text, delimiter, &path.display().to_string())
}

/// Writes a matrix in the same format [`load_genotype_matrix`] reads: one
/// row per line, delimiter-separated, floats at 17 significant digits,
/// LF line endings, no header.
pub fn write_matrix(path: &Path, m: &Matrix, delimiter: u8) -> Result<()> {
    let delim = delimiter as char;
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(delim);
            }
            out.push_str(&format!("{:.16e}", m.get(i, j)));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_plain() {
        let m = parse_genotype_text("0,1\n1,0", b',', "t").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert_eq!(m.data(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn header_row_is_skipped() {
        let m = parse_genotype_text("snp1,snp2\n0,1\n1,1", b',', "t").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert_eq!(m.data(), &[0.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn tab_delimited_with_crlf() {
        let m = parse_genotype_text("a\tb\r\n0.5\t-1\r\n", b'\t', "t").unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 2));
        assert_eq!(m.data(), &[0.5, -1.0]);
    }

    #[test]
    fn non_numeric_cell_positions_are_one_based() {
        // Line 1 is a header (skipped), line 3 column 2 is bad.
        let err = parse_genotype_text("h1,h2\n0,1\n1,x", b',', "geno").unwrap_err();
        match err {
            HarnessError::Parse { source_name, row, col, token } => {
                assert_eq!(source_name, "geno");
                assert_eq!((row, col), (3, 2));
                assert_eq!(token, "x");
            }
            other => panic!("expected Parse, got {other:?}"),
        }
    }

    #[test]
    fn ragged_row_is_rejected() {
        let err = parse_genotype_text("0,1\n1,0,1", b',', "geno").unwrap_err();
        match err {
            HarnessError::Ragged { row, expected, got, .. } => {
                assert_eq!((row, expected, got), (2, 2, 3));
            }
            other => panic!("expected Ragged, got {other:?}"),
        }
    }

    #[test]
    fn header_only_file_is_empty() {
        let err = parse_genotype_text("snp1,snp2\n", b',', "geno").unwrap_err();
        assert!(matches!(err, HarnessError::Empty { .. }));
    }

    #[test]
    fn interior_blank_line_is_ragged() {
        let err = parse_genotype_text("0,1\n\n1,0", b',', "geno").unwrap_err();
        match err {
            HarnessError::Ragged { row, got, .. } => assert_eq!((row, got), (2, 1)),
            other => panic!("expected Ragged, got {other:?}"),
        }
    }

    #[test]
    fn scientific_notation_and_signs_parse() {
        let m = parse_genotype_text("1e-3,-2.5E2\n+0.0,3", b',', "t").unwrap();
        assert_eq!(m.get(0, 0), 1e-3);
        assert_eq!(m.get(0, 1), -250.0);
        assert_eq!(m.get(1, 0), 0.0);
    }
}
