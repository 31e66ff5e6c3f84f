//! Plain-text file formats for keys and hashing matrices.
//!
//! Key files carry one key per line as MSB-first uppercase hex, under
//! an explicit `bits=<len>` header so lengths that are not multiples
//! of four stay unambiguous.  Matrix files carry a single header line
//! `rows cols kind seed`; seeded kinds (`explicit-random`,
//! `modified-toeplitz`) regenerate the matrix from the seed, while
//! `explicit-random-materialized` is followed by `rows` lines of
//! row-major hex and ignores the seed field.
//!
//! Parsing is strict: no blank lines, exact row counts, and every
//! error reports a 1-based line and column.

use std::fs;
use std::path::Path;

use crate::hashing::{
    random_matrix, toeplitz_matrix, BitMatrix, BitVector, HashSeed, HexError, MatrixKind,
};

const KIND_RANDOM: &str = "explicit-random";
const KIND_TOEPLITZ: &str = "modified-toeplitz";
const KIND_MATERIALIZED: &str = "explicit-random-materialized";

/// Errors reading or writing key and matrix files.
#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> FileError {
    FileError::Parse { line, col, msg: msg.into() }
}

fn hex_err(line: usize, err: HexError) -> FileError {
    // Point at the offending digit when there is one; otherwise the
    // whole line is wrong and column 1 is the honest answer.
    let col = match err {
        HexError::InvalidDigit { index } => index + 1,
        _ => 1,
    };
    parse_err(line, col, err.to_string())
}

/// Header fields with their 1-based starting columns.
fn fields_with_cols(line: &str) -> Vec<(usize, &str)> {
    let mut fields = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                fields.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        fields.push((s + 1, &line[s..]));
    }
    fields
}

/// Lines with their 1-based numbers, tolerating CRLF endings.
fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l))
}

/// Renders a key file; every key must be exactly `bits` long.
pub fn key_file_to_string(bits: usize, keys: &[BitVector]) -> String {
    assert!(bits > 0, "key length must be positive");
    let mut out = format!("bits={bits}\n");
    for key in keys {
        assert_eq!(key.len(), bits, "key length does not match the header");
        out.push_str(&key.to_hex());
        out.push('\n');
    }
    out
}

/// Parses a key file, returning the declared bit length and the keys.
///
/// # Errors
/// `Parse` with 1-based line/column on a malformed header, a bad hex
/// digit, a wrong digit count, nonzero padding, or a blank line.
pub fn key_file_from_str(text: &str) -> Result<(usize, Vec<BitVector>), FileError> {
    let mut lines = numbered_lines(text);
    let Some((_, header)) = lines.next() else {
        return Err(parse_err(1, 1, "missing `bits=<len>` header"));
    };
    let bits: usize = header
        .strip_prefix("bits=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| parse_err(1, 1, format!("expected `bits=<len>` header, got `{header}`")))?;
    if bits == 0 {
        return Err(parse_err(1, 6, "key length must be positive"));
    }
    let mut keys = Vec::new();
    for (number, line) in lines {
        if line.is_empty() {
            return Err(parse_err(number, 1, "blank line"));
        }
        keys.push(BitVector::from_hex(line, bits).map_err(|e| hex_err(number, e))?);
    }
    Ok((bits, keys))
}

/// Writes a key file to disk; see [`key_file_to_string`].
pub fn write_key_file(path: &Path, bits: usize, keys: &[BitVector]) -> Result<(), FileError> {
    fs::write(path, key_file_to_string(bits, keys))?;
    Ok(())
}

/// Reads a key file from disk; see [`key_file_from_str`].
pub fn read_key_file(path: &Path) -> Result<(usize, Vec<BitVector>), FileError> {
    key_file_from_str(&fs::read_to_string(path)?)
}

/// Renders a matrix file.  Seeded matrices serialize as their kind
/// plus the seed and no body; matrices without a stored seed (built
/// from explicit rows, or proper row slices of seeded ones) serialize
/// as `explicit-random-materialized` with a body of hex rows and a
/// placeholder seed of 0.
pub fn matrix_file_to_string(m: &BitMatrix) -> String {
    match m.seed() {
        Some(seed) => {
            let kind = match m.kind() {
                MatrixKind::ExplicitRandom => KIND_RANDOM,
                MatrixKind::ModifiedToeplitz => KIND_TOEPLITZ,
            };
            format!("{} {} {} {}\n", m.rows(), m.cols(), kind, seed.0)
        }
        None => {
            let mut out = format!("{} {} {} 0\n", m.rows(), m.cols(), KIND_MATERIALIZED);
            for i in 0..m.rows() {
                out.push_str(&m.row(i).to_hex());
                out.push('\n');
            }
            out
        }
    }
}

/// Parses a matrix file; seeded kinds are regenerated from the seed.
///
/// # Errors
/// `Parse` with 1-based line/column on malformed headers, unknown
/// kinds, dimension problems, bad body rows, or wrong row counts.
pub fn matrix_file_from_str(text: &str) -> Result<BitMatrix, FileError> {
    let mut lines = numbered_lines(text);
    let Some((_, header)) = lines.next() else {
        return Err(parse_err(1, 1, "missing `rows cols kind seed` header"));
    };
    let fields = fields_with_cols(header);
    let [(rows_col, rows), (cols_col, cols), (kind_col, kind), (seed_col, seed)] = fields[..]
    else {
        return Err(parse_err(
            1,
            1,
            format!("expected `rows cols kind seed` header, got {} fields", fields.len()),
        ));
    };
    let rows: usize = rows
        .parse()
        .map_err(|_| parse_err(1, rows_col, format!("invalid row count `{rows}`")))?;
    let cols: usize = cols
        .parse()
        .map_err(|_| parse_err(1, cols_col, format!("invalid column count `{cols}`")))?;
    let seed: u64 = seed
        .parse()
        .map_err(|_| parse_err(1, seed_col, format!("invalid seed `{seed}`")))?;

    let matrix = match kind {
        KIND_RANDOM | KIND_TOEPLITZ => {
            if let Some((number, _)) = lines.next() {
                return Err(parse_err(number, 1, "seeded matrix kinds take no body rows"));
            }
            let built = if kind == KIND_RANDOM {
                random_matrix(HashSeed(seed), rows, cols)
            } else {
                toeplitz_matrix(HashSeed(seed), rows, cols)
            };
            built.map_err(|e| parse_err(1, rows_col, e.to_string()))?
        }
        KIND_MATERIALIZED => {
            let mut body = Vec::with_capacity(rows);
            for (number, line) in lines.by_ref() {
                if body.len() == rows {
                    return Err(parse_err(number, 1, format!("expected {rows} rows, found more")));
                }
                if line.is_empty() {
                    return Err(parse_err(number, 1, "blank line"));
                }
                body.push(BitVector::from_hex(line, cols).map_err(|e| hex_err(number, e))?);
            }
            if body.len() != rows {
                return Err(parse_err(
                    body.len() + 2,
                    1,
                    format!("expected {rows} rows, found {}", body.len()),
                ));
            }
            BitMatrix::from_rows(body).map_err(|e| parse_err(2, 1, e.to_string()))?
        }
        _ => {
            return Err(parse_err(
                1,
                kind_col,
                format!(
                    "unknown kind `{kind}` (expected {KIND_RANDOM}, {KIND_TOEPLITZ}, \
                     or {KIND_MATERIALIZED})"
                ),
            ))
        }
    };
    Ok(matrix)
}

/// Writes a matrix file to disk; see [`matrix_file_to_string`].
pub fn write_matrix_file(path: &Path, m: &BitMatrix) -> Result<(), FileError> {
    fs::write(path, matrix_file_to_string(m))?;
    Ok(())
}

/// Reads a matrix file from disk; see [`matrix_file_from_str`].
pub fn read_matrix_file(path: &Path) -> Result<BitMatrix, FileError> {
    matrix_file_from_str(&fs::read_to_string(path)?)
}
