//! Packed bit vectors, seeded GF(2) matrices, and the hashing
//! operations: key extraction k = R·s, truncation, and row submatrices.
//!
//! Bit order convention, stated once so golden vectors are portable:
//! bit i of a vector lives in word i/64 at position 63 - (i mod 64),
//! i.e. most significant bit first within each 64-bit word, and hex
//! serialization reads nibbles in the same order.  Matrix bits drawn
//! from a seed are consumed row-major, MSB-first, one 64-bit generator
//! output per 64 bits.

use thiserror::Error;

use crate::rng::BitStream;

/// Errors from dimension and range checks in this module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HashingError {
    #[error("matrix needs at least one row")]
    EmptyMatrix,
    #[error("{n} rows do not fit {cols} columns for this matrix kind")]
    TooManyRows { n: usize, cols: usize },
    #[error("row {row} has {got} bits, expected {expected}")]
    RaggedRow { row: usize, expected: usize, got: usize },
    #[error("expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("requested the first {want} of {have} available")]
    RangeExceeded { want: usize, have: usize },
    #[error("requested length must be at least one")]
    EmptyRange,
}

/// Errors from hex parsing of bit vectors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HexError {
    #[error("invalid hex digit at position {index}")]
    InvalidDigit { index: usize },
    #[error("expected {expected} hex digits for {bits} bits, got {got}")]
    DigitCount { expected: usize, got: usize, bits: usize },
    #[error("padding bits beyond the declared length must be zero")]
    NonzeroPadding,
}

/// A fixed-length bit string packed into 64-bit words.
///
/// Trailing pad bits in the last word are always zero, so equality and
/// hashing can be derived from the raw words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    /// An all-zero vector of `len` bits.
    pub fn zeros(len: usize) -> Self {
        BitVector { words: vec![0; len.div_ceil(64)], len }
    }

    /// Builds from 0/1 values, index 0 first.
    ///
    /// Panics if a value is not 0 or 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            assert!(b <= 1, "bit values must be 0 or 1");
            if b == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// Fills `len` bits from a seeded bit stream.
    pub fn from_stream(stream: &mut BitStream, len: usize) -> Self {
        let mut v = BitVector::zeros(len);
        for i in 0..len {
            if stream.next_bit() {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The packed words; bit i sits in word i/64 at position 63 - i%64.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Reads bit `i`.  Panics if out of range.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for {} bits", self.len);
        self.words[i / 64] >> (63 - i % 64) & 1 == 1
    }

    /// Writes bit `i`.  Panics if out of range.
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for {} bits", self.len);
        let mask = 1u64 << (63 - i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Bitwise XOR.  Panics on length mismatch.
    pub fn xor(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "XOR needs equal lengths");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        // Both pads are zero, so the XOR pad stays zero.
        BitVector { words, len: self.len }
    }

    /// The first `n2` bits.
    ///
    /// # Errors
    /// `EmptyRange` if n2 = 0; `RangeExceeded` if n2 exceeds the length.
    pub fn truncated(&self, n2: usize) -> Result<BitVector, HashingError> {
        if n2 == 0 {
            return Err(HashingError::EmptyRange);
        }
        if n2 > self.len {
            return Err(HashingError::RangeExceeded { want: n2, have: self.len });
        }
        let mut words: Vec<u64> = self.words[..n2.div_ceil(64)].to_vec();
        let pad = n2 % 64;
        if pad != 0 {
            *words.last_mut().expect("n2 >= 1") &= u64::MAX << (64 - pad);
        }
        Ok(BitVector { words, len: n2 })
    }

    /// Uppercase hex, MSB-first, ceil(len/4) digits, zero pad bits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut out = String::with_capacity(digits);
        for d in 0..digits {
            // Nibbles never straddle words because 4 divides 64.
            let nibble = self.words[d / 16] >> (60 - 4 * (d % 16)) & 0xF;
            out.push(char::from_digit(nibble as u32, 16).expect("nibble").to_ascii_uppercase());
        }
        out
    }

    /// Parses hex produced by `to_hex` into a vector of `len` bits.
    ///
    /// # Errors
    /// Rejects wrong digit counts, non-hex characters, and nonzero bits
    /// beyond the declared length.
    pub fn from_hex(s: &str, len: usize) -> Result<BitVector, HexError> {
        let expected = len.div_ceil(4);
        let got = s.chars().count();
        if got != expected {
            return Err(HexError::DigitCount { expected, got, bits: len });
        }
        let mut v = BitVector::zeros(len);
        for (d, ch) in s.chars().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or(HexError::InvalidDigit { index: d })? as u64;
            v.words[d / 16] |= nibble << (60 - 4 * (d % 16));
        }
        // Any bit set past `len` means the hex disagrees with the
        // declared length.
        let pad = len % 64;
        if pad != 0 && v.words[len / 64] & (u64::MAX >> pad) != 0 {
            return Err(HexError::NonzeroPadding);
        }
        Ok(v)
    }
}

/// How a matrix's bits were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// Every bit drawn independently from the seed stream.
    ExplicitRandom,
    /// Modified Toeplitz layout [I | T] from a diagonal bit string.
    ModifiedToeplitz,
}

/// A 64-bit seed that deterministically regenerates a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashSeed(pub u64);

impl HashSeed {
    /// The diagonal bit string for a modified Toeplitz matrix with
    /// `cols` columns: the first cols - 1 bits of the seed stream.
    pub fn diagonal_bits(self, cols: usize) -> BitVector {
        let mut stream = BitStream::new(self.0);
        BitVector::from_stream(&mut stream, cols.saturating_sub(1))
    }
}

/// An n×N GF(2) matrix of row bit vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
    kind: MatrixKind,
    seed: Option<HashSeed>,
}

impl BitMatrix {
    /// Wraps explicit rows; kind is `ExplicitRandom`, no seed.
    ///
    /// # Errors
    /// `EmptyMatrix` without rows; `RaggedRow` on unequal lengths.
    pub fn from_rows(rows: Vec<BitVector>) -> Result<BitMatrix, HashingError> {
        let cols = rows.first().ok_or(HashingError::EmptyMatrix)?.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(HashingError::RaggedRow { row: i, expected: cols, got: row.len() });
            }
        }
        Ok(BitMatrix { rows, cols, kind: MatrixKind::ExplicitRandom, seed: None })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// The seed that regenerates this exact matrix, when one exists.
    /// Row slices drop the seed because regeneration at the smaller
    /// shape would not reproduce them.
    pub fn seed(&self) -> Option<HashSeed> {
        self.seed
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    /// Hashes a sifted string: k[i] = parity(row i AND s).
    ///
    /// # Errors
    /// `LengthMismatch` if s has a different length than the columns.
    pub fn hash_key(&self, s: &BitVector) -> Result<BitVector, HashingError> {
        if s.len() != self.cols {
            return Err(HashingError::LengthMismatch { expected: self.cols, got: s.len() });
        }
        let mut k = BitVector::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let mut parity = 0u32;
            for (rw, sw) in row.words.iter().zip(&s.words) {
                parity ^= (rw & sw).count_ones();
            }
            if parity & 1 == 1 {
                k.set(i, true);
            }
        }
        Ok(k)
    }

    /// The matrix of the first `n2` rows; preserves kind.
    ///
    /// # Errors
    /// `EmptyRange` if n2 = 0; `RangeExceeded` if n2 exceeds the rows.
    pub fn submatrix_rows(&self, n2: usize) -> Result<BitMatrix, HashingError> {
        if n2 == 0 {
            return Err(HashingError::EmptyRange);
        }
        if n2 > self.rows.len() {
            return Err(HashingError::RangeExceeded { want: n2, have: self.rows.len() });
        }
        Ok(BitMatrix {
            rows: self.rows[..n2].to_vec(),
            cols: self.cols,
            kind: self.kind,
            seed: if n2 == self.rows.len() { self.seed } else { None },
        })
    }
}

/// An n×N matrix with every bit drawn from the seed stream, row-major.
///
/// # Errors
/// `EmptyMatrix` if n = 0; `TooManyRows` if n exceeds N.
pub fn random_matrix(seed: HashSeed, n: usize, cols: usize) -> Result<BitMatrix, HashingError> {
    if n == 0 {
        return Err(HashingError::EmptyMatrix);
    }
    if n > cols {
        return Err(HashingError::TooManyRows { n, cols });
    }
    let mut stream = BitStream::new(seed.0);
    let rows = (0..n).map(|_| BitVector::from_stream(&mut stream, cols)).collect();
    Ok(BitMatrix { rows, cols, kind: MatrixKind::ExplicitRandom, seed: Some(seed) })
}

/// The modified Toeplitz matrix H = [I | T] for a seed-derived
/// diagonal string.
///
/// # Errors
/// `EmptyMatrix` if n = 0; `TooManyRows` if n >= N (the Toeplitz block
/// needs at least one column).
pub fn toeplitz_matrix(seed: HashSeed, n: usize, cols: usize) -> Result<BitMatrix, HashingError> {
    if n == 0 {
        return Err(HashingError::EmptyMatrix);
    }
    if n >= cols {
        return Err(HashingError::TooManyRows { n, cols });
    }
    let mut m = toeplitz_from_diagonal(&seed.diagonal_bits(cols), n, cols)?;
    m.seed = Some(seed);
    Ok(m)
}

/// The modified Toeplitz matrix H = [I | T] over an explicit diagonal
/// string d of length N - 1.
///
/// The n×(N-n) block T is constant along diagonals, with first row and
/// first column read from d: T[i][j] = d[j - i + n - 1].
///
/// # Errors
/// As [`toeplitz_matrix`], plus `LengthMismatch` if d is not N - 1 bits.
pub fn toeplitz_from_diagonal(
    diagonal: &BitVector,
    n: usize,
    cols: usize,
) -> Result<BitMatrix, HashingError> {
    if n == 0 {
        return Err(HashingError::EmptyMatrix);
    }
    if n >= cols {
        return Err(HashingError::TooManyRows { n, cols });
    }
    if diagonal.len() != cols - 1 {
        return Err(HashingError::LengthMismatch { expected: cols - 1, got: diagonal.len() });
    }
    let rows = (0..n)
        .map(|i| {
            let mut row = BitVector::zeros(cols);
            row.set(i, true);
            for j in 0..cols - n {
                if diagonal.get(j + n - 1 - i) {
                    row.set(n + j, true);
                }
            }
            row
        })
        .collect();
    Ok(BitMatrix { rows, cols, kind: MatrixKind::ModifiedToeplitz, seed: None })
}
