//! Desk-scale brute-force verification of the classical claims behind
//! the bounds: exact guessing probabilities under explicit attacker
//! side information, truncation monotonicity, and two-universality,
//! all by exhaustive enumeration with exact rational arithmetic.
//!
//! The attacker model is classical on purpose: she knows some bit
//! positions of the sifted string, and the remaining bits are uniform.
//! That is enough to falsify the implemented inequalities if they were
//! coded wrong, which is this module's whole job.  No verdict here
//! depends on floating point.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::hashing::{BitMatrix, BitVector, HashingError};

/// Enumeration budget: at most 2^24 consistent strings.
pub const MAX_FREE_BITS: usize = 24;
/// Enumeration budget: at most 2^16 matrices.
pub const MAX_MATRIX_BITS: usize = 16;

/// Errors from budgets and model validation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("enumeration budget exceeded: {what} needs 2^{bits} cases, limit 2^{limit}")]
    Budget { what: &'static str, bits: usize, limit: usize },
    #[error("matrix has {cols} columns but the sifted string has {n_sifted} bits")]
    DimensionMismatch { cols: usize, n_sifted: usize },
    #[error("known position {position} is out of range for {n_sifted} sifted bits")]
    PositionOutOfRange { position: usize, n_sifted: usize },
    #[error("known position {position} appears more than once")]
    DuplicatePosition { position: usize },
    #[error(transparent)]
    Hashing(#[from] HashingError),
}

/// What the attacker knows about an N-bit sifted string: t fixed bit
/// positions with their values.  The induced distribution is uniform
/// over the 2^(N-t) consistent strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EveKnowledge {
    n_sifted: usize,
    known: Vec<(usize, bool)>,
}

impl EveKnowledge {
    /// Validates and wraps a set of known (position, value) pairs.
    ///
    /// # Errors
    /// Positions must be distinct and below the sifted length.
    pub fn new(n_sifted: usize, known: &[(usize, bool)]) -> Result<Self, OracleError> {
        let mut sorted = known.to_vec();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(OracleError::DuplicatePosition { position: pair[0].0 });
            }
        }
        for &(position, _) in &sorted {
            if position >= n_sifted {
                return Err(OracleError::PositionOutOfRange { position, n_sifted });
            }
        }
        Ok(EveKnowledge { n_sifted, known: sorted })
    }

    /// An attacker who knows nothing about the string.
    pub fn empty(n_sifted: usize) -> Self {
        EveKnowledge { n_sifted, known: Vec::new() }
    }

    pub fn n_sifted(&self) -> usize {
        self.n_sifted
    }

    /// Number of known bits t.
    pub fn t(&self) -> usize {
        self.known.len()
    }

    fn free_positions(&self) -> Vec<usize> {
        let mut known_iter = self.known.iter().peekable();
        (0..self.n_sifted)
            .filter(|&p| {
                if known_iter.peek().is_some_and(|&&(kp, _)| kp == p) {
                    known_iter.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    }
}

/// Exact result of one guessing-probability enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessReport {
    /// max over keys of Pr[key], as an exact rational.
    pub p_exact: BigRational,
    /// The most likely key; ties break toward the numerically
    /// smallest, so the report is deterministic.
    pub argmax_key: BitVector,
    /// Number of keys with nonzero probability.
    pub support: u64,
}

/// Per-key counts over all consistent strings, keys ascending.
fn tally(m: &BitMatrix, eve: &EveKnowledge) -> Result<BTreeMap<BitVector, u64>, OracleError> {
    if m.cols() != eve.n_sifted {
        return Err(OracleError::DimensionMismatch { cols: m.cols(), n_sifted: eve.n_sifted });
    }
    let free_positions = eve.free_positions();
    let free = free_positions.len();
    if free > MAX_FREE_BITS {
        return Err(OracleError::Budget {
            what: "consistent sifted strings",
            bits: free,
            limit: MAX_FREE_BITS,
        });
    }
    let n = m.rows();

    // Key bit i for string s is parity(row i AND s), linear in s, so
    // it splits into the known-bit contribution plus a parity over the
    // free bits selected by the enumeration mask.
    let mut base = BitVector::zeros(eve.n_sifted);
    for &(position, value) in &eve.known {
        base.set(position, value);
    }
    let base_key = m.hash_key(&base)?;
    let row_free_masks: Vec<u64> = (0..n)
        .map(|i| {
            let mut mask = 0u64;
            for (b, &position) in free_positions.iter().enumerate() {
                if m.get(i, position) {
                    mask |= 1 << b;
                }
            }
            mask
        })
        .collect();

    let mut counts: BTreeMap<BitVector, u64> = BTreeMap::new();
    if n <= 20 {
        // Packed fast path: key bit i at index bit (n-1-i), so index
        // order equals the MSB-first key order.
        let mut packed_base = 0u32;
        for i in 0..n {
            if base_key.get(i) {
                packed_base |= 1 << (n - 1 - i);
            }
        }
        let mut packed = vec![0u64; 1 << n];
        for mask in 0..(1u64 << free) {
            let mut key = packed_base;
            for (i, row_mask) in row_free_masks.iter().enumerate() {
                key ^= ((row_mask & mask).count_ones() & 1) << (n - 1 - i);
            }
            packed[key as usize] += 1;
        }
        for (index, &count) in packed.iter().enumerate() {
            if count > 0 {
                let mut key = BitVector::zeros(n);
                for i in 0..n {
                    if index >> (n - 1 - i) & 1 == 1 {
                        key.set(i, true);
                    }
                }
                counts.insert(key, count);
            }
        }
    } else {
        for mask in 0..(1u64 << free) {
            let mut key = base_key.clone();
            for (i, row_mask) in row_free_masks.iter().enumerate() {
                if (row_mask & mask).count_ones() & 1 == 1 {
                    key.set(i, !base_key.get(i));
                }
            }
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

/// Enumerates all consistent sifted strings and returns the exact
/// maximum probability of any key value.
///
/// # Errors
/// `Budget` if more than 2^24 strings would be enumerated;
/// `DimensionMismatch` if the matrix does not fit the sifted length.
pub fn exact_guessing_probability(
    m: &BitMatrix,
    eve: &EveKnowledge,
) -> Result<GuessReport, OracleError> {
    let counts = tally(m, eve)?;
    let free = eve.n_sifted - eve.t();
    let (argmax_key, max_count) = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(k, &c)| (k.clone(), c))
        .expect("at least one consistent string exists");
    Ok(GuessReport {
        p_exact: BigRational::new(BigInt::from(max_count), BigInt::from(1u8) << free),
        argmax_key,
        support: counts.len() as u64,
    })
}

/// The full key distribution over consistent strings: (key, count)
/// pairs in ascending key order, counts out of 2^(N-t).
///
/// # Errors
/// As [`exact_guessing_probability`].
pub fn key_distribution(
    m: &BitMatrix,
    eve: &EveKnowledge,
) -> Result<Vec<(BitVector, u64)>, OracleError> {
    Ok(tally(m, eve)?.into_iter().collect())
}

/// Outcome of one truncation-monotonicity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationCheck {
    /// Whether p_full <= p_truncated held, compared exactly.
    pub holds: bool,
    /// Guessing probability of the full key.
    pub p_full: BigRational,
    /// Guessing probability of the truncated key.
    pub p_truncated: BigRational,
}

/// Verifies that truncating the key to its first n2 bits cannot lower
/// the attacker's guessing probability, by enumerating both sides.
///
/// # Errors
/// As [`exact_guessing_probability`], plus range errors from the row
/// submatrix.
pub fn truncation_check(
    m: &BitMatrix,
    eve: &EveKnowledge,
    n2: usize,
) -> Result<TruncationCheck, OracleError> {
    let full = exact_guessing_probability(m, eve)?;
    let truncated = exact_guessing_probability(&m.submatrix_rows(n2)?, eve)?;
    Ok(TruncationCheck {
        holds: full.p_exact <= truncated.p_exact,
        p_full: full.p_exact,
        p_truncated: truncated.p_exact,
    })
}

/// Enumerates every n×N matrix and returns the exact fraction that
/// hashes x and y to the same key.  Equals 2^-n whenever x != y; the
/// degenerate case x = y returns 1 and carries no universality
/// information.
///
/// # Errors
/// `Budget` beyond 2^16 matrices; `DimensionMismatch` if x or y is not
/// N bits; `EmptyMatrix` via validation if n = 0.
pub fn collision_rate(
    n: usize,
    cols: usize,
    x: &BitVector,
    y: &BitVector,
) -> Result<BigRational, OracleError> {
    if n == 0 || cols == 0 {
        return Err(OracleError::Hashing(HashingError::EmptyMatrix));
    }
    if x.len() != cols {
        return Err(OracleError::DimensionMismatch { cols, n_sifted: x.len() });
    }
    if y.len() != cols {
        return Err(OracleError::DimensionMismatch { cols, n_sifted: y.len() });
    }
    let bits = n * cols;
    if bits > MAX_MATRIX_BITS {
        return Err(OracleError::Budget { what: "matrices", bits, limit: MAX_MATRIX_BITS });
    }
    let pack = |v: &BitVector| -> u32 {
        let mut packed = 0u32;
        for j in 0..cols {
            if v.get(j) {
                packed |= 1 << j;
            }
        }
        packed
    };
    let (xb, yb) = (pack(x), pack(y));
    let chunk_mask = (1u32 << cols) - 1;
    let mut collisions = 0u64;
    for m in 0..(1u64 << bits) {
        let mut same = true;
        for r in 0..n {
            let chunk = (m >> (r * cols)) as u32 & chunk_mask;
            if (chunk & xb).count_ones() & 1 != (chunk & yb).count_ones() & 1 {
                same = false;
                break;
            }
        }
        if same {
            collisions += 1;
        }
    }
    Ok(BigRational::new(BigInt::from(collisions), BigInt::from(1u8) << bits))
}

/// Rank of a matrix over GF(2), by Gaussian elimination on row words.
pub fn gf2_rank(m: &BitMatrix) -> usize {
    let mut rows: Vec<Vec<u64>> = (0..m.rows()).map(|i| m.row(i).words().to_vec()).collect();
    let words = m.cols().div_ceil(64);
    let mut rank = 0;
    for col in 0..m.cols() {
        let (word, mask) = (col / 64, 1u64 << (63 - col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][word] & mask != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][word] & mask != 0 {
                for w in 0..words {
                    rows[r][w] ^= rows[rank][w];
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hashing::{random_matrix, BitMatrix, HashSeed};
    use num_traits::One;

    fn rational(num: u64, den_log2: usize) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(1u8) << den_log2)
    }

    fn identity(n: usize, cols: usize) -> BitMatrix {
        let rows = (0..n)
            .map(|i| {
                let mut row = BitVector::zeros(cols);
                row.set(i, true);
                row
            })
            .collect();
        BitMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn knowing_everything_makes_the_key_certain() {
        let m = random_matrix(HashSeed(3), 4, 6).unwrap();
        let known: Vec<(usize, bool)> = (0..6).map(|p| (p, p % 2 == 0)).collect();
        let eve = EveKnowledge::new(6, &known).unwrap();
        let report = exact_guessing_probability(&m, &eve).unwrap();
        assert!(report.p_exact.is_one());
        assert_eq!(report.support, 1);
    }

    #[test]
    fn blind_attacker_against_identity_rows_gets_uniform_keys() {
        let m = identity(4, 4);
        let report = exact_guessing_probability(&m, &EveKnowledge::empty(4)).unwrap();
        assert_eq!(report.p_exact, rational(1, 4));
        assert_eq!(report.support, 16);
        assert_eq!(report.argmax_key, BitVector::zeros(4));
    }

    #[test]
    fn constant_key_is_always_guessed() {
        let m = BitMatrix::from_rows(vec![BitVector::zeros(5), BitVector::zeros(5)]).unwrap();
        let report = exact_guessing_probability(&m, &EveKnowledge::empty(5)).unwrap();
        assert!(report.p_exact.is_one());
        assert_eq!(report.support, 1);
        assert_eq!(report.argmax_key, BitVector::zeros(2));
    }

    #[test]
    fn full_rank_with_no_knowledge_is_exactly_uniform() {
        let mut checked = 0;
        for seed in 0..20u64 {
            let m = random_matrix(HashSeed(seed), 3, 7).unwrap();
            if gf2_rank(&m) < 3 {
                continue;
            }
            let report = exact_guessing_probability(&m, &EveKnowledge::empty(7)).unwrap();
            assert_eq!(report.p_exact, rational(1, 3), "seed {seed}");
            checked += 1;
        }
        assert!(checked > 0, "no full-rank sample in range");
    }

    #[test]
    fn partial_knowledge_only_helps() {
        let m = random_matrix(HashSeed(11), 3, 8).unwrap();
        let blind = exact_guessing_probability(&m, &EveKnowledge::empty(8)).unwrap();
        let eve = EveKnowledge::new(8, &[(0, true), (5, false)]).unwrap();
        let informed = exact_guessing_probability(&m, &eve).unwrap();
        assert!(informed.p_exact >= blind.p_exact);
    }

    #[test]
    fn knowledge_validation_catches_bad_positions() {
        assert_eq!(
            EveKnowledge::new(4, &[(4, true)]),
            Err(OracleError::PositionOutOfRange { position: 4, n_sifted: 4 })
        );
        assert_eq!(
            EveKnowledge::new(4, &[(1, true), (1, false)]),
            Err(OracleError::DuplicatePosition { position: 1 })
        );
    }

    #[test]
    fn string_budget_is_enforced() {
        let m = random_matrix(HashSeed(0), 1, 25).unwrap();
        assert!(matches!(
            exact_guessing_probability(&m, &EveKnowledge::empty(25)),
            Err(OracleError::Budget { .. })
        ));
        // Knowing one bit brings the same instance inside the budget.
        let eve = EveKnowledge::new(25, &[(3, true)]).unwrap();
        assert!(exact_guessing_probability(&m, &eve).is_ok());
    }

    #[test]
    fn truncation_check_passes_on_a_midsize_case() {
        let m = random_matrix(HashSeed(21), 6, 10).unwrap();
        let eve = EveKnowledge::new(10, &[(0, true), (4, false), (9, true)]).unwrap();
        let check = truncation_check(&m, &eve, 3).unwrap();
        assert!(check.holds);
        assert!(check.p_full <= check.p_truncated);
    }

    #[test]
    fn truncation_to_full_length_changes_nothing() {
        let m = random_matrix(HashSeed(5), 4, 9).unwrap();
        let eve = EveKnowledge::new(9, &[(2, true)]).unwrap();
        let check = truncation_check(&m, &eve, 4).unwrap();
        assert!(check.holds);
        assert_eq!(check.p_full, check.p_truncated);
    }

    #[test]
    fn truncating_a_full_rank_key_to_one_bit_gives_a_coin() {
        let m = identity(3, 5);
        let check = truncation_check(&m, &EveKnowledge::empty(5), 1).unwrap();
        assert!(check.holds);
        assert_eq!(check.p_full, rational(1, 3));
        assert_eq!(check.p_truncated, rational(1, 1));
    }

    #[test]
    fn collision_rate_matches_hand_enumeration() {
        let x = BitVector::from_bits(&[0, 1]);
        let y = BitVector::from_bits(&[1, 0]);
        assert_eq!(collision_rate(1, 2, &x, &y).unwrap(), rational(1, 1));
        assert_eq!(collision_rate(2, 2, &x, &y).unwrap(), rational(1, 2));
        assert!(collision_rate(1, 2, &x, &x).unwrap().is_one());
    }

    #[test]
    fn collision_budget_is_enforced() {
        let x = BitVector::zeros(17);
        let mut y = BitVector::zeros(17);
        y.set(0, true);
        assert!(matches!(
            collision_rate(1, 17, &x, &y),
            Err(OracleError::Budget { .. })
        ));
    }

    #[test]
    fn distribution_counts_sum_to_the_string_count() {
        let m = random_matrix(HashSeed(9), 3, 9).unwrap();
        let eve = EveKnowledge::new(9, &[(1, false)]).unwrap();
        let dist = key_distribution(&m, &eve).unwrap();
        let total: u64 = dist.iter().map(|(_, c)| c).sum();
        assert_eq!(total, 1 << 8);
        // Ascending, duplicate-free key order.
        for pair in dist.windows(2) {
            assert!(pair[0].0 < pair[1].0);
        }
    }

    #[test]
    fn rank_computation_on_known_matrices() {
        assert_eq!(gf2_rank(&identity(4, 4)), 4);
        let zero = BitMatrix::from_rows(vec![BitVector::zeros(6); 3]).unwrap();
        assert_eq!(gf2_rank(&zero), 0);
        let dup = BitMatrix::from_rows(vec![
            BitVector::from_bits(&[1, 1, 0]),
            BitVector::from_bits(&[1, 1, 0]),
        ])
        .unwrap();
        assert_eq!(gf2_rank(&dup), 1);
    }

    #[test]
    fn packed_and_generic_tally_paths_agree() {
        // 22 rows forces the generic path; compare against the packed
        // path on the leading 20 rows plus direct reasoning.
        let m = random_matrix(HashSeed(33), 22, 22).unwrap();
        let eve = EveKnowledge::new(22, &(0..14).map(|p| (p, p % 3 == 0)).collect::<Vec<_>>())
            .unwrap();
        let full = exact_guessing_probability(&m, &eve).unwrap();
        let top = exact_guessing_probability(&m.submatrix_rows(20).unwrap(), &eve).unwrap();
        assert!(full.p_exact <= top.p_exact);
        let total: u64 = key_distribution(&m, &eve).unwrap().iter().map(|(_, c)| c).sum();
        assert_eq!(total, 1 << 8);
    }
}
