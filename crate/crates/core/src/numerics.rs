//! Log-domain probability arithmetic and the binary entropy function.
//!
//! Guessing probabilities in this crate span thousands of orders of
//! magnitude, far below the smallest positive `f64`.  Probabilities are
//! therefore carried as base-2 logarithms wrapped in [`Log2Prob`], and
//! sums of probabilities go through [`log2_add`], which never leaves
//! the log domain.

use std::fmt;
use std::ops::Add;

use thiserror::Error;

/// Errors from numeric constructors and domain checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    /// The binary entropy function is defined on [0, 1] only.
    #[error("binary entropy input {0} lies outside [0, 1]")]
    EntropyDomain(f64),
    /// Probabilities live in [0, 1], so their base-2 logarithm must be
    /// a non-positive number (or negative infinity for zero).
    #[error("{0} is not the base-2 logarithm of a probability in [0, 1]")]
    NotAProbability(f64),
    /// Decimal probability strings look like "c×10^e", or "0".
    #[error("cannot parse {0:?} as a decimal probability string")]
    MalformedDecimal(String),
}

/// A probability stored as its base-2 logarithm.
///
/// The wrapped value is always non-positive and never NaN; probability
/// zero is negative infinity.  Ordering matches the ordering of the
/// underlying probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Log2Prob(f64);

impl Log2Prob {
    /// Probability 0.
    pub const ZERO: Log2Prob = Log2Prob(f64::NEG_INFINITY);
    /// Probability 1.
    pub const ONE: Log2Prob = Log2Prob(0.0);

    /// Wraps a base-2 logarithm of a probability.
    ///
    /// # Errors
    /// Rejects NaN and values above 0 (probabilities above 1).
    pub fn new(log2: f64) -> Result<Self, NumericsError> {
        if log2.is_nan() || log2 > 0.0 {
            return Err(NumericsError::NotAProbability(log2));
        }
        // Normalize -0.0 so equal probabilities compare bitwise equal.
        Ok(Log2Prob(if log2 == 0.0 { 0.0 } else { log2 }))
    }

    /// Wraps a plain probability from [0, 1].
    pub fn from_prob(p: f64) -> Result<Self, NumericsError> {
        if p.is_nan() || !(0.0..=1.0).contains(&p) {
            return Err(NumericsError::NotAProbability(p));
        }
        Self::new(p.log2())
    }

    /// The base-2 logarithm this value wraps.
    pub fn log2(self) -> f64 {
        self.0
    }

    /// True for probability zero.
    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// The plain probability; underflows to 0.0 below about 2^-1074.
    pub fn prob(self) -> f64 {
        self.0.exp2()
    }

    /// Renders as "c×10^e" with 1 <= c < 10, or "0" for probability 0.
    ///
    /// The exponent e = floor(log10 p) is truncated, never rounded;
    /// only the coefficient rounds, to `sig_digits` significant digits.
    pub fn to_decimal_string(self, sig_digits: usize) -> String {
        assert!(sig_digits >= 1, "need at least one significant digit");
        if self.0 == f64::NEG_INFINITY {
            return "0".to_string();
        }
        let exact = self.0 * std::f64::consts::LOG10_2;
        let mut e = exact.floor();
        let mut c = 10f64.powf(exact - e);
        // Rounding the mantissa at the requested precision can push it
        // to 10.0; renormalize so it stays in [1, 10).
        let rounded: f64 = format!("{:.*}", sig_digits - 1, c).parse().expect("formatted float");
        if rounded >= 10.0 {
            e += 1.0;
            c /= 10.0;
        }
        format!("{:.*}×10^{}", sig_digits - 1, c, e as i64)
    }
}

/// Parses a "c×10^e" string (or "0") produced by `to_decimal_string`.
pub fn from_decimal_string(s: &str) -> Result<Log2Prob, NumericsError> {
    if s == "0" {
        return Ok(Log2Prob::ZERO);
    }
    let malformed = || NumericsError::MalformedDecimal(s.to_string());
    let (c_str, e_str) = s.split_once("×10^").ok_or_else(malformed)?;
    let c: f64 = c_str.parse().map_err(|_| malformed())?;
    let e: f64 = e_str.parse().map_err(|_| malformed())?;
    if !(c > 0.0) || !c.is_finite() || e.fract() != 0.0 {
        return Err(malformed());
    }
    Log2Prob::new(c.log2() + e * std::f64::consts::LOG2_10)
}

impl Eq for Log2Prob {}

impl PartialOrd for Log2Prob {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Log2Prob {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Construction excludes NaN and normalizes -0.0, so the IEEE
        // total order agrees with the probability order.
        self.0.total_cmp(&other.0)
    }
}

impl Add for Log2Prob {
    type Output = Log2Prob;

    /// Adds the underlying probabilities, saturating at 1.
    fn add(self, rhs: Log2Prob) -> Log2Prob {
        Log2Prob(log2_add(self.0, rhs.0).min(0.0))
    }
}

impl fmt::Display for Log2Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(3))
    }
}

/// Computes log2(2^a + 2^b) without leaving the log domain.
///
/// Stable when the inputs differ by thousands of orders of magnitude:
/// the result is max + log2(1 + 2^(min-max)), and the correction term
/// underflows gracefully to zero.
pub fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        // Covers 0 + 0 as well: both operands negative infinity.
        return hi;
    }
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// Binary entropy h(x) = -x log2 x - (1-x) log2 (1-x), in bits.
///
/// # Errors
/// Rejects inputs outside [0, 1] (including NaN).
pub fn binary_entropy(x: f64) -> Result<f64, NumericsError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(NumericsError::EntropyDomain(x));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}
