//! The finite-key length formula, its inverse solver, the fixed-point
//! key length, and the guessing-probability bounds built from them.
//!
//! Everything revolves around one scalar relation: an eps-secure key of
//! length n is extractable when
//!
//!   n <= N·[1 - h(Q + mu)] - f·N·h(Q) - log2(2/eps^3)
//!
//! where h is the binary entropy, Q the channel error tolerance, f the
//! error-correction inefficiency, and mu the statistical fluctuation
//! term sqrt((N+Nz)/(N·Nz) · (Nz+1)/Nz · ln(2/eps)).  The solvers
//! invert that relation for eps at fixed length and locate the fixed
//! point 2^-n2 = eps(n2), which yields the tightened bound 2^-(n2-1)
//! on the guessing probability of the full key.

use std::f64::consts::{LN_2, LOG10_2};

use thiserror::Error;

use crate::numerics::{binary_entropy, Log2Prob};

/// Channel error tolerance used by the reference parameter sets.
pub const DEFAULT_Q_TOL: f64 = 0.0214;
/// Error-correction inefficiency used by the reference parameter sets.
pub const DEFAULT_F: f64 = 1.1;
/// Target security level used by the reference parameter sets.
pub const DEFAULT_EPSILON: f64 = 1e-9;
/// Fraction of the sifted string that feeds key generation; the rest
/// estimates the channel error.
pub const DEFAULT_KEY_FRACTION: f64 = 0.78;

/// Bisection tolerance on the log2/bit axis for both solvers.
const SOLVER_TOLERANCE: f64 = 1e-6;

/// Errors from parameter validation and the bound solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("mu is undefined for log2(eps) = {0}; eps must not exceed 2")]
    MuDomain(f64),
    #[error(
        "error tolerance plus fluctuation term reaches {q_plus_mu:.4}; \
         the entropy term is only monotone below 0.5"
    )]
    Infeasible { q_plus_mu: f64 },
    #[error("no eps solves the length equation for n2 = {n2} within the search bracket")]
    NoSolution { n2: u64 },
    #[error(
        "key length {n1} does not exceed the fixed-point length {n2}; \
         the tightened bound needs n1 > n2"
    )]
    NotApplicable { n1: u64, n2: u64 },
    #[error("known bits t = {t} exceed the key length n2 = {n2}")]
    KnownBitsExceedKey { t: u64, n2: u64 },
    #[error("the parameters admit no key at the target security level")]
    EmptyKey,
}

/// Parameters of one protocol run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    n_tol: u64,
    n_key: u64,
    n_pe: u64,
    q_tol: f64,
    f: f64,
    eps_target: Log2Prob,
}

impl ProtocolParams {
    /// Validates and wraps a full parameter set.
    ///
    /// `n_tol` is the total sifted length, split into `n_key` bits for
    /// key generation and `n_pe` bits for parameter estimation.
    ///
    /// # Errors
    /// `InvalidParams` unless n_key >= 1, n_pe >= 1,
    /// n_key + n_pe <= n_tol, 0 <= q_tol < 0.5, f >= 1, and the target
    /// eps is strictly below 1.
    pub fn new(
        n_tol: u64,
        n_key: u64,
        n_pe: u64,
        q_tol: f64,
        f: f64,
        eps_target: Log2Prob,
    ) -> Result<Self, BoundsError> {
        let invalid = |msg: &str| Err(BoundsError::InvalidParams(msg.to_string()));
        if n_key == 0 {
            return invalid("key-generation length N must be at least 1");
        }
        if n_pe == 0 {
            return invalid("parameter-estimation length N_z must be at least 1");
        }
        if n_key.checked_add(n_pe).is_none_or(|sum| sum > n_tol) {
            return invalid("N + N_z must not exceed the total sifted length N_tol");
        }
        if !(0.0..0.5).contains(&q_tol) {
            return invalid("error tolerance Q_tol must satisfy 0 <= Q_tol < 0.5");
        }
        if !(f >= 1.0) {
            return invalid("error-correction inefficiency f must be at least 1");
        }
        if !(eps_target.log2() < 0.0) {
            return invalid("target eps must be strictly below 1");
        }
        Ok(ProtocolParams { n_tol, n_key, n_pe, q_tol, f, eps_target })
    }

    /// Splits the sifted string by the standard fractions: 78% for key
    /// generation, the remainder for parameter estimation.
    pub fn with_standard_split(
        n_tol: u64,
        q_tol: f64,
        f: f64,
        eps_target: Log2Prob,
    ) -> Result<Self, BoundsError> {
        let n_key = ((n_tol as f64) * DEFAULT_KEY_FRACTION).round() as u64;
        let n_pe = n_tol - n_key.min(n_tol);
        Self::new(n_tol, n_key, n_pe, q_tol, f, eps_target)
    }

    pub fn n_tol(&self) -> u64 {
        self.n_tol
    }

    pub fn n_key(&self) -> u64 {
        self.n_key
    }

    pub fn n_pe(&self) -> u64 {
        self.n_pe
    }

    pub fn q_tol(&self) -> f64 {
        self.q_tol
    }

    /// Error-correction inefficiency factor.
    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn eps_target(&self) -> Log2Prob {
        self.eps_target
    }
}

/// Intermediate quantities behind one evaluation of the length formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundIntermediates {
    /// Statistical fluctuation term mu.
    pub mu: f64,
    /// Binary entropy of the error tolerance.
    pub h_q: f64,
    /// ln(2/eps).
    pub ln_2_over_eps: f64,
    /// Right side of the length formula, in bits; may be negative.
    pub rhs: f64,
}

/// The fluctuation term for a raw log2(eps), which may reach +1
/// (eps = 2, where mu degenerates to 0).
///
/// # Errors
/// `MuDomain` if log2(eps) exceeds 1: ln(2/eps) would go negative.
pub fn mu_from_log2_eps(params: &ProtocolParams, log2_eps: f64) -> Result<f64, BoundsError> {
    if log2_eps.is_nan() || log2_eps > 1.0 {
        return Err(BoundsError::MuDomain(log2_eps));
    }
    let ln_2_over_eps = (1.0 - log2_eps) * LN_2;
    let n = params.n_key as f64;
    let nz = params.n_pe as f64;
    Ok((((n + nz) / (n * nz)) * ((nz + 1.0) / nz) * ln_2_over_eps).sqrt())
}

/// The fluctuation term mu for a probability-valued eps.
pub fn mu_term(params: &ProtocolParams, eps: Log2Prob) -> f64 {
    mu_from_log2_eps(params, eps.log2()).expect("a probability's log2 is <= 0")
}

/// Evaluates mu, h(Q), ln(2/eps), and the formula's right side.
///
/// # Errors
/// `MuDomain` as in [`mu_from_log2_eps`]; `Infeasible` when
/// Q_tol + mu >= 0.5, where the entropy term leaves its monotone
/// regime and the formula stops meaning anything.
pub fn bound_intermediates(
    params: &ProtocolParams,
    log2_eps: f64,
) -> Result<BoundIntermediates, BoundsError> {
    let mu = mu_from_log2_eps(params, log2_eps)?;
    let q_plus_mu = params.q_tol + mu;
    if q_plus_mu >= 0.5 {
        return Err(BoundsError::Infeasible { q_plus_mu });
    }
    let h_q = binary_entropy(params.q_tol).expect("validated tolerance");
    let h_qmu = binary_entropy(q_plus_mu).expect("below 0.5");
    let n = params.n_key as f64;
    // log2(2/eps^3) = 1 - 3 log2(eps).
    let rhs = n * (1.0 - h_qmu) - params.f * n * h_q - (1.0 - 3.0 * log2_eps);
    Ok(BoundIntermediates { mu, h_q, ln_2_over_eps: (1.0 - log2_eps) * LN_2, rhs })
}

/// The largest key length n with n <= rhs(eps), or 0 when even a
/// zero-length key misses the target (a feasible but empty protocol).
///
/// # Errors
/// `Infeasible` when Q_tol + mu >= 0.5.
pub fn key_length(params: &ProtocolParams, eps: Log2Prob) -> Result<u64, BoundsError> {
    let bi = bound_intermediates(params, eps.log2())?;
    if bi.rhs < 0.0 {
        return Ok(0);
    }
    Ok(bi.rhs.floor() as u64)
}

/// The unique eps at which the extractable length equals n2 exactly,
/// found by bisection on log2(eps) over [-20·N, 0].
///
/// The returned value sits on the feasible side of the final bracket,
/// so `key_length(params, epsilon_of_length(params, n2)) == n2`.
///
/// # Errors
/// `InvalidParams` if n2 = 0; `NoSolution` if no eps in the bracket
/// reaches length n2 with Q_tol + mu < 0.5.
pub fn epsilon_of_length(params: &ProtocolParams, n2: u64) -> Result<Log2Prob, BoundsError> {
    if n2 == 0 {
        return Err(BoundsError::InvalidParams("n2 must be at least 1".to_string()));
    }
    let target = n2 as f64;
    // Treat the non-monotone regime as "no key": the residual there is
    // below any positive target, so bisection walks back out of it.
    let rhs_at = |log2_eps: f64| -> f64 {
        bound_intermediates(params, log2_eps).map_or(f64::NEG_INFINITY, |bi| bi.rhs)
    };
    let mut lo = -20.0 * params.n_key as f64;
    let mut hi = 0.0;
    if rhs_at(hi) < target || rhs_at(lo) >= target {
        return Err(BoundsError::NoSolution { n2 });
    }
    // Invariant: rhs(lo) < n2 <= rhs(hi).
    while hi - lo > SOLVER_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if rhs_at(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Log2Prob::new(hi).expect("bracket keeps log2 <= 0"))
}

/// The real fixed point 2^-x = eps(x) and its floored integer length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    /// floor of the real fixed point; the truncated key length.
    pub n2: u64,
    /// Security level of the length-n2 key.
    pub eps_kprime: Log2Prob,
    /// The real-valued fixed point.
    pub root: f64,
}

/// Solves the fixed point 2^-x = eps(x).
///
/// Substituting eps = 2^-x into the length formula turns the fixed
/// point into the root of the monotone residual
///
///   g(x) = 4x + 1 + f·N·h(Q) - N·[1 - h(Q + mu(x))]
///
/// with mu evaluated at ln(2/eps) = (x+1)·ln 2.  Bisection runs on
/// [1, N]; the result is floored, which the safety invariant
/// eps(n2) <= 2^-n2 requires (rounding up could understate eps).
///
/// # Errors
/// `Infeasible` when no length-1 key exists at eps = 1/2, i.e. the
/// residual is already nonnegative at the bracket's low end.
pub fn fixed_point_n2(params: &ProtocolParams) -> Result<FixedPoint, BoundsError> {
    let n = params.n_key as f64;
    let h_q = binary_entropy(params.q_tol).expect("validated tolerance");
    let g = |x: f64| -> f64 {
        // 2^-x = eps means log2(eps) = -x, hence ln(2/eps) = (x+1) ln 2.
        let mu = mu_from_log2_eps(params, -x).expect("x >= 1 in the bracket");
        let q_plus_mu = params.q_tol + mu;
        if q_plus_mu >= 0.5 {
            // No key is extractable here, so the residual is positive.
            return f64::INFINITY;
        }
        let h_qmu = binary_entropy(q_plus_mu).expect("below 0.5");
        4.0 * x + 1.0 + params.f * n * h_q - n * (1.0 - h_qmu)
    };
    let mut lo = 1.0_f64;
    let mut hi = n;
    if g(lo) >= 0.0 {
        let q_plus_mu = params.q_tol + mu_from_log2_eps(params, -1.0).expect("fixed input");
        return Err(BoundsError::Infeasible { q_plus_mu });
    }
    // g(N) > 0 always: 4N + 1 alone exceeds N·[1 - h].
    // Invariant: g(lo) < 0 <= g(hi).
    while hi - lo > SOLVER_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // lo sits within tolerance below the root, so flooring lo can only
    // err toward the safe (smaller) side.
    let n2 = lo.floor() as u64;
    let eps_kprime = epsilon_of_length(params, n2)?;
    Ok(FixedPoint { n2, eps_kprime, root: lo })
}

/// Guessing-probability bound 2^-n1 + eps for an eps-secure key of n1
/// bits; the sum saturates at probability 1.
pub fn baseline_bound(n1: u64, eps_k: Log2Prob) -> Log2Prob {
    Log2Prob::new(-(n1 as f64)).expect("nonpositive") + eps_k
}

/// The tightened guessing-probability bound 2^-(n2-1) for a key of
/// length n1, obtained by truncating to the fixed-point length n2.
///
/// Returns the bound and the n2 it certifies.
///
/// # Errors
/// Solver errors as in [`fixed_point_n2`]; `NotApplicable` if
/// n1 <= n2, where truncation gains nothing (fall back to
/// [`baseline_bound`]).
pub fn fixed_point_bound(
    params: &ProtocolParams,
    n1: u64,
) -> Result<(Log2Prob, u64), BoundsError> {
    let fp = fixed_point_n2(params)?;
    if n1 <= fp.n2 {
        return Err(BoundsError::NotApplicable { n1, n2: fp.n2 });
    }
    let bound = Log2Prob::new(-((fp.n2 - 1) as f64)).expect("n2 >= 1");
    Ok((bound, fp.n2))
}

/// Guessing-probability bound 2^-(n2-t-1) for a length-n2 key of which
/// t bits are known to the attacker; capped at probability 1.
///
/// # Errors
/// `KnownBitsExceedKey` if t > n2.
pub fn known_bits_bound(n2: u64, t: u64) -> Result<Log2Prob, BoundsError> {
    if t > n2 {
        return Err(BoundsError::KnownBitsExceedKey { t, n2 });
    }
    let exponent = (n2 - t) as f64 - 1.0;
    Ok(Log2Prob::new((-exponent).min(0.0)).expect("capped at 0"))
}

/// Everything the analysis produces for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    /// Extractable key length at the target security level.
    pub n1: u64,
    /// The target security level the key was sized for.
    pub eps_k: Log2Prob,
    /// Guessing-probability bound 2^-n1 + eps_k for the full key.
    pub baseline_bound: Log2Prob,
    /// Fixed-point key length.
    pub n2: u64,
    /// Security level of the length-n2 key.
    pub eps_kprime: Log2Prob,
    /// Tightened bound 2^-(n2-1); `None` when n1 <= n2.
    pub fixed_point_bound: Option<Log2Prob>,
    /// n1 / N_tol.
    pub rate_r: f64,
    /// n2 / N_tol.
    pub rate_rprime: f64,
}

/// Runs the full analysis for one parameter set.
///
/// # Errors
/// Solver errors as above; `EmptyKey` when no key at all is
/// extractable at the target security level.
pub fn analyze(params: &ProtocolParams) -> Result<BoundReport, BoundsError> {
    let eps_k = params.eps_target();
    let n1 = key_length(params, eps_k)?;
    if n1 == 0 {
        return Err(BoundsError::EmptyKey);
    }
    let fp = fixed_point_n2(params)?;
    let fixed_point_bound = if n1 > fp.n2 {
        Some(Log2Prob::new(-((fp.n2 - 1) as f64)).expect("n2 >= 1"))
    } else {
        None
    };
    Ok(BoundReport {
        n1,
        eps_k,
        baseline_bound: baseline_bound(n1, eps_k),
        n2: fp.n2,
        eps_kprime: fp.eps_kprime,
        fixed_point_bound,
        rate_r: n1 as f64 / params.n_tol as f64,
        rate_rprime: fp.n2 as f64 / params.n_tol as f64,
    })
}

/// One row of the reference comparison: a standard-split parameter set
/// with its report and both readings of the follow-up key length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub n_tol: u64,
    pub report: BoundReport,
    /// Power-of-ten display exponent d for eps_kprime: the printed
    /// security level is 10^-d with d = floor(n2 · log10 2), the
    /// truncated decimal exponent of 2^-n2.
    pub eps_prime_pow10_exponent: i64,
    /// Key length at the printed security level 10^-d.  This is the
    /// published follow-up length; it intentionally differs from the
    /// fixed-point n2 (see `reference_note`).
    pub n_prime_at_pow10: u64,
}

/// The three reference parameter sets (N_tol = 1e4, 1e5, 1e6) at the
/// default tolerance, inefficiency, and security level.
pub fn reference_rows() -> Result<Vec<ReferenceRow>, BoundsError> {
    let eps = Log2Prob::from_prob(DEFAULT_EPSILON).expect("valid default");
    [10_000u64, 100_000, 1_000_000]
        .into_iter()
        .map(|n_tol| {
            let params = ProtocolParams::with_standard_split(n_tol, DEFAULT_Q_TOL, DEFAULT_F, eps)?;
            let report = analyze(&params)?;
            let d = (report.n2 as f64 * LOG10_2).floor() as i64;
            let eps_pow10 = Log2Prob::new(-(d as f64) * std::f64::consts::LOG2_10)
                .expect("d >= 0 for n2 >= 4");
            let n_prime = key_length(&params, eps_pow10)?;
            Ok(ReferenceRow {
                n_tol,
                report,
                eps_prime_pow10_exponent: d,
                n_prime_at_pow10: n_prime,
            })
        })
        .collect()
}

/// Why the follow-up length column carries two values.
pub fn reference_note() -> &'static str {
    "n_prime is the key length at the displayed security level 10^-d \
     (d truncates the decimal exponent of 2^-n2); it reproduces the \
     published comparison rows. The fixed-point length n2 is the value \
     the tightened bound 2^-(n2-1) actually uses; 2^-n_prime does not \
     equal 10^-d, so the two columns differ by design."
}
