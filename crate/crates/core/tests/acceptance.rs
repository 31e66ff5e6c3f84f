//! Acceptance gate: one test per shipping criterion, each printing a
//! single pass line.  Run with
//!
//!   cargo test --test acceptance -- --nocapture
//!
//! to see the lines; a failed criterion fails its test.

use std::time::{Duration, Instant};

use guessprob::bounds::{
    epsilon_of_length, fixed_point_bound, fixed_point_n2, key_length, reference_note,
    reference_rows, ProtocolParams, DEFAULT_EPSILON, DEFAULT_F, DEFAULT_Q_TOL,
};
use guessprob::hashing::{random_matrix, toeplitz_matrix, BitVector, HashSeed, MatrixKind};
use guessprob::numerics::log2_add;
use guessprob::oracle::{collision_rate, truncation_check, EveKnowledge};
use guessprob::rng::{BitStream, SplitMix64};
use guessprob::Log2Prob;

const REFERENCE_N_TOL: [u64; 3] = [10_000, 100_000, 1_000_000];

fn reference_params(n_tol: u64) -> ProtocolParams {
    let eps = Log2Prob::from_prob(DEFAULT_EPSILON).unwrap();
    ProtocolParams::with_standard_split(n_tol, DEFAULT_Q_TOL, DEFAULT_F, eps).unwrap()
}

#[test]
fn criterion_1_key_lengths() {
    let start = Instant::now();
    let expected = [2_014u64, 40_588, 490_309];
    let targets = [2.01e3, 4.06e4, 4.90e5];
    for ((n_tol, expect), target) in REFERENCE_N_TOL.into_iter().zip(expected).zip(targets) {
        let params = reference_params(n_tol);
        let n1 = key_length(&params, params.eps_target()).unwrap();
        assert_eq!(n1, expect, "key length at N_tol = {n_tol}");
        let rel = (n1 as f64 - target).abs() / target;
        assert!(rel <= 0.01, "key length {n1} is {rel:.4} away from {target}");
    }
    assert!(start.elapsed() < Duration::from_secs(1), "took {:?}", start.elapsed());
    println!("criterion 1 (key lengths at the reference parameter sets): PASS");
}

#[test]
fn criterion_2_fixed_point_bounds() {
    // Pinned by an independent high-precision script before the main
    // build: -log10 of the tightened bound 2^-(n2-1).
    let golden = [32.21020953604599, 327.21960528674754, 3277.614592789427];
    let targets = [32.0, 327.0, 3276.698970004336];
    let expected_n2 = [108u64, 1_088, 10_889];
    for i in 0..3 {
        let params = reference_params(REFERENCE_N_TOL[i]);
        let n1 = key_length(&params, params.eps_target()).unwrap();
        let (bound, n2) = fixed_point_bound(&params, n1).unwrap();
        assert_eq!(n2, expected_n2[i]);
        let neglog10 = -bound.log2() * std::f64::consts::LOG10_2;
        assert!(
            (neglog10 - golden[i]).abs() < 1e-9,
            "-log10 bound {neglog10} drifted from golden {}",
            golden[i]
        );
        let rel = (neglog10 - targets[i]).abs() / targets[i];
        assert!(rel <= 0.02, "-log10 bound {neglog10} is {rel:.4} away from {}", targets[i]);
    }
    println!("criterion 2 (tightened guessing-probability bounds): PASS");
}

#[test]
fn criterion_3_rates_and_followup_lengths() {
    let rows = reference_rows().unwrap();
    let expected = [
        // (n_tol, r target, n2, pow10 exponent, n' at 10^-d)
        (10_000u64, 0.20, 108u64, 32i64, 136u64),
        (100_000, 0.41, 1_088, 327, 1_119),
        (1_000_000, 0.49, 10_889, 3_277, 10_954),
    ];
    assert_eq!(rows.len(), expected.len());
    for (row, (n_tol, r, n2, d, n_prime)) in rows.iter().zip(expected) {
        assert_eq!(row.n_tol, n_tol);
        assert!((row.report.rate_r - r).abs() <= 0.01, "r = {} at {n_tol}", row.report.rate_r);
        // Both readings of the follow-up length keep r' within the
        // tolerance band around 0.01.
        let r_prime_fixed = row.report.rate_rprime;
        let r_prime_pow10 = row.n_prime_at_pow10 as f64 / n_tol as f64;
        assert!((r_prime_fixed - 0.01).abs() <= 0.005, "fixed-point r' = {r_prime_fixed}");
        assert!((r_prime_pow10 - 0.01).abs() <= 0.005, "displayed r' = {r_prime_pow10}");
        assert_eq!(row.report.n2, n2);
        assert_eq!(row.eps_prime_pow10_exponent, d);
        assert_eq!(row.n_prime_at_pow10, n_prime);
    }
    // The two follow-up readings disagree (visibly so on the smallest
    // set) and the report documents that instead of hiding it.
    assert_ne!(rows[0].report.n2, rows[0].n_prime_at_pow10);
    let note = reference_note();
    assert!(note.contains("n_prime") && note.contains("n2"));
    println!("criterion 3 (rates and follow-up key lengths): PASS");
}

/// t distinct known positions with pseudorandom values.
fn random_knowledge(rng: &mut SplitMix64, cols: usize, t: usize) -> EveKnowledge {
    let mut positions: Vec<usize> = (0..cols).collect();
    for i in 0..t {
        let j = i + rng.next_below((cols - i) as u64) as usize;
        positions.swap(i, j);
    }
    let known: Vec<(usize, bool)> =
        positions[..t].iter().map(|&p| (p, rng.next_u64() & 1 == 1)).collect();
    EveKnowledge::new(cols, &known).unwrap()
}

#[test]
fn criterion_4_truncation_sweep() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xACCE55);
    let mut cases = 0u64;
    for seed in 0..1_000u64 {
        for n in 1..=4usize {
            for cols in n..=8usize {
                for kind in [MatrixKind::ExplicitRandom, MatrixKind::ModifiedToeplitz] {
                    let m = match kind {
                        MatrixKind::ExplicitRandom => random_matrix(HashSeed(seed), n, cols),
                        MatrixKind::ModifiedToeplitz if n < cols => {
                            toeplitz_matrix(HashSeed(seed), n, cols)
                        }
                        MatrixKind::ModifiedToeplitz => continue,
                    }
                    .unwrap();
                    for t in 0..=cols {
                        let eve = random_knowledge(&mut rng, cols, t);
                        for n2 in 1..=n {
                            let check = truncation_check(&m, &eve, n2).unwrap();
                            assert!(
                                check.holds,
                                "truncation raised the bar: seed {seed} {kind:?} n {n} \
                                 cols {cols} t {t} n2 {n2}: {} > {}",
                                check.p_full, check.p_truncated
                            );
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(cases >= 500_000, "sweep covered only {cases} cases");
    assert!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
    println!("criterion 4 (exhaustive truncation sweep, {cases} cases): PASS");
}

#[test]
fn criterion_5_two_universality() {
    // Hashing is linear, so R·x = R·y exactly when R·(x xor y) = 0;
    // sweeping every nonzero difference z covers every pair x != y of
    // each shape.  For each z the matrices mapping z to zero are
    // counted exhaustively and must be exactly a 2^-n fraction.
    for n in 1..=16usize {
        for cols in 1..=16usize {
            if n * cols > 16 {
                continue;
            }
            let total = 1u64 << (n * cols);
            let chunk_mask = (1u32 << cols) - 1;
            for z in 1..(1u32 << cols) {
                let mut count = 0u64;
                for m in 0..total {
                    let mut annihilates = true;
                    for r in 0..n {
                        let chunk = (m >> (r * cols)) as u32 & chunk_mask;
                        if (chunk & z).count_ones() & 1 == 1 {
                            annihilates = false;
                            break;
                        }
                    }
                    if annihilates {
                        count += 1;
                    }
                }
                assert_eq!(count << n, total, "shape {n}x{cols}, difference {z:b}");
            }
        }
    }
    // Spot-check the literal pair enumeration through the public
    // oracle on the smallest shapes.
    for n in 1..=2usize {
        for cols in 1..=3usize {
            for xi in 0..(1u32 << cols) {
                for yi in 0..(1u32 << cols) {
                    if xi == yi {
                        continue;
                    }
                    let unpack = |v: u32| {
                        let bits: Vec<u8> =
                            (0..cols).map(|j| (v >> (cols - 1 - j) & 1) as u8).collect();
                        BitVector::from_bits(&bits)
                    };
                    let rate = collision_rate(n, cols, &unpack(xi), &unpack(yi)).unwrap();
                    let expected = num_rational::BigRational::new(
                        num_bigint::BigInt::from(1),
                        num_bigint::BigInt::from(1u64 << n),
                    );
                    assert_eq!(rate, expected, "shape {n}x{cols}, pair {xi:b}/{yi:b}");
                }
            }
        }
    }
    println!("criterion 5 (exact two-universal collision rates): PASS");
}

#[test]
fn criterion_6_commutation() {
    // Exhaustive over every input string for small shapes.
    for cols in 1..=6usize {
        for n in 1..=cols {
            for seed in 0..4u64 {
                let mut matrices = vec![random_matrix(HashSeed(seed), n, cols).unwrap()];
                if n < cols {
                    matrices.push(toeplitz_matrix(HashSeed(seed), n, cols).unwrap());
                }
                for m in &matrices {
                    for s_bits in 0..(1u32 << cols) {
                        let bits: Vec<u8> =
                            (0..cols).map(|j| (s_bits >> (cols - 1 - j) & 1) as u8).collect();
                        let s = BitVector::from_bits(&bits);
                        let key = m.hash_key(&s).unwrap();
                        for n2 in 1..=n {
                            let direct = m.submatrix_rows(n2).unwrap().hash_key(&s).unwrap();
                            assert_eq!(key.truncated(n2).unwrap(), direct);
                        }
                    }
                }
            }
        }
    }
    // Randomized up to 512 columns.
    let mut rng = SplitMix64::new(0xC0FFEE);
    for case in 0..10_000u64 {
        let cols = 1 + rng.next_below(512) as usize;
        let n = 1 + rng.next_below(cols as u64) as usize;
        let n2 = 1 + rng.next_below(n as u64) as usize;
        let seed = HashSeed(rng.next_u64());
        let m = if n < cols && rng.next_u64() & 1 == 1 {
            toeplitz_matrix(seed, n, cols).unwrap()
        } else {
            random_matrix(seed, n, cols).unwrap()
        };
        let mut stream = BitStream::new(rng.next_u64());
        let s = BitVector::from_stream(&mut stream, cols);
        let key = m.hash_key(&s).unwrap();
        let direct = m.submatrix_rows(n2).unwrap().hash_key(&s).unwrap();
        assert_eq!(key.truncated(n2).unwrap(), direct, "case {case}");
    }
    println!("criterion 6 (truncation commutes with hashing): PASS");
}

#[test]
fn criterion_7_deterministic_golden_matrix() {
    let m = random_matrix(HashSeed(0), 1, 64).unwrap();
    assert_eq!(m.row(0).to_hex(), "E220A8397B1DCDAF");

    // Independent generator reimplementation, straight from the
    // published mixing constants.
    let mut state = 0u64;
    state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    let word = z ^ (z >> 31);
    assert_eq!(word, 0xE220_A839_7B1D_CDAF);
    for j in 0..64 {
        assert_eq!(m.get(0, j), word >> (63 - j) & 1 == 1);
    }
    println!("criterion 7 (seeded matrix matches the reference generator): PASS");
}

#[test]
fn criterion_8_monotonicity_suite() {
    for n_tol in REFERENCE_N_TOL {
        let params = reference_params(n_tol);
        let n1 = key_length(&params, params.eps_target()).unwrap();
        let fp = fixed_point_n2(&params).unwrap();

        // (a) The security level is strictly increasing in the length.
        let mut grid: Vec<u64> = vec![1, fp.n2 / 2, fp.n2 - 1, fp.n2, fp.n2 + 1, 2 * fp.n2, n1];
        grid.sort_unstable();
        grid.dedup();
        let eps_grid: Vec<f64> = grid
            .iter()
            .map(|&n| epsilon_of_length(&params, n).unwrap().log2())
            .collect();
        for w in eps_grid.windows(2) {
            assert!(w[0] < w[1], "eps not strictly increasing at N_tol = {n_tol}");
        }

        // (b) Fixed-point optimality: both objective terms are
        // monotone, so 2^-n + eps(n) >= 2^-root for every n; the value
        // at the fixed point, 2^-(root-1), is therefore within one bit
        // of the objective's true minimum.  Verified across a grid
        // spanning well past both sides of the root.
        let lo = fp.n2.saturating_sub(8).max(1);
        let mut probe: Vec<u64> = (lo..=fp.n2 + 16).collect();
        probe.extend([1, fp.n2 / 2, 2 * fp.n2, n1]);
        probe.sort_unstable();
        probe.dedup();
        for n in probe {
            let eps = epsilon_of_length(&params, n).unwrap();
            let objective = log2_add(-(n as f64), eps.log2());
            assert!(
                objective >= -fp.root - 1e-4,
                "objective 2^{objective} at n = {n} beats the fixed point 2^-{}",
                fp.root
            );
        }

        // (c) Floor safety: the floored length still satisfies
        // eps(n2) <= 2^-n2.
        let eps_floor = epsilon_of_length(&params, fp.n2).unwrap();
        assert!(eps_floor.log2() <= -(fp.n2 as f64) + 1e-5);
        assert!(fp.eps_kprime.log2() <= -(fp.n2 as f64) + 1e-5);
    }
    println!("criterion 8 (solver monotonicity, optimality, floor safety): PASS");
}
