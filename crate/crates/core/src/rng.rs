//! SplitMix64, the seed expansion behind every reproducible matrix.

/// SplitMix64 pseudorandom generator with the standard constants.
///
/// Fixed constants make the stream bit-exact across platforms and
/// languages, which is what lets a bare 64-bit seed serve as a golden
/// fixture.  Not cryptographically secure: deployments that hash real
/// keys must draw matrix randomness from a true entropy source.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Returns the next 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Returns a uniform value in 0..bound via rejection sampling.
    ///
    /// Used by randomized tests; `bound` must be nonzero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be nonzero");
        // Reject the tail that would bias the modulo.
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }
}

/// MSB-first bit view of a SplitMix64 output stream.
///
/// Consumes one 64-bit output per 64 bits, most significant bit first,
/// matching the matrix bit convention.
#[derive(Debug, Clone)]
pub struct BitStream {
    rng: SplitMix64,
    word: u64,
    left: u32,
}

impl BitStream {
    pub fn new(seed: u64) -> Self {
        BitStream { rng: SplitMix64::new(seed), word: 0, left: 0 }
    }

    pub fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        let bit = self.word >> 63 == 1;
        self.word <<= 1;
        self.left -= 1;
        bit
    }
}
