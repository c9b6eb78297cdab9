//! SplitMix64, used for every seeded choice in the crate.
//!
//! The generator is pinned by value rather than pulled from a crate so that
//! seeded set constructions and weight draws stay byte-stable across
//! toolchains and dependency bumps.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Derives an independent child stream; `salt` distinguishes siblings.
    pub fn child(&self, salt: u64) -> Self {
        let mut base = SplitMix64::new(self.state ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        SplitMix64::new(base.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `[0, n)` by rejection; `n` must be nonzero.
    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Uniform draw from `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Seed for a numbered instance derived from a run-level seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    SplitMix64::new(seed).child(index).next_u64()
}
