//! Seeds and independent random substreams.
//!
//! Every stochastic step (noise draws, permutation replicates, bootstrap
//! resamples) takes its generator from `seed.substream(index)`, so results do
//! not depend on the order in which replicates are evaluated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub const fn new(seed: u64) -> Self {
        Self(seed)
    }

    /// Child seed for `index`, mixed with splitmix64 so that neighbouring
    /// indices give unrelated streams.
    pub fn derive(self, index: u64) -> RngSeed {
        let mut z = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15).rotate_left(17)
            ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RngSeed(z ^ (z >> 31))
    }

    pub fn rng(self) -> Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    pub fn substream(self, index: u64) -> Rng {
        self.derive(index).rng()
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        Self(seed)
    }
}
