//! Keyed random streams.
//!
//! Every stream is a ChaCha8 generator whose 256-bit key is derived from
//! `(seed, replication, region, purpose)` with a SplitMix64 finalizer, so
//! the numbers a replication sees do not depend on which thread runs it or
//! on how many replications run before it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. Distinct purposes never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    RegionParams,
    SkillShares,
    LocalMinWage,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::RegionParams => 0x5245_4749_4f4e,
            Purpose::SkillShares => 0x534b_494c_4c53,
            Purpose::LocalMinWage => 0x4c4f_4341_4c4d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub replication: u64,
    pub region: Option<u64>,
    pub purpose: Purpose,
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl StreamKey {
    pub fn new(seed: u64, replication: u64, purpose: Purpose) -> Self {
        Self { seed, replication, region: None, purpose }
    }

    pub fn for_region(self, region: u64) -> Self {
        Self { region: Some(region), ..self }
    }

    fn words(&self) -> [u64; 4] {
        let region = self.region.map_or(u64::MAX, |r| r);
        let mut h = splitmix64(self.seed);
        let mut out = [0u64; 4];
        for (i, w) in [self.replication, region, self.purpose.tag(), 0x6d77_6c61_62].into_iter().enumerate() {
            h = splitmix64(h ^ w);
            out[i] = h;
        }
        out
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        for (chunk, w) in seed.chunks_exact_mut(8).zip(self.words()) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}
