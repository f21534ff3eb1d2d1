use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used by every sampler.
pub type SimRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of replicate `index` in an experiment started from `base`.
pub fn replicate_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}
