//! Seeded random source used by every randomized check.
//!
//! The generator is xoshiro256** seeded through SplitMix64 from a single
//! 64-bit seed, so the same seed reproduces the same vectors everywhere.

use rand::SeedableRng;
pub use rand_xoshiro::Xoshiro256StarStar;

pub fn seeded(seed: u64) -> Xoshiro256StarStar {
    Xoshiro256StarStar::seed_from_u64(seed)
}
