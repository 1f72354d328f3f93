//! Seeded random instances and independent oracles shared by the
//! integration tests and the acceptance suite.
#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
