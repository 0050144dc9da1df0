//! Counter-based random streams.
//!
//! Every run draws from its own ChaCha8 stream keyed by the master seed and
//! selected by the run index, so the numbers a run sees do not depend on
//! which worker executes it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Independent generator for run `index` under `master_seed`.
pub fn run_stream(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Sub-seed for a named purpose (e.g. bootstrap resampling), derived from
/// the master seed without consuming any run stream.
pub fn derive_seed(master_seed: u64, purpose: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = master_seed ^ purpose.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Evaluates `f(index, rng)` for `count` runs, in parallel when `threads`
/// allows, and returns the results in index order.
pub fn map_runs<T, F>(count: usize, master_seed: u64, threads: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> T + Sync + Send,
{
    let work = |i: usize| {
        let mut rng = run_stream(master_seed, i as u64);
        f(i, &mut rng)
    };
    match threads {
        Some(1) => (0..count).map(work).collect(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| (0..count).into_par_iter().map(work).collect()),
            Err(_) => (0..count).map(work).collect(),
        },
        None => (0..count).into_par_iter().map(work).collect(),
    }
}
