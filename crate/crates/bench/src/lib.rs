//! Fixed inputs shared by the benchmarks in `benches/`.

use colorcomm_core::slackint::SlackIntInstance;
use colorcomm_core::{gen_random_instance, EdgePartition, Model, PartitionStrategy};

pub fn instance(n: usize, delta: usize) -> EdgePartition {
    gen_random_instance(n, delta, Model::NearRegular, PartitionStrategy::Random, 17).expect("feasible")
}

/// Alice holds the first quarter, Bob the second, leaving slack `m/2`.
pub fn half_slack(m: usize) -> SlackIntInstance {
    let q = (m / 4) as u32;
    SlackIntInstance::new(m, (0..q).collect(), (q..2 * q).collect())
}

/// Edges of a `d`-regular-ish graph whose degree-`d` vertices are
/// independent: per block, `d` hubs each joined to the `d` leaves of its parity.
pub fn fournier_input(blocks: usize, d: usize) -> (usize, Vec<(u32, u32)>) {
    let leaves = 2 * d;
    let per = d + leaves;
    let mut edges = Vec::new();
    for b in 0..blocks {
        let base = (b * per) as u32;
        for h in 0..d as u32 {
            for k in 0..d as u32 {
                let leaf = base + d as u32 + (h + 2 * k) % leaves as u32;
                edges.push((base + h, leaf));
            }
        }
    }
    (blocks * per, edges)
}
