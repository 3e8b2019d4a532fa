#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use colorcomm_core::{EdgePartition, Party};

/// Both parties own several stars of degree `delta` over a shared pool of
/// low-degree leaves, so matching partners often coincide across parties.
pub fn hub_heavy_instance(hubs_per_party: usize, leaves: usize, delta: usize, seed: u64) -> EdgePartition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hubs = 2 * hubs_per_party;
    let n = hubs + leaves;
    let cap = (delta / 2).max(1);
    let mut load = vec![0usize; n];
    let mut edges = Vec::new();
    for h in 0..hubs {
        let owner = if h < hubs_per_party { Party::Alice } else { Party::Bob };
        let mut picked = Vec::new();
        while picked.len() < delta {
            let open: Vec<usize> = (hubs..n).filter(|&l| load[l] < cap && !picked.contains(&l)).collect();
            let Some(&l) = open.choose(&mut rng) else { break };
            load[l] += 1;
            picked.push(l);
            edges.push((h as u32, l as u32, owner));
        }
    }
    EdgePartition::from_owned_edges(n, &edges).expect("simple by construction")
}
