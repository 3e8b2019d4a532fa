//! Seeded instance generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{EdgePartition, Graph, Party};

/// Random graph model for [`gen_random_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    BoundedUniform,
    NearRegular,
    GadgetUnion,
}

/// How edges are split between the parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionStrategy {
    Random,
    Interleaved,
    AllAlice,
    DegreeSplit,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::BoundedUniform, Model::NearRegular, Model::GadgetUnion];

    pub fn name(self) -> &'static str {
        match self {
            Model::BoundedUniform => "bounded-uniform",
            Model::NearRegular => "near-regular",
            Model::GadgetUnion => "gadget-union",
        }
    }
}

impl PartitionStrategy {
    pub const ALL: [PartitionStrategy; 4] = [
        PartitionStrategy::Random,
        PartitionStrategy::Interleaved,
        PartitionStrategy::AllAlice,
        PartitionStrategy::DegreeSplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PartitionStrategy::Random => "random",
            PartitionStrategy::Interleaved => "interleaved",
            PartitionStrategy::AllAlice => "all-alice",
            PartitionStrategy::DegreeSplit => "degree-split",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown model `{s}`"))
    }
}

impl std::str::FromStr for PartitionStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PartitionStrategy::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown partition `{s}`"))
    }
}

const GRAPH_STREAM: u64 = 0x6a09_e667_f3bc_c908;
const OWNER_STREAM: u64 = 0xbb67_ae85_84ca_a73b;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ stream)
}

/// Generate a random instance. Pure in `(parameters, seed)`.
pub fn gen_random_instance(
    n: usize,
    target_delta: usize,
    model: Model,
    partition: PartitionStrategy,
    seed: u64,
) -> Result<EdgePartition, GraphError> {
    if n == 0 || target_delta > n - 1 {
        return Err(GraphError::Infeasible(format!(
            "target degree {target_delta} needs at least {} vertices, got {n}",
            target_delta + 1
        )));
    }
    let mut rng = rng_for(seed, GRAPH_STREAM);
    let edges = match model {
        Model::NearRegular => near_regular(n, target_delta, &mut rng),
        Model::BoundedUniform => bounded_uniform(n, target_delta, &mut rng),
        Model::GadgetUnion => {
            if target_delta < 2 && n >= 4 {
                return Err(GraphError::Infeasible(
                    "gadget-union needs target degree at least 2".into(),
                ));
            }
            let bits: Vec<bool> = (0..n / 4).map(|_| rng.random()).collect();
            c4_edges(&bits)
        }
    };
    let graph = Graph::new(n, edges)?;
    let owner = assign_owners(&graph, partition, &mut rng_for(seed, OWNER_STREAM));
    EdgePartition::new(graph, owner)
}

fn near_regular(n: usize, delta: usize, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let mut present: HashSet<(u32, u32)> = HashSet::new();
    let mut deg = vec![0usize; n];
    let mut order: Vec<u32> = (0..n as u32).collect();
    for _ in 0..delta {
        let mut best: Vec<(u32, u32)> = Vec::new();
        let mut best_dups = usize::MAX;
        for _ in 0..32 {
            order.shuffle(rng);
            let layer: Vec<(u32, u32)> = order
                .chunks_exact(2)
                .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
                .collect();
            let dups = layer.iter().filter(|e| present.contains(e)).count();
            if dups < best_dups {
                best_dups = dups;
                best = layer;
            }
            if dups == 0 {
                break;
            }
        }
        for e in best {
            if present.insert(e) {
                deg[e.0 as usize] += 1;
                deg[e.1 as usize] += 1;
            }
        }
    }
    // Fill-up pass over vertices still short of the target.
    let mut short: Vec<u32> = (0..n as u32).filter(|&v| deg[v as usize] < delta).collect();
    short.shuffle(rng);
    for i in 0..short.len() {
        for j in i + 1..short.len() {
            let (a, b) = (short[i], short[j]);
            if deg[a as usize] >= delta {
                break;
            }
            if deg[b as usize] >= delta {
                continue;
            }
            let e = (a.min(b), a.max(b));
            if present.insert(e) {
                deg[a as usize] += 1;
                deg[b as usize] += 1;
            }
        }
    }
    present.into_iter().collect()
}

fn bounded_uniform(n: usize, delta: usize, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    if delta == 0 || n < 2 {
        return edges;
    }
    let p = delta as f64 / (n - 1) as f64;
    let total = n * (n - 1) / 2;
    // Geometric skipping over the canonical pair order.
    let mut idx: usize = 0;
    let log_q = (1.0 - p).ln();
    let mut u = 0usize;
    let mut row_start = 0usize;
    loop {
        if p < 1.0 {
            let r: f64 = rng.random();
            let skip = ((1.0 - r).ln() / log_q).floor();
            if !skip.is_finite() || skip >= (total - idx) as f64 {
                break;
            }
            idx += skip as usize;
        }
        if idx >= total {
            break;
        }
        while idx >= row_start + (n - 1 - u) {
            row_start += n - 1 - u;
            u += 1;
        }
        let v = u + 1 + (idx - row_start);
        edges.push((u as u32, v as u32));
        idx += 1;
    }
    let mut deg = vec![0usize; n];
    for &(a, b) in &edges {
        deg[a as usize] += 1;
        deg[b as usize] += 1;
    }
    let mut keep = vec![true; edges.len()];
    for i in (0..edges.len()).rev() {
        let (a, b) = edges[i];
        if deg[a as usize] > delta || deg[b as usize] > delta {
            keep[i] = false;
            deg[a as usize] -= 1;
            deg[b as usize] -= 1;
        }
    }
    edges
        .into_iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(e))
        .collect()
}

fn c4_edges(bits: &[bool]) -> Vec<(u32, u32)> {
    let mut edges = Vec::with_capacity(4 * bits.len());
    for (i, &bit) in bits.iter().enumerate() {
        let [a, b, c, d] = [0, 1, 2, 3].map(|k| 4 * i as u32 + k);
        edges.push((a, b));
        edges.push((c, d));
        if bit {
            edges.push((a, d));
            edges.push((b, c));
        } else {
            edges.push((a, c));
            edges.push((b, d));
        }
    }
    edges
}

fn assign_owners(graph: &Graph, strategy: PartitionStrategy, rng: &mut ChaCha8Rng) -> Vec<Party> {
    let m = graph.edge_count();
    match strategy {
        PartitionStrategy::AllAlice => vec![Party::Alice; m],
        PartitionStrategy::Interleaved => (0..m)
            .map(|i| if i % 2 == 0 { Party::Alice } else { Party::Bob })
            .collect(),
        PartitionStrategy::Random => (0..m)
            .map(|_| if rng.random() { Party::Alice } else { Party::Bob })
            .collect(),
        PartitionStrategy::DegreeSplit => {
            let mut owner: Vec<Option<Party>> = vec![None; m];
            for v in 0..graph.n() as u32 {
                let quota = graph.degree(v).div_ceil(2);
                let mut given = 0;
                for &e in graph.incident(v) {
                    if given == quota {
                        break;
                    }
                    if owner[e].is_none() {
                        owner[e] = Some(Party::Alice);
                        given += 1;
                    }
                }
                for &e in graph.incident(v) {
                    owner[e].get_or_insert(Party::Bob);
                }
            }
            owner.into_iter().map(|p| p.unwrap_or(Party::Bob)).collect()
        }
    }
}

/// The lower-bound gadget: four vertices per bit, all edges owned by Alice.
pub fn gen_c4_gadget_instance(bits: &[bool]) -> EdgePartition {
    let graph = Graph::new(4 * bits.len(), c4_edges(bits)).expect("gadget edges are simple");
    let owner = vec![Party::Alice; graph.edge_count()];
    EdgePartition::new(graph, owner).expect("owner length matches")
}

/// All 21 two-element subsets `(i, j)`, `i < j`, of the seven shared vertices,
/// in lexicographic order. Index into this table is a ZEC input id.
pub fn zec_inputs() -> [(u8, u8); 21] {
    let mut out = [(0u8, 0u8); 21];
    let mut k = 0;
    for i in 0..7u8 {
        for j in i + 1..7 {
            out[k] = (i, j);
            k += 1;
        }
    }
    out
}

/// Vertex ids of gadget `g`: `v_A`, `v_B`, then the seven shared vertices.
pub fn zec_gadget_vertices(g: usize) -> (u32, u32, [u32; 7]) {
    let base = 9 * g as u32;
    (base, base + 1, std::array::from_fn(|i| base + 2 + i as u32))
}

/// Disjoint union of `count` ZEC gadgets with uniform inputs per side.
pub fn gen_zec_product_instance(count: usize, seed: u64) -> EdgePartition {
    let mut rng = rng_for(seed, GRAPH_STREAM);
    let inputs = zec_inputs();
    let mut edges = Vec::with_capacity(4 * count);
    for g in 0..count {
        let (va, vb, shared) = zec_gadget_vertices(g);
        let (i, j) = inputs[rng.random_range(0..21)];
        let (k, l) = inputs[rng.random_range(0..21)];
        edges.push((va, shared[i as usize], Party::Alice));
        edges.push((va, shared[j as usize], Party::Alice));
        edges.push((vb, shared[k as usize], Party::Bob));
        edges.push((vb, shared[l as usize], Party::Bob));
    }
    EdgePartition::from_owned_edges(9 * count, &edges).expect("gadget edges are simple")
}
