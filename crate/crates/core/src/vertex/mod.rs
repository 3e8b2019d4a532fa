//! (Δ+1)-vertex coloring: a color trial followed by list coloring of the
//! leftover vertices.

mod d1lc;
mod trial;

pub use d1lc::{build_d1lc_leftover, d1lc_protocol, exact_list_color, local_list_color, D1lcInstance, D1lcStats};
pub use trial::{available_sets, random_color_trial, TrialState};

use crate::error::{ProtocolError, Result};
use crate::graph::{EdgePartition, Party};
use crate::runtime::{run_protocol, Channel, PublicCoins, RuntimeConfig, Transcript};
use crate::verify::VertexColoring;

use d1lc::{d1lc_party, LocalView};
use trial::{trial_party, used_colors};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexConfig {
    /// Samples per leftover vertex are `l_multiplier · log₂²(max(|Z|, 4))`.
    pub l_multiplier: f64,
    /// Sparsified graphs with more than `h_threshold · |Z| · log₂²(max(|Z|, 4))`
    /// edges go straight to the exact path.
    pub h_threshold: f64,
    pub restarts: usize,
    /// Overrides the trial's iteration budget.
    pub iterations: Option<usize>,
    pub runtime: RuntimeConfig,
}

impl Default for VertexConfig {
    fn default() -> Self {
        VertexConfig {
            l_multiplier: 5.0,
            h_threshold: 20.0,
            restarts: 100,
            iterations: None,
            runtime: RuntimeConfig::default(),
        }
    }
}

/// `⌈1 + 4·log_{24/23}(log₂ n)⌉`, and 1 for `n < 2`.
pub fn iteration_count(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    let x = 1.0 + 4.0 * (n as f64).log2().ln() / (24.0f64 / 23.0).ln();
    (x - 1e-9).ceil().max(1.0) as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexRun {
    pub coloring: VertexColoring,
    pub transcript: Transcript,
    pub trial: TrialState,
    pub leftover: usize,
    pub d1lc: D1lcStats,
}

async fn vertex_party(
    chan: Channel,
    delta: usize,
    adj: Vec<Vec<u32>>,
    iterations: usize,
    cfg: &VertexConfig,
) -> Result<(Vec<u32>, TrialState, D1lcStats)> {
    chan.set_phase("trial");
    let state = trial_party(&chan.sub(0), delta, &adj, iterations).await?;
    let z = state.active_vertices();
    let mut local = vec![u32::MAX; adj.len()];
    for (i, &v) in z.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let mut edges = Vec::new();
    for &v in &z {
        for &u in &adj[v as usize] {
            if v < u && local[u as usize] != u32::MAX {
                edges.push((local[v as usize], local[u as usize]));
            }
        }
    }
    let view = LocalView {
        n: adj.len(),
        delta,
        blocked: z.iter().map(|&v| used_colors(v, &state, &adj, delta)).collect(),
        z,
        edges,
    };
    let (colors, stats) = d1lc_party(&chan.sub(1), &view, cfg).await?;
    let mut out = Vec::with_capacity(adj.len());
    for v in 0..adj.len() {
        out.push(match state.color[v] {
            Some(c) => c,
            None => colors[local[v] as usize],
        });
    }
    Ok((out, state, stats))
}

/// Full protocol. Both parties end with the same complete coloring.
pub fn vertex_coloring_protocol(p: &EdgePartition, seed: u64, cfg: &VertexConfig) -> Result<VertexRun> {
    let delta = p.max_degree();
    let iterations = cfg.iterations.unwrap_or_else(|| iteration_count(p.n()));
    let party = |role: Party| {
        let adj = p.local_adjacency(role);
        move |c: Channel| vertex_party(c, delta, adj, iterations, cfg)
    };
    let (a, b, transcript) = run_protocol(
        PublicCoins::new(seed),
        &cfg.runtime,
        party(Party::Alice),
        party(Party::Bob),
    )?;
    if a.0 != b.0 || a.1 != b.1 {
        return Err(ProtocolError::invariant("parties output different colorings"));
    }
    let leftover = a.1.color.iter().filter(|c| c.is_none()).count();
    Ok(VertexRun {
        coloring: VertexColoring::complete(a.0),
        transcript,
        trial: a.1,
        leftover,
        d1lc: a.2,
    })
}
