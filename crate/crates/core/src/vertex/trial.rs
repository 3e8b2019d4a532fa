use rand::Rng;

use crate::error::{ProtocolError, Result};
use crate::graph::{EdgePartition, Party};
use crate::runtime::{parallel, run_protocol, BitString, Channel, PublicCoins, Transcript};
use crate::slackint::{color_sample_party, SlackIntInstance};

use super::{iteration_count, VertexConfig};

/// Replicated state of the color trial. Both parties hold identical copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialState {
    /// `Some(c)` once the vertex is done.
    pub color: Vec<Option<u32>>,
    /// Iterations actually executed.
    pub iteration: usize,
    /// Number of active vertices after each executed iteration.
    pub active_after: Vec<usize>,
    /// Iterations in which each vertex was awake.
    pub awake_iterations: Vec<u32>,
    /// Iteration (1-based) in which each vertex became done.
    pub done_at: Vec<Option<u32>>,
}

impl TrialState {
    pub fn new(n: usize) -> Self {
        TrialState {
            color: vec![None; n],
            iteration: 0,
            active_after: Vec::new(),
            awake_iterations: vec![0; n],
            done_at: vec![None; n],
        }
    }

    pub fn is_active(&self, v: u32) -> bool {
        self.color[v as usize].is_none()
    }

    pub fn active_vertices(&self) -> Vec<u32> {
        (0..self.color.len() as u32).filter(|&v| self.is_active(v)).collect()
    }
}

/// Colors of done neighbors in `adj[v]`, as a membership vector over `0..=Δ`.
pub(crate) fn used_colors(v: u32, state: &TrialState, adj: &[Vec<u32>], delta: usize) -> Vec<bool> {
    let mut used = vec![false; delta + 1];
    for &u in &adj[v as usize] {
        if let Some(c) = state.color[u as usize] {
            used[c as usize] = true;
        }
    }
    used
}

/// The slack instance of an active vertex: X and Y are the colors of its done
/// neighbors through Alice's and Bob's edges.
pub fn available_sets(v: u32, state: &TrialState, p: &EdgePartition) -> SlackIntInstance {
    let delta = p.max_degree();
    let set = |party| {
        let used = used_colors(v, state, &p.local_adjacency(party), delta);
        (0..=delta as u32).filter(|&c| used[c as usize]).collect()
    };
    SlackIntInstance::new(delta + 1, set(Party::Alice), set(Party::Bob))
}

const NONE: u32 = u32::MAX;

/// One party's side of the color trial over `iterations` iterations.
pub async fn trial_party(chan: &Channel, delta: usize, adj: &[Vec<u32>], iterations: usize) -> Result<TrialState> {
    let n = adj.len();
    let mut state = TrialState::new(n);
    let mut tentative = vec![NONE; n];
    for i in 1..=iterations {
        let mut active = state.active_vertices();
        if active.is_empty() {
            break;
        }
        state.iteration = i;
        let ich = chan.sub(i as u32);
        let mut rng = ich.coins(0);
        active.retain(|_| rng.random::<bool>());
        let awake = active;
        if !awake.is_empty() {
            let picks = parallel(&ich.sub(0), awake.iter().copied(), |v, sc| {
                let used = used_colors(v, &state, adj, delta);
                async move { color_sample_party(&sc, &used).await }
            })
            .await?;
            for (&v, &c) in awake.iter().zip(&picks) {
                tentative[v as usize] = c;
                state.awake_iterations[v as usize] += 1;
            }
            let mine: BitString = awake
                .iter()
                .map(|&v| {
                    let c = tentative[v as usize];
                    adj[v as usize]
                        .iter()
                        .all(|&u| state.color[u as usize] != Some(c) && tentative[u as usize] != c)
                })
                .collect();
            let theirs = ich.sub(1).exchange(mine.clone()).await;
            if theirs.len() != awake.len() {
                return Err(ProtocolError::malformed("confirmation length"));
            }
            for (k, &v) in awake.iter().enumerate() {
                if mine.as_bits()[k] && theirs.as_bits()[k] {
                    state.color[v as usize] = Some(tentative[v as usize]);
                    state.done_at[v as usize] = Some(i as u32);
                }
            }
            for &v in &awake {
                tentative[v as usize] = NONE;
            }
        }
        state.active_after.push(state.active_vertices().len());
    }
    Ok(state)
}

/// Run the color trial alone.
pub fn random_color_trial(p: &EdgePartition, seed: u64, cfg: &VertexConfig) -> Result<(TrialState, Transcript)> {
    let delta = p.max_degree();
    let iterations = cfg.iterations.unwrap_or_else(|| iteration_count(p.n()));
    let party = |role: Party| {
        let adj = p.local_adjacency(role);
        move |c: Channel| async move {
            c.set_phase("trial");
            trial_party(&c, delta, &adj, iterations).await
        }
    };
    let (a, b, t) = run_protocol(
        PublicCoins::new(seed),
        &cfg.runtime,
        party(Party::Alice),
        party(Party::Bob),
    )?;
    if a != b {
        return Err(ProtocolError::invariant("trial states diverged"));
    }
    Ok((a, t))
}
