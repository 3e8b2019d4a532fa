use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{ProtocolError, Result};
use crate::graph::{EdgePartition, Party};
use crate::runtime::{bit_width, parallel, run_protocol, BitString, Channel, PublicCoins, Transcript};
use crate::slackint::color_sample_party;

use super::trial::{used_colors, TrialState};
use super::VertexConfig;

/// A (degree+1)-list-coloring instance on the vertex set `z`. Lists and
/// edges are split between the parties; the usable list of `z[i]` is
/// `psi_a[i] ∩ psi_b[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D1lcInstance {
    pub n: usize,
    pub delta: usize,
    pub z: Vec<u32>,
    /// Edges with both endpoints in `z`, by global id.
    pub edges: Vec<(u32, u32, Party)>,
    pub psi_a: Vec<Vec<u32>>,
    pub psi_b: Vec<Vec<u32>>,
}

impl D1lcInstance {
    pub fn palette(&self, i: usize) -> Vec<u32> {
        self.psi_a[i]
            .iter()
            .copied()
            .filter(|c| self.psi_b[i].contains(c))
            .collect()
    }

    fn local_index(&self) -> Vec<u32> {
        let mut idx = vec![u32::MAX; self.n];
        for (i, &v) in self.z.iter().enumerate() {
            idx[v as usize] = i as u32;
        }
        idx
    }

    pub fn degrees(&self) -> Vec<usize> {
        let idx = self.local_index();
        let mut deg = vec![0; self.z.len()];
        for &(u, v, _) in &self.edges {
            deg[idx[u as usize] as usize] += 1;
            deg[idx[v as usize] as usize] += 1;
        }
        deg
    }

    /// `|Ψ(v)| ≥ deg_Z(v) + 1` for every `v`.
    pub fn check_palettes(&self) -> Result<()> {
        for (i, d) in self.degrees().into_iter().enumerate() {
            if self.palette(i).len() < d + 1 {
                return Err(ProtocolError::precondition(format!(
                    "vertex {} has {} colors for degree {d}",
                    self.z[i],
                    self.palette(i).len()
                )));
            }
        }
        Ok(())
    }

    fn view(&self, party: Party) -> LocalView {
        let idx = self.local_index();
        let psi = if party == Party::Alice {
            &self.psi_a
        } else {
            &self.psi_b
        };
        LocalView {
            n: self.n,
            delta: self.delta,
            z: self.z.clone(),
            edges: self
                .edges
                .iter()
                .filter(|e| e.2 == party)
                .map(|&(u, v, _)| (idx[u as usize], idx[v as usize]))
                .collect(),
            blocked: psi
                .iter()
                .map(|list| {
                    let mut b = vec![true; self.delta + 1];
                    for &c in list {
                        b[c as usize] = false;
                    }
                    b
                })
                .collect(),
        }
    }
}

/// Leftover instance after the trial: the active vertices, with each party's
/// list being the colors not used by its done neighbors.
pub fn build_d1lc_leftover(state: &TrialState, p: &EdgePartition) -> D1lcInstance {
    let delta = p.max_degree();
    let z = state.active_vertices();
    let lists = |party| {
        let adj = p.local_adjacency(party);
        z.iter()
            .map(|&v| {
                let used = used_colors(v, state, &adj, delta);
                (0..=delta as u32).filter(|&c| !used[c as usize]).collect()
            })
            .collect()
    };
    let edges = p
        .graph()
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| state.is_active(u) && state.is_active(v))
        .map(|(id, &(u, v))| (u, v, p.owner(id)))
        .collect();
    D1lcInstance {
        n: p.n(),
        delta,
        psi_a: lists(Party::Alice),
        psi_b: lists(Party::Bob),
        z,
        edges,
    }
}

/// One party's knowledge of a D1LC instance, in local indices `0..|z|`.
#[derive(Debug, Clone)]
pub(crate) struct LocalView {
    pub n: usize,
    pub delta: usize,
    pub z: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    /// Colors outside this party's list, per local vertex.
    pub blocked: Vec<Vec<bool>>,
}

/// Outcome details of the list-coloring stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct D1lcStats {
    pub samples_per_vertex: usize,
    pub sparsified_edges: usize,
    pub fallback: bool,
}

fn log_term(z: usize) -> f64 {
    (z.max(4) as f64).log2().powi(2)
}

fn adjacency(k: usize, edges: &[(u32, u32)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); k];
    for &(u, v) in edges {
        adj[u as usize].push(v as usize);
        adj[v as usize].push(u as usize);
    }
    adj
}

fn greedy_in_order(order: &[usize], adj: &[Vec<usize>], lists: &[Vec<u32>]) -> Option<Vec<u32>> {
    let mut color = vec![u32::MAX; adj.len()];
    for &v in order {
        let c = *lists[v].iter().find(|&&c| adj[v].iter().all(|&u| color[u] != c))?;
        color[v] = c;
    }
    Some(color)
}

/// Random-order greedy list coloring with restarts.
pub fn local_list_color<R: Rng>(
    k: usize,
    edges: &[(u32, u32)],
    lists: &[Vec<u32>],
    restarts: usize,
    rng: &mut R,
) -> Option<Vec<u32>> {
    let adj = adjacency(k, edges);
    let mut order: Vec<usize> = (0..k).collect();
    for _ in 0..restarts.max(1) {
        order.shuffle(rng);
        if let Some(c) = greedy_in_order(&order, &adj, lists) {
            return Some(c);
        }
    }
    None
}

/// Greedy in minimum-degree-last order; succeeds whenever every list is
/// longer than the degree.
pub fn exact_list_color(k: usize, edges: &[(u32, u32)], lists: &[Vec<u32>]) -> Option<Vec<u32>> {
    let adj = adjacency(k, edges);
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; k];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..k).map(|v| Reverse((deg[v], v))).collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse((d, v))) = heap.pop() {
        if removed[v] || d != deg[v] {
            continue;
        }
        removed[v] = true;
        order.push(v);
        for &u in &adj[v] {
            if !removed[u] {
                deg[u] -= 1;
                heap.push(Reverse((deg[u], u)));
            }
        }
    }
    order.reverse();
    greedy_in_order(&order, &adj, lists)
}

fn push_edges(msg: &mut BitString, view: &LocalView, edges: &[(u32, u32)], w: u32) {
    for &(u, v) in edges {
        msg.push_uint(view.z[u as usize] as u64, w);
        msg.push_uint(view.z[v as usize] as u64, w);
    }
}

fn read_edges(
    r: &mut crate::runtime::BitReader<'_>,
    count: u64,
    w: u32,
    local: &std::collections::HashMap<u32, u32>,
) -> Result<Vec<(u32, u32)>> {
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let u = r.read_uint(w)? as u32;
        let v = r.read_uint(w)? as u32;
        match (local.get(&u), local.get(&v)) {
            (Some(&a), Some(&b)) => out.push((a, b)),
            _ => return Err(ProtocolError::malformed("edge outside the leftover set")),
        }
    }
    Ok(out)
}

/// One party's side of the list-coloring protocol. Returns colors by local
/// index.
pub(crate) async fn d1lc_party(chan: &Channel, view: &LocalView, cfg: &VertexConfig) -> Result<(Vec<u32>, D1lcStats)> {
    let k = view.z.len();
    let mut stats = D1lcStats::default();
    if k == 0 {
        return Ok((Vec::new(), stats));
    }
    let l = (cfg.l_multiplier * log_term(k)).ceil().max(1.0) as usize;
    stats.samples_per_vertex = l;
    chan.set_phase("d1lc-sample");
    let samples = parallel(&chan.sub(0), 0..(k * l) as u32, |id, sc| {
        let blocked = &view.blocked[id as usize / l];
        async move { color_sample_party(&sc, blocked).await }
    })
    .await?;
    let lists: Vec<Vec<u32>> = samples
        .chunks(l)
        .map(|ch| {
            let mut s = ch.to_vec();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let survives = |&(u, v): &(u32, u32)| {
        let (a, b) = (&lists[u as usize], &lists[v as usize]);
        a.iter().any(|c| b.binary_search(c).is_ok())
    };
    let own_h: Vec<(u32, u32)> = view.edges.iter().copied().filter(survives).collect();

    chan.set_phase("d1lc-ship");
    let ship = chan.sub(1);
    let count_w = bit_width((k * (k - 1) / 2) as u64);
    let vert_w = bit_width(view.n.saturating_sub(1) as u64);
    let color_w = bit_width(view.delta as u64);
    let tau = (cfg.h_threshold * k as f64 * log_term(k)).floor() as u64;
    let local: std::collections::HashMap<u32, u32> = view.z.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();

    let send_colors = |colors: &[u32], msg: &mut BitString| {
        for &c in colors {
            msg.push_uint(c as u64, color_w);
        }
    };
    let read_colors = |r: &mut crate::runtime::BitReader<'_>| -> Result<Vec<u32>> {
        let out = (0..k)
            .map(|_| r.read_uint(color_w).map(|c| c as u32))
            .collect::<Result<Vec<_>>>()?;
        r.finish()?;
        Ok(out)
    };

    if chan.is_alice() {
        let msg = ship.recv().await;
        let mut r = msg.reader();
        let bob_count = r.read_uint(count_w)?;
        let mut attempt = None;
        if bob_count <= tau {
            let mut h = read_edges(&mut r, bob_count, vert_w, &local)?;
            r.finish()?;
            h.extend_from_slice(&own_h);
            stats.sparsified_edges = h.len();
            if h.len() as u64 <= tau {
                let mut rng = chan.coins(7);
                attempt = local_list_color(k, &h, &lists, cfg.restarts, &mut rng);
            }
        }
        let mut reply = BitString::new();
        reply.push_bit(attempt.is_some());
        if let Some(colors) = attempt {
            send_colors(&colors, &mut reply);
            ship.exchange(reply).await;
            return Ok((colors, stats));
        }
        ship.exchange(reply).await;
        stats.fallback = true;
        let msg = ship.recv().await;
        let mut r = msg.reader();
        let bob_count = r.read_uint(count_w)?;
        let mut g = read_edges(&mut r, bob_count, vert_w, &local)?;
        g.extend_from_slice(&view.edges);
        let mut lists = Vec::with_capacity(k);
        for i in 0..k {
            let mut list = Vec::new();
            for c in 0..=view.delta {
                let bob_ok = r.read_bit()?;
                if bob_ok && !view.blocked[i][c] {
                    list.push(c as u32);
                }
            }
            lists.push(list);
        }
        r.finish()?;
        let colors =
            exact_list_color(k, &g, &lists).ok_or_else(|| ProtocolError::invariant("exact list coloring failed"))?;
        let mut reply = BitString::new();
        send_colors(&colors, &mut reply);
        ship.exchange(reply).await;
        Ok((colors, stats))
    } else {
        let mut msg = BitString::new();
        msg.push_uint(own_h.len() as u64, count_w);
        if own_h.len() as u64 <= tau {
            push_edges(&mut msg, view, &own_h, vert_w);
        }
        ship.exchange(msg).await;
        let reply = ship.recv().await;
        let mut r = reply.reader();
        if r.read_bit()? {
            return Ok((read_colors(&mut r)?, stats));
        }
        r.finish()?;
        stats.fallback = true;
        let mut msg = BitString::new();
        msg.push_uint(view.edges.len() as u64, count_w);
        push_edges(&mut msg, view, &view.edges, vert_w);
        for b in &view.blocked {
            msg.extend_bits(b.iter().map(|&x| !x));
        }
        ship.exchange(msg).await;
        let reply = ship.recv().await;
        let colors = read_colors(&mut reply.reader())?;
        Ok((colors, stats))
    }
}

/// Run the list-coloring protocol alone. Colors follow the order of `inst.z`.
pub fn d1lc_protocol(inst: &D1lcInstance, seed: u64, cfg: &VertexConfig) -> Result<(Vec<u32>, Transcript)> {
    inst.check_palettes()?;
    let party = |role: Party| {
        let view = inst.view(role);
        move |c: Channel| async move { d1lc_party(&c, &view, cfg).await }
    };
    let (a, b, t) = run_protocol(
        PublicCoins::new(seed),
        &cfg.runtime,
        party(Party::Alice),
        party(Party::Bob),
    )?;
    if a.0 != b.0 {
        return Err(ProtocolError::invariant("parties output different colorings"));
    }
    Ok((a.0, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(1)
    }

    #[test]
    fn local_solver_examples() {
        assert_eq!(local_list_color(1, &[], &[vec![2]], 100, &mut rng()), Some(vec![2]));
        assert_eq!(
            local_list_color(2, &[(0, 1)], &[vec![0], vec![0]], 100, &mut rng()),
            None
        );
        let c = local_list_color(
            3,
            &[(0, 1), (1, 2)],
            &[vec![0, 1], vec![0], vec![0, 1]],
            100,
            &mut rng(),
        );
        assert_eq!(c, Some(vec![1, 0, 1]));
    }

    #[test]
    fn exact_solver_on_degree_lists() {
        // K4 with lists of size 4 drawn from 0..6.
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let lists = vec![vec![0, 1, 2, 3], vec![0, 1, 2, 4], vec![0, 1, 5, 3], vec![0, 2, 3, 4]];
        let c = exact_list_color(4, &edges, &lists).unwrap();
        for &(u, v) in &edges {
            assert_ne!(c[u as usize], c[v as usize]);
        }
    }

    fn instance(z: Vec<u32>, edges: Vec<(u32, u32, Party)>, psi: Vec<Vec<u32>>, delta: usize) -> D1lcInstance {
        let n = z.iter().max().map_or(0, |&m| m as usize + 1);
        let full: Vec<u32> = (0..=delta as u32).collect();
        D1lcInstance {
            n,
            delta,
            psi_b: vec![full; z.len()],
            z,
            edges,
            psi_a: psi,
        }
    }

    #[test]
    fn protocol_examples() {
        let cfg = VertexConfig::default();
        let single = instance(vec![0], vec![], vec![vec![3]], 4);
        assert_eq!(d1lc_protocol(&single, 1, &cfg).unwrap().0, vec![3]);

        let pair = instance(vec![0, 1], vec![(0, 1, Party::Bob)], vec![vec![0, 1], vec![0, 1]], 2);
        for seed in 0..50 {
            let (c, t) = d1lc_protocol(&pair, seed, &cfg).unwrap();
            assert_ne!(c[0], c[1]);
            assert!(c.iter().all(|&x| x < 2));
            assert!(t.rounds.iter().all(|r| r.phase.starts_with("d1lc")));
        }
    }

    #[test]
    fn fallback_path() {
        // Threshold 0 forces the exact path whenever Bob has any surviving edge.
        let cfg = VertexConfig {
            h_threshold: 0.0,
            ..VertexConfig::default()
        };
        let inst = instance(
            vec![0, 1, 2],
            vec![(0, 1, Party::Bob), (1, 2, Party::Alice), (0, 2, Party::Bob)],
            vec![vec![0, 1, 2]; 3],
            2,
        );
        let (c, _) = d1lc_protocol(&inst, 4, &cfg).unwrap();
        let mut s = c.clone();
        s.sort();
        assert_eq!(s, vec![0, 1, 2]);
    }

    #[test]
    fn rejects_short_lists() {
        let inst = instance(vec![0, 1], vec![(0, 1, Party::Alice)], vec![vec![0], vec![0, 1]], 1);
        assert!(d1lc_protocol(&inst, 0, &VertexConfig::default()).is_err());
    }
}
