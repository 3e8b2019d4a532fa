use std::collections::HashMap;

use crate::error::{ProtocolError, Result};
use crate::graph::{EdgePartition, Party};
use crate::runtime::{bit_width, run_protocol, BitString, Channel, PublicCoins, RuntimeConfig, Transcript};
use crate::verify::EdgeColoring;

use super::cover::{edge_sample_broadcast, AvailabilityCover};
use super::defer::{defer_edges, LocalDecomposition};
use super::fournier::fournier_color;
use super::matching::delta_perfect_matching;
use super::palette::{partition_palette, PaletteSplit};

/// Number of colors of the other palette offered for deferred edges.
pub const MASK_COLORS: usize = 7;

/// Per-party measurements of one run of the split-palette protocol.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeStats {
    pub dg_edges: usize,
    pub dg_max_degree: usize,
    pub matching_edges: usize,
    pub special_edges: usize,
    pub cover_targets: usize,
    pub cover_entries: usize,
    pub cover_bitmap_bits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRun {
    pub coloring: EdgeColoring,
    pub transcript: Transcript,
    /// Alice's and Bob's stats; `None` on the small-Δ path.
    pub stats: Option<[EdgeStats; 2]>,
}

fn local_degrees(n: usize, edges: &[(u32, u32)]) -> Vec<usize> {
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    deg
}

fn position(own: &[(u32, u32)], e: (u32, u32)) -> usize {
    own.binary_search(&(e.0.min(e.1), e.0.max(e.1)))
        .expect("edge belongs to this party")
}

/// Colors for matching edges. `cover` maps a partner vertex to the other
/// party's color announced for it.
pub fn color_matching_edges(
    matching: &[(u32, u32)],
    other_covered: &[bool],
    other_high: &[bool],
    cover: &HashMap<u32, u32>,
    split: &PaletteSplit,
) -> Result<Vec<u32>> {
    matching
        .iter()
        .map(|&(_, v)| {
            if !other_covered[v as usize] || other_high[v as usize] {
                Ok(split.special)
            } else {
                cover
                    .get(&v)
                    .copied()
                    .ok_or_else(|| ProtocolError::invariant(format!("no announced color for vertex {v}")))
            }
        })
        .collect()
}

/// Greedy coloring of deferred edges with the other party's first seven
/// colors. `masks[v]` bit `j` says `other_colors[j]` is free at `v` on the
/// other side; `taken[v]` lists colors this party already put at `v`.
pub fn color_deferred(dg: &[(u32, u32)], masks: &[u8], other_colors: &[u32], taken: &[Vec<u32>]) -> Result<Vec<u32>> {
    let mut local: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut out = Vec::with_capacity(dg.len());
    for &(u, v) in dg {
        let busy = |x: u32, c: u32, local: &HashMap<u32, Vec<u32>>| {
            taken[x as usize].contains(&c) || local.get(&x).is_some_and(|l| l.contains(&c))
        };
        let pick = (0..other_colors.len().min(MASK_COLORS)).find(|&j| {
            let c = other_colors[j];
            masks[u as usize] >> j & 1 == 1
                && masks[v as usize] >> j & 1 == 1
                && !busy(u, c, &local)
                && !busy(v, c, &local)
        });
        let j = pick.ok_or_else(|| {
            ProtocolError::invariant(format!(
                "no color for deferred edge {{{u}, {v}}}: masks {:07b}/{:07b}, taken {:?}/{:?}",
                masks[u as usize], masks[v as usize], taken[u as usize], taken[v as usize]
            ))
        })?;
        let c = other_colors[j];
        local.entry(u).or_default().push(c);
        local.entry(v).or_default().push(c);
        out.push(c);
    }
    Ok(out)
}

fn bools(r: &mut crate::runtime::BitReader<'_>, k: usize) -> Result<Vec<bool>> {
    (0..k).map(|_| r.read_bit()).collect()
}

async fn split_party(chan: &Channel, n: usize, delta: usize, own: &[(u32, u32)]) -> Result<(Vec<u32>, EdgeStats)> {
    let me = chan.role();
    let split = partition_palette(delta);
    let own_pal = split.of(me).to_vec();
    let other_pal = split.of(me.other()).to_vec();
    let deg = local_degrees(n, own);

    chan.set_phase("defer");
    let (dg, rg) = defer_edges(n, own, delta);
    let matching = delta_perfect_matching(n, &rg, delta)?;
    let mut in_m: Vec<(u32, u32)> = matching.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    in_m.sort_unstable();
    let rg_prime: Vec<(u32, u32)> = rg.iter().copied().filter(|e| in_m.binary_search(e).is_err()).collect();
    let dec = LocalDecomposition { dg, matching, rg_prime };
    dec.check(n, delta, own)?;
    let rg_colors = fournier_color(n, &dec.rg_prime, delta - 1)?;

    let mut colors = vec![u32::MAX; own.len()];
    let mut used_at = vec![Vec::new(); n];
    for (&(u, v), &c) in dec.rg_prime.iter().zip(&rg_colors) {
        let c = own_pal[c as usize];
        colors[position(own, (u, v))] = c;
        used_at[u as usize].push(c);
        used_at[v as usize].push(c);
    }

    chan.set_phase("flags");
    let mut covered = vec![false; n];
    for &(h, w) in &dec.matching {
        covered[h as usize] = true;
        covered[w as usize] = true;
    }
    let high: Vec<bool> = deg.iter().map(|&d| d > delta / 2).collect();
    let mut msg: BitString = covered.iter().copied().collect();
    msg.extend_bits(high.iter().copied());
    let reply = chan.sub(0).exchange(msg).await;
    let mut r = reply.reader();
    let other_covered = bools(&mut r, n)?;
    let other_high = bools(&mut r, n)?;
    r.finish()?;

    chan.set_phase("cover");
    let color_w = bit_width(2 * delta as u64 - 2);
    let my_targets: Vec<u32> = (0..n as u32)
        .filter(|&v| other_covered[v as usize] && covered[v as usize] && !high[v as usize])
        .collect();
    let their_targets: Vec<u32> = (0..n as u32)
        .filter(|&v| covered[v as usize] && other_covered[v as usize] && !other_high[v as usize])
        .collect();
    let mine = edge_sample_broadcast(&used_at, &deg, &own_pal, delta, &my_targets)?;
    let reply = chan.sub(1).exchange(mine.encode(color_w)).await;
    let theirs = AvailabilityCover::decode(&mut reply.reader(), &their_targets, color_w)?;
    let m_colors = color_matching_edges(
        &dec.matching,
        &other_covered,
        &other_high,
        &theirs.assignment(&their_targets),
        &split,
    )?;
    let mut taken = vec![Vec::new(); n];
    for (&(h, w), &c) in dec.matching.iter().zip(&m_colors) {
        colors[position(own, (h, w))] = c;
        taken[h as usize].push(c);
        taken[w as usize].push(c);
    }

    chan.set_phase("masks");
    let mut msg = BitString::new();
    for used in &used_at {
        for &c in &own_pal[..MASK_COLORS] {
            msg.push_bit(!used.contains(&c));
        }
    }
    let reply = chan.sub(2).exchange(msg).await;
    let mut r = reply.reader();
    let masks: Vec<u8> = (0..n)
        .map(|_| r.read_uint(MASK_COLORS as u32).map(|m| (m as u8).reverse_bits() >> 1))
        .collect::<Result<_>>()?;
    r.finish()?;
    let dg_colors = color_deferred(&dec.dg, &masks, &other_pal, &taken)?;
    for (&e, &c) in dec.dg.iter().zip(&dg_colors) {
        colors[position(own, e)] = c;
    }

    let stats = EdgeStats {
        dg_edges: dec.dg.len(),
        dg_max_degree: dec.dg_max_degree(n),
        matching_edges: dec.matching.len(),
        special_edges: m_colors.iter().filter(|&&c| c == split.special).count(),
        cover_targets: my_targets.len(),
        cover_entries: mine.entries.len(),
        cover_bitmap_bits: mine.bitmap_bits(),
    };
    Ok((colors, stats))
}

fn greedy_free(q: usize, u: u32, v: u32, ok: impl Fn(u32, u32) -> bool) -> Option<u32> {
    (0..q as u32).find(|&c| ok(u, c) && ok(v, c))
}

async fn small_delta_party(chan: &Channel, n: usize, delta: usize, own: &[(u32, u32)]) -> Result<Vec<u32>> {
    if delta <= 1 {
        return Ok(vec![0; own.len()]);
    }
    let q = 2 * delta - 1;
    let mut used = vec![vec![false; q]; n];
    let mut colors = Vec::with_capacity(own.len());
    chan.set_phase("ship");
    let stuck = |u: u32, v: u32| ProtocolError::invariant(format!("no free color for {{{u}, {v}}}"));
    if chan.is_alice() {
        for &(u, v) in own {
            let c = greedy_free(q, u, v, |x, c| !used[x as usize][c as usize]).ok_or_else(|| stuck(u, v))?;
            used[u as usize][c as usize] = true;
            used[v as usize][c as usize] = true;
            colors.push(c);
        }
        let msg: BitString = used.iter().flat_map(|row| row.iter().map(|&b| !b)).collect();
        chan.exchange(msg).await;
    } else {
        let msg = chan.recv().await;
        let mut r = msg.reader();
        let mut alice_free = vec![vec![false; q]; n];
        for row in alice_free.iter_mut() {
            for slot in row.iter_mut() {
                *slot = r.read_bit()?;
            }
        }
        r.finish()?;
        for &(u, v) in own {
            let ok = |x: u32, c: u32| alice_free[x as usize][c as usize] && !used[x as usize][c as usize];
            let c = greedy_free(q, u, v, ok).ok_or_else(|| stuck(u, v))?;
            used[u as usize][c as usize] = true;
            used[v as usize][c as usize] = true;
            colors.push(c);
        }
    }
    Ok(colors)
}

fn assemble(p: &EdgePartition, a: &[u32], b: &[u32]) -> EdgeColoring {
    let mut coloring = EdgeColoring::unset(p);
    let (mut ia, mut ib) = (0, 0);
    for id in 0..p.graph().edge_count() {
        let c = match p.owner(id) {
            Party::Alice => {
                ia += 1;
                a[ia - 1]
            }
            Party::Bob => {
                ib += 1;
                b[ib - 1]
            }
        };
        coloring.color[id] = Some(c);
    }
    coloring
}

/// Greedy `(2Δ−1)`-coloring in one round, for `Δ ≤ 7`.
pub fn small_delta_protocol(p: &EdgePartition, cfg: &RuntimeConfig) -> Result<(EdgeColoring, Transcript)> {
    let (n, delta) = (p.n(), p.max_degree());
    if delta > 7 {
        return Err(ProtocolError::precondition("small-Δ protocol needs Δ ≤ 7"));
    }
    let party = |role: Party| {
        let own = p.edges_of(role);
        move |c: Channel| async move { small_delta_party(&c, n, delta, &own).await }
    };
    let (a, b, t) = run_protocol(PublicCoins::new(0), cfg, party(Party::Alice), party(Party::Bob))?;
    Ok((assemble(p, &a, &b), t))
}

fn two_delta_local(n: usize, delta: usize, own: &[(u32, u32)], me: Party) -> Result<Vec<u32>> {
    if own.is_empty() {
        return Ok(Vec::new());
    }
    let d = delta as u32;
    let (own_base, other_first) = match me {
        Party::Alice => (0, d),
        Party::Bob => (d, 0),
    };
    let mut deg = local_degrees(n, own);
    let mut colors = vec![u32::MAX; own.len()];
    let mut rest = Vec::new();
    let mut rest_pos = Vec::new();
    for (i, &(u, v)) in own.iter().enumerate() {
        if deg[u as usize] == delta && deg[v as usize] == delta {
            deg[u as usize] -= 1;
            deg[v as usize] -= 1;
            colors[i] = other_first;
        } else {
            rest.push((u, v));
            rest_pos.push(i);
        }
    }
    let rest_colors = fournier_color(n, &rest, delta)?;
    for (i, c) in rest_pos.into_iter().zip(rest_colors) {
        colors[i] = own_base + c;
    }
    Ok(colors)
}

/// Zero-communication `2Δ`-coloring: each party colors its own graph with
/// its own `Δ` colors, moving a matching onto the other party's palette.
pub fn two_delta_protocol(p: &EdgePartition) -> Result<(EdgeColoring, Transcript)> {
    let (n, delta) = (p.n(), p.max_degree());
    let party = |role: Party| {
        let own = p.edges_of(role);
        move |_c: Channel| async move { two_delta_local(n, delta, &own, role) }
    };
    let (a, b, t) = run_protocol(
        PublicCoins::new(0),
        &RuntimeConfig::default(),
        party(Party::Alice),
        party(Party::Bob),
    )?;
    Ok((assemble(p, &a, &b), t))
}

/// Deterministic `(2Δ−1)`-edge coloring. `Δ ≤ 7` takes the one-round greedy
/// path; larger `Δ` runs the split-palette protocol.
pub fn edge_coloring_protocol(p: &EdgePartition, cfg: &RuntimeConfig) -> Result<EdgeRun> {
    let (n, delta) = (p.n(), p.max_degree());
    if delta <= 7 {
        let (coloring, transcript) = small_delta_protocol(p, cfg)?;
        return Ok(EdgeRun {
            coloring,
            transcript,
            stats: None,
        });
    }
    let party = |role: Party| {
        let own = p.edges_of(role);
        move |c: Channel| async move { split_party(&c, n, delta, &own).await }
    };
    let (a, b, transcript) = run_protocol(PublicCoins::new(0), cfg, party(Party::Alice), party(Party::Bob))?;
    let coloring = assemble(p, &a.0, &b.0);
    let special = 2 * delta as u32 - 2;
    let mut seen = vec![false; n];
    for (id, &(u, v)) in p.graph().edges().iter().enumerate() {
        if coloring.color[id] == Some(special) {
            for x in [u, v] {
                if std::mem::replace(&mut seen[x as usize], true) {
                    return Err(ProtocolError::invariant(format!("special color twice at {x}")));
                }
            }
        }
    }
    Ok(EdgeRun {
        coloring,
        transcript,
        stats: Some([a.1, b.1]),
    })
}
