use std::collections::VecDeque;

use crate::error::{ProtocolError, Result};

const FREE: u32 = u32::MAX;

/// Maximum matching in the bipartite graph between `left` and the vertices
/// they point to in `adj`. Returns the partner of each left vertex.
pub fn hopcroft_karp(n: usize, left: &[u32], adj: &[Vec<u32>]) -> Vec<Option<u32>> {
    let k = left.len();
    let mut mate_left = vec![FREE; k];
    let mut mate_right = vec![FREE; n];
    let mut dist = vec![0u32; k];
    loop {
        // Layer the left side by BFS from free left vertices.
        let mut queue = VecDeque::new();
        for i in 0..k {
            if mate_left[i] == FREE {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &w in &adj[left[i] as usize] {
                let j = mate_right[w as usize];
                if j == FREE {
                    found = true;
                } else if dist[j as usize] == u32::MAX {
                    dist[j as usize] = dist[i] + 1;
                    queue.push_back(j as usize);
                }
            }
        }
        if !found {
            break;
        }
        fn augment(
            i: usize,
            left: &[u32],
            adj: &[Vec<u32>],
            dist: &mut [u32],
            mate_left: &mut [u32],
            mate_right: &mut [u32],
        ) -> bool {
            for &w in &adj[left[i] as usize] {
                let j = mate_right[w as usize];
                let ok = j == FREE
                    || (dist[j as usize] == dist[i] + 1 && augment(j as usize, left, adj, dist, mate_left, mate_right));
                if ok {
                    mate_left[i] = w;
                    mate_right[w as usize] = i as u32;
                    return true;
                }
            }
            dist[i] = u32::MAX;
            false
        }
        let mut progressed = false;
        for i in 0..k {
            if mate_left[i] == FREE && augment(i, left, adj, &mut dist, &mut mate_left, &mut mate_right) {
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    mate_left.into_iter().map(|w| (w != FREE).then_some(w)).collect()
}

/// Matching that covers every vertex of degree `Δ` in `edges`. Returned as
/// `(hub, partner)` pairs with the degree-`Δ` vertex first.
pub fn delta_perfect_matching(n: usize, edges: &[(u32, u32)], delta: usize) -> Result<Vec<(u32, u32)>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let hubs: Vec<u32> = (0..n as u32)
        .filter(|&v| delta > 0 && adj[v as usize].len() == delta)
        .collect();
    for &h in &hubs {
        if let Some(&w) = adj[h as usize].iter().find(|&&w| adj[w as usize].len() == delta) {
            return Err(ProtocolError::precondition(format!(
                "degree-Δ vertices {h} and {w} are adjacent"
            )));
        }
    }
    let mate = hopcroft_karp(n, &hubs, &adj);
    let mut out = Vec::with_capacity(hubs.len());
    for (&h, m) in hubs.iter().zip(mate) {
        match m {
            Some(w) => out.push((h, w)),
            None => return Err(ProtocolError::invariant(format!("degree-Δ vertex {h} left unmatched"))),
        }
    }
    Ok(out)
}
