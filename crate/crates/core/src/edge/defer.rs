use crate::error::{ProtocolError, Result};

type EdgeList = Vec<(u32, u32)>;

/// Split one party's edges into deferred edges (both endpoints of current
/// degree at least `Δ−1`) and the rest, scanning in canonical order.
pub fn defer_edges(n: usize, edges: &[(u32, u32)], delta: usize) -> (EdgeList, EdgeList) {
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    let mut dg = Vec::new();
    let mut rg = Vec::new();
    let bar = delta.saturating_sub(1);
    for &(u, v) in edges {
        if deg[u as usize] >= bar && deg[v as usize] >= bar {
            deg[u as usize] -= 1;
            deg[v as usize] -= 1;
            dg.push((u, v));
        } else {
            rg.push((u, v));
        }
    }
    (dg, rg)
}

/// One party's edges split into deferred edges, the matching, and the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDecomposition {
    pub dg: Vec<(u32, u32)>,
    /// `(hub, partner)` pairs.
    pub matching: Vec<(u32, u32)>,
    pub rg_prime: Vec<(u32, u32)>,
}

fn degrees<'a>(n: usize, edges: impl IntoIterator<Item = &'a (u32, u32)>) -> Vec<usize> {
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    deg
}

impl LocalDecomposition {
    pub fn dg_max_degree(&self, n: usize) -> usize {
        degrees(n, &self.dg).into_iter().max().unwrap_or(0)
    }

    /// Check every structural property the protocol relies on.
    pub fn check(&self, n: usize, delta: usize, own_edges: &[(u32, u32)]) -> Result<()> {
        let fail = |m: String| Err(ProtocolError::invariant(m));
        let norm = |&(u, v): &(u32, u32)| (u.min(v), u.max(v));
        let mut all: Vec<(u32, u32)> = self
            .dg
            .iter()
            .chain(&self.matching)
            .chain(&self.rg_prime)
            .map(norm)
            .collect();
        all.sort_unstable();
        if all != own_edges {
            return fail("decomposition does not partition the edge set".into());
        }
        if self.dg_max_degree(n) > 2 {
            return fail(format!("deferred subgraph has degree {}", self.dg_max_degree(n)));
        }
        let rg_deg = degrees(n, self.rg_prime.iter().chain(&self.matching));
        let bar = delta.saturating_sub(1);
        if let Some(&(u, v)) = self
            .rg_prime
            .iter()
            .chain(&self.matching)
            .find(|&&(u, v)| rg_deg[u as usize] >= bar && rg_deg[v as usize] >= bar)
        {
            return fail(format!("high-degree vertices {u} and {v} adjacent in RG"));
        }
        let m_deg = degrees(n, &self.matching);
        if m_deg.iter().any(|&d| d > 1) {
            return fail("matching is not a matching".into());
        }
        let mut hub = vec![false; n];
        for &(h, _) in &self.matching {
            hub[h as usize] = true;
        }
        if let Some(v) = (0..n).find(|&v| rg_deg[v] == delta && delta > 0 && !hub[v]) {
            return fail(format!("degree-Δ vertex {v} not covered by the matching"));
        }
        let rest = degrees(n, &self.rg_prime);
        if let Some(v) = (0..n).find(|&v| rest[v] + 1 > delta.max(1)) {
            return fail(format!("vertex {v} has degree {} after matching removal", rest[v]));
        }
        if let Some(&(u, v)) = self
            .rg_prime
            .iter()
            .find(|&&(u, v)| rest[u as usize] == bar && rest[v as usize] == bar)
        {
            return fail(format!("degree-(Δ−1) vertices {u} and {v} adjacent after removal"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_defers_one_edge() {
        let (dg, rg) = defer_edges(3, &[(0, 1), (0, 2), (1, 2)], 3);
        assert_eq!(dg, vec![(0, 1)]);
        assert_eq!(rg, vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn star_and_empty() {
        let star: Vec<(u32, u32)> = (1..=5).map(|l| (0, l)).collect();
        let (dg, rg) = defer_edges(6, &star, 5);
        assert!(dg.is_empty());
        assert_eq!(rg.len(), 5);
        let (dg, rg) = defer_edges(3, &[], 3);
        assert!(dg.is_empty() && rg.is_empty());
    }

    #[test]
    fn check_catches_bad_split() {
        let d = LocalDecomposition {
            dg: vec![],
            matching: vec![],
            rg_prime: vec![(0, 1)],
        };
        assert!(d.check(2, 3, &[(0, 1)]).is_ok());
        assert!(d.check(2, 3, &[(0, 1), (1, 2)]).is_err());
        // With Δ = 2 both endpoints count as high.
        assert!(d.check(2, 2, &[(0, 1)]).is_err());
        // Edge between two degree-1 vertices with Δ = 1 needs to be matched.
        assert!(d.check(2, 1, &[(0, 1)]).is_err());
    }
}
