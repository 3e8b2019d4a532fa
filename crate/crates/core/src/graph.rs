//! Simple undirected graphs and their split between the two parties.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// One of the two communicating parties. Also used as the owner tag of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }

    /// Single-letter code used by the graph file format.
    pub fn code(self) -> char {
        match self {
            Party::Alice => 'A',
            Party::Bob => 'B',
        }
    }

    pub fn from_code(c: &str) -> Option<Party> {
        match c {
            "A" => Some(Party::Alice),
            "B" => Some(Party::Bob),
            _ => None,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Alice => f.write_str("alice"),
            Party::Bob => f.write_str("bob"),
        }
    }
}

/// An undirected simple graph on vertices `0..n`.
///
/// Edges are stored normalized (`u < v`) and sorted, so an edge id is its
/// position in the canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
    incident: Vec<Vec<usize>>,
    max_degree: usize,
}

impl Graph {
    pub fn new<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut list = Vec::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x as usize >= n {
                    return Err(GraphError::OutOfRange { vertex: x as u64, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        for (id, &(u, v)) in list.iter().enumerate() {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
            incident[u as usize].push(id);
            incident[v as usize].push(id);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph {
            n,
            edges: list,
            adj,
            incident,
            max_degree,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    /// Ids of the edges incident to `v`, in increasing id order.
    pub fn incident(&self, v: u32) -> &[usize] {
        &self.incident[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn edge_id(&self, u: u32, v: u32) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }
}

/// Build a graph, rejecting loops, duplicates and out-of-range ids.
pub fn build_graph(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
    Graph::new(n, edges.iter().copied())
}

/// A graph whose edges are split between Alice and Bob.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePartition {
    graph: Graph,
    owner: Vec<Party>,
}

impl EdgePartition {
    pub fn new(graph: Graph, owner: Vec<Party>) -> Result<Self, GraphError> {
        if owner.len() != graph.edge_count() {
            return Err(GraphError::OwnerLength {
                expected: graph.edge_count(),
                got: owner.len(),
            });
        }
        Ok(EdgePartition { graph, owner })
    }

    /// Build from `(u, v, owner)` triples in any order.
    pub fn from_owned_edges(n: usize, edges: &[(u32, u32, Party)]) -> Result<Self, GraphError> {
        let graph = Graph::new(n, edges.iter().map(|&(u, v, _)| (u, v)))?;
        let mut owner = vec![Party::Alice; graph.edge_count()];
        for &(u, v, p) in edges {
            let id = graph.edge_id(u, v).expect("edge was just inserted");
            owner[id] = p;
        }
        Ok(EdgePartition { graph, owner })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn owner(&self, edge: usize) -> Party {
        self.owner[edge]
    }

    pub fn owners(&self) -> &[Party] {
        &self.owner
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    /// The edges held by `party`, in canonical order.
    pub fn edges_of(&self, party: Party) -> Vec<(u32, u32)> {
        self.graph
            .edges()
            .iter()
            .zip(&self.owner)
            .filter(|(_, &p)| p == party)
            .map(|(&e, _)| e)
            .collect()
    }

    /// Sorted neighbor lists of `party`'s graph (`N_A` or `N_B`).
    pub fn local_adjacency(&self, party: Party) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n()];
        for (u, v) in self.edges_of(party) {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        adj
    }
}
