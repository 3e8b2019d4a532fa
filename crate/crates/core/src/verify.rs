//! Independent checkers for vertex and edge colorings.

use serde::{Deserialize, Serialize};

use crate::graph::{EdgePartition, Graph, Party};

/// A possibly partial vertex coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexColoring {
    pub color: Vec<Option<u32>>,
}

impl VertexColoring {
    pub fn unset(n: usize) -> Self {
        VertexColoring { color: vec![None; n] }
    }

    pub fn complete(colors: Vec<u32>) -> Self {
        VertexColoring {
            color: colors.into_iter().map(Some).collect(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.color.iter().all(Option::is_some)
    }
}

/// A possibly partial edge coloring indexed by canonical edge id, with the
/// party that reported each color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub color: Vec<Option<u32>>,
    pub reporter: Vec<Party>,
}

impl EdgeColoring {
    pub fn unset(partition: &EdgePartition) -> Self {
        EdgeColoring {
            color: vec![None; partition.graph().edge_count()],
            reporter: partition.owners().to_vec(),
        }
    }

    pub fn palette_used(&self) -> usize {
        let mut seen: Vec<u32> = self.color.iter().flatten().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    LengthMismatch {
        expected: usize,
        got: usize,
    },
    UncoloredVertex {
        vertex: u32,
    },
    UncoloredEdge {
        u: u32,
        v: u32,
    },
    VertexOutOfPalette {
        vertex: u32,
        color: u32,
    },
    EdgeOutOfPalette {
        u: u32,
        v: u32,
        color: u32,
    },
    AdjacentSameColor {
        u: u32,
        v: u32,
        color: u32,
    },
    IncidentSameColor {
        vertex: u32,
        color: u32,
        first: (u32, u32),
        second: (u32, u32),
    },
    WrongReporter {
        u: u32,
        v: u32,
        owner: Party,
        reporter: Party,
    },
}

/// Empty iff `c` is complete, proper, and uses colors below `palette_size`.
pub fn verify_vertex_coloring(g: &Graph, c: &VertexColoring, palette_size: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    if c.color.len() != g.n() {
        out.push(Violation::LengthMismatch {
            expected: g.n(),
            got: c.color.len(),
        });
        return out;
    }
    for (v, col) in c.color.iter().enumerate() {
        match col {
            None => out.push(Violation::UncoloredVertex { vertex: v as u32 }),
            Some(x) if *x as usize >= palette_size => out.push(Violation::VertexOutOfPalette {
                vertex: v as u32,
                color: *x,
            }),
            _ => {}
        }
    }
    for &(u, v) in g.edges() {
        if let (Some(a), Some(b)) = (c.color[u as usize], c.color[v as usize]) {
            if a == b {
                out.push(Violation::AdjacentSameColor { u, v, color: a });
            }
        }
    }
    out
}

/// Empty iff `c` is complete, proper at every vertex, uses colors below
/// `palette_size`, and every edge was reported by its owner.
pub fn verify_edge_coloring(p: &EdgePartition, c: &EdgeColoring, palette_size: usize) -> Vec<Violation> {
    let g = p.graph();
    let m = g.edge_count();
    let mut out = Vec::new();
    if c.color.len() != m || c.reporter.len() != m {
        out.push(Violation::LengthMismatch {
            expected: m,
            got: c.color.len().min(c.reporter.len()),
        });
        return out;
    }
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        match c.color[id] {
            None => out.push(Violation::UncoloredEdge { u, v }),
            Some(x) if x as usize >= palette_size => out.push(Violation::EdgeOutOfPalette { u, v, color: x }),
            _ => {}
        }
        if c.reporter[id] != p.owner(id) {
            out.push(Violation::WrongReporter {
                u,
                v,
                owner: p.owner(id),
                reporter: c.reporter[id],
            });
        }
    }
    for x in 0..g.n() as u32 {
        let mut seen: Vec<(u32, usize)> = g
            .incident(x)
            .iter()
            .filter_map(|&e| c.color[e].map(|col| (col, e)))
            .collect();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0].0 == w[1].0 {
                out.push(Violation::IncidentSameColor {
                    vertex: x,
                    color: w[0].0,
                    first: g.edges()[w[0].1],
                    second: g.edges()[w[1].1],
                });
            }
        }
    }
    out
}
