//! Text formats for graphs and colorings.
//!
//! Graph file: `n m`, then `m` lines `u v O` with `O` in `{A, B}`.
//!
//! Coloring file: a header `vertex <palette>` followed by `v c` lines, or
//! `edge <palette>` followed by `u v c R` lines. `-` marks an unset color.

use std::fmt::Write as _;

use crate::error::GraphError;
use crate::graph::{EdgePartition, Party};
use crate::verify::{EdgeColoring, VertexColoring};

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, f)| !f.is_empty())
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, GraphError> {
    s.parse()
        .map_err(|_| parse_err(line, format!("expected a number, got `{s}`")))
}

pub fn parse_graph(text: &str) -> Result<EdgePartition, GraphError> {
    let mut lines = data_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    if header.len() != 2 {
        return Err(parse_err(hl, "header must be `n m`"));
    }
    let n: usize = num(hl, header[0])?;
    let m: usize = num(hl, header[1])?;
    let mut edges = Vec::with_capacity(m);
    for (ln, f) in lines.by_ref().take(m) {
        if f.len() != 3 {
            return Err(parse_err(ln, "edge line must be `u v O`"));
        }
        let u: u64 = num(ln, f[0])?;
        let v: u64 = num(ln, f[1])?;
        for x in [u, v] {
            if x >= n as u64 {
                return Err(GraphError::OutOfRange { vertex: x, n });
            }
        }
        let owner = Party::from_code(f[2]).ok_or_else(|| parse_err(ln, "owner must be A or B"))?;
        edges.push((u as u32, v as u32, owner));
    }
    if edges.len() != m {
        return Err(parse_err(
            hl,
            format!("header promises {m} edges, found {}", edges.len()),
        ));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing data after the last edge"));
    }
    EdgePartition::from_owned_edges(n, &edges)
}

pub fn write_graph(p: &EdgePartition) -> String {
    let g = p.graph();
    let mut s = String::new();
    writeln!(s, "{} {}", g.n(), g.edge_count()).unwrap();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        writeln!(s, "{u} {v} {}", p.owner(id).code()).unwrap();
    }
    s
}

/// A coloring read from a coloring file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringFile {
    Vertex { palette: usize, coloring: VertexColoring },
    Edge { palette: usize, coloring: EdgeColoring },
}

fn opt_color(line: usize, s: &str) -> Result<Option<u32>, GraphError> {
    if s == "-" {
        Ok(None)
    } else {
        num(line, s).map(Some)
    }
}

/// Parse a coloring against the graph it colors.
pub fn parse_coloring(text: &str, p: &EdgePartition) -> Result<ColoringFile, GraphError> {
    let mut lines = data_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    if header.len() != 2 {
        return Err(parse_err(hl, "header must be `vertex <palette>` or `edge <palette>`"));
    }
    let palette: usize = num(hl, header[1])?;
    match header[0] {
        "vertex" => {
            let mut coloring = VertexColoring::unset(p.n());
            for (ln, f) in lines {
                if f.len() != 2 {
                    return Err(parse_err(ln, "vertex line must be `v c`"));
                }
                let v: usize = num(ln, f[0])?;
                if v >= p.n() {
                    return Err(GraphError::OutOfRange {
                        vertex: v as u64,
                        n: p.n(),
                    });
                }
                coloring.color[v] = opt_color(ln, f[1])?;
            }
            Ok(ColoringFile::Vertex { palette, coloring })
        }
        "edge" => {
            let mut coloring = EdgeColoring::unset(p);
            for (ln, f) in lines {
                if f.len() != 4 {
                    return Err(parse_err(ln, "edge line must be `u v c R`"));
                }
                let u: u32 = num(ln, f[0])?;
                let v: u32 = num(ln, f[1])?;
                let id = p
                    .graph()
                    .edge_id(u, v)
                    .ok_or_else(|| parse_err(ln, format!("{{{u}, {v}}} is not an edge")))?;
                coloring.color[id] = opt_color(ln, f[2])?;
                coloring.reporter[id] =
                    Party::from_code(f[3]).ok_or_else(|| parse_err(ln, "reporter must be A or B"))?;
            }
            Ok(ColoringFile::Edge { palette, coloring })
        }
        other => Err(parse_err(hl, format!("unknown coloring kind `{other}`"))),
    }
}

fn color_str(c: Option<u32>) -> String {
    c.map_or_else(|| "-".to_string(), |x| x.to_string())
}

pub fn write_vertex_coloring(c: &VertexColoring, palette: usize) -> String {
    let mut s = format!("vertex {palette}\n");
    for (v, col) in c.color.iter().enumerate() {
        writeln!(s, "{v} {}", color_str(*col)).unwrap();
    }
    s
}

pub fn write_edge_coloring(p: &EdgePartition, c: &EdgeColoring, palette: usize) -> String {
    let mut s = format!("edge {palette}\n");
    for (id, &(u, v)) in p.graph().edges().iter().enumerate() {
        writeln!(s, "{u} {v} {} {}", color_str(c.color[id]), c.reporter[id].code()).unwrap();
    }
    s
}
