//! Edge coloring with `d` colors when the degree-`d` vertices are independent,
//! by fan rotation and alternating-path inversion.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{ProtocolError, Result};

const NONE: u32 = u32::MAX;

struct Slots {
    d: usize,
    at: Vec<u32>,
}

impl Slots {
    fn get(&self, v: u32, c: u32) -> u32 {
        self.at[v as usize * self.d + c as usize]
    }

    fn is_free(&self, v: u32, c: u32) -> bool {
        self.get(v, c) == NONE
    }

    fn first_free(&self, v: u32) -> Option<u32> {
        (0..self.d as u32).find(|&c| self.is_free(v, c))
    }

    fn color_of(&self, u: u32, w: u32) -> Option<u32> {
        (0..self.d as u32).find(|&c| self.get(u, c) == w)
    }

    fn set(&mut self, u: u32, w: u32, c: u32) -> Result<()> {
        if !self.is_free(u, c) || !self.is_free(w, c) {
            return Err(ProtocolError::invariant(format!("color {c} busy at {{{u}, {w}}}")));
        }
        self.at[u as usize * self.d + c as usize] = w;
        self.at[w as usize * self.d + c as usize] = u;
        Ok(())
    }

    fn unset(&mut self, u: u32, w: u32, c: u32) {
        self.at[u as usize * self.d + c as usize] = NONE;
        self.at[w as usize * self.d + c as usize] = NONE;
    }

    /// Color the uncolored edge `{x, y}` with `x` as the fan center.
    fn insert(&mut self, x: u32, y: u32) -> Result<()> {
        let stuck = || ProtocolError::invariant(format!("no free color around {{{x}, {y}}}"));
        if let Some(c) = (0..self.d as u32).find(|&c| self.is_free(x, c) && self.is_free(y, c)) {
            return self.set(x, y, c);
        }
        let mut fan = vec![y];
        'grow: loop {
            let last = *fan.last().unwrap();
            for c in 0..self.d as u32 {
                let w = self.get(x, c);
                if w != NONE && self.is_free(last, c) && !fan.contains(&w) {
                    fan.push(w);
                    continue 'grow;
                }
            }
            break;
        }
        let c = self.first_free(x).ok_or_else(stuck)?;
        let d = self.first_free(*fan.last().unwrap()).ok_or_else(stuck)?;
        if c != d {
            let mut path = Vec::new();
            let (mut v, mut col) = (x, d);
            loop {
                let w = self.get(v, col);
                if w == NONE {
                    break;
                }
                path.push((v, w, col));
                v = w;
                col = if col == d { c } else { d };
            }
            for &(a, b, col) in &path {
                self.unset(a, b, col);
            }
            for &(a, b, col) in &path {
                self.set(a, b, if col == d { c } else { d })?;
            }
        }
        let mut pick = None;
        for i in 0..fan.len() {
            if i > 0 {
                let ok = self
                    .color_of(x, fan[i])
                    .is_some_and(|col| self.is_free(fan[i - 1], col));
                if !ok {
                    break;
                }
            }
            if self.is_free(fan[i], d) {
                pick = Some(i);
                break;
            }
        }
        let w = pick.ok_or_else(stuck)?;
        let shifted: Vec<u32> = (1..=w)
            .map(|j| self.color_of(x, fan[j]).ok_or_else(stuck))
            .collect::<Result<_>>()?;
        for j in 1..=w {
            self.unset(x, fan[j], shifted[j - 1]);
        }
        for j in 0..w {
            self.set(x, fan[j], shifted[j])?;
        }
        self.set(x, fan[w], d)
    }
}

fn attempt(n: usize, d: usize, order: &[(u32, u32)], edges: &[(u32, u32)]) -> Result<Vec<u32>> {
    let mut slots = Slots {
        d,
        at: vec![NONE; n * d],
    };
    for &(x, y) in order {
        slots.insert(x, y)?;
    }
    edges
        .iter()
        .map(|&(u, v)| {
            slots
                .color_of(u, v)
                .ok_or_else(|| ProtocolError::invariant("edge left uncolored"))
        })
        .collect()
}

/// Proper edge coloring of `edges` with colors `0..d`. Requires maximum
/// degree at most `d` and the degree-`d` vertices to be independent.
pub fn fournier_color(n: usize, edges: &[(u32, u32)], d: usize) -> Result<Vec<u32>> {
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    if let Some(v) = deg.iter().position(|&x| x > d) {
        return Err(ProtocolError::precondition(format!(
            "vertex {v} has degree {} above {d}",
            deg[v]
        )));
    }
    let full = |v: u32| deg[v as usize] == d;
    if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| full(u) && full(v)) {
        return Err(ProtocolError::precondition(format!(
            "maximum-degree vertices {u} and {v} are adjacent"
        )));
    }
    // Edges away from full vertices go first; the rest use their full
    // endpoint as fan center, so every fan vertex keeps a free color.
    let mut light: Vec<(u32, u32)> = Vec::new();
    let mut heavy: Vec<(u32, u32)> = Vec::new();
    for &(u, v) in edges {
        if full(u) {
            heavy.push((u, v));
        } else if full(v) {
            heavy.push((v, u));
        } else {
            light.push((u, v));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(edges.len() as u64);
    let mut last_err = None;
    for round in 0..=10 {
        if round > 0 {
            light.shuffle(&mut rng);
            heavy.shuffle(&mut rng);
        }
        let order: Vec<(u32, u32)> = light.iter().chain(&heavy).copied().collect();
        match attempt(n, d, &order, edges) {
            Ok(c) => return Ok(c),
            Err(e) => last_err = Some(e),
        }
    }
    Err(ProtocolError::invariant(format!(
        "edge coloring failed after retries on n={n}, d={d}, edges={edges:?}: {}",
        last_err.expect("at least one attempt")
    )))
}
