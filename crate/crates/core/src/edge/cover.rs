use std::collections::HashMap;

use crate::error::{ProtocolError, Result};
use crate::runtime::{BitReader, BitString};

/// Greedy cover of a target set by colors free at the sender. Entry `i` is
/// a color and a bitmap over the targets still uncovered before it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AvailabilityCover {
    pub entries: Vec<(u32, Vec<bool>)>,
}

impl AvailabilityCover {
    pub fn bitmap_bits(&self) -> usize {
        self.entries.iter().map(|e| e.1.len()).sum()
    }

    pub fn encode(&self, color_width: u32) -> BitString {
        let mut out = BitString::new();
        for (c, bitmap) in &self.entries {
            out.push_uint(*c as u64, color_width);
            out.extend_bits(bitmap.iter().copied());
        }
        out
    }

    /// Inverse of [`encode`](Self::encode). The target list is shared state,
    /// so entry boundaries need no framing.
    pub fn decode(r: &mut BitReader<'_>, targets: &[u32], color_width: u32) -> Result<Self> {
        let mut entries = Vec::new();
        let mut left = targets.len();
        while left > 0 {
            let c = r.read_uint(color_width)? as u32;
            let bitmap = (0..left).map(|_| r.read_bit()).collect::<Result<Vec<_>>>()?;
            let hit = bitmap.iter().filter(|&&b| b).count();
            if hit == 0 {
                return Err(ProtocolError::malformed("cover entry covers nothing"));
            }
            left -= hit;
            entries.push((c, bitmap));
        }
        r.finish()?;
        Ok(AvailabilityCover { entries })
    }

    /// Color of the first entry covering each target.
    pub fn assignment(&self, targets: &[u32]) -> HashMap<u32, u32> {
        let mut out = HashMap::new();
        let mut u: Vec<u32> = targets.to_vec();
        for (c, bitmap) in &self.entries {
            let mut next = Vec::new();
            for (&v, &b) in u.iter().zip(bitmap) {
                if b {
                    out.insert(v, *c);
                } else {
                    next.push(v);
                }
            }
            u = next;
        }
        out
    }
}

/// Greedily pick the palette color free at the most uncovered targets
/// (lowest color on ties) until every target is covered.
///
/// `used_at[v]` lists the sender's colors at `v`; `sender_degree[v]` is its
/// full local degree.
pub fn edge_sample_broadcast(
    used_at: &[Vec<u32>],
    sender_degree: &[usize],
    palette: &[u32],
    delta: usize,
    targets: &[u32],
) -> Result<AvailabilityCover> {
    if let Some(&v) = targets.iter().find(|&&v| sender_degree[v as usize] > delta / 2) {
        return Err(ProtocolError::precondition(format!(
            "target {v} has sender degree {} above Δ/2",
            sender_degree[v as usize]
        )));
    }
    let width = palette.iter().max().map_or(0, |&c| c as usize + 1);
    let free: HashMap<u32, Vec<bool>> = targets
        .iter()
        .map(|&v| {
            let mut f = vec![true; width];
            for &c in &used_at[v as usize] {
                if let Some(slot) = f.get_mut(c as usize) {
                    *slot = false;
                }
            }
            (v, f)
        })
        .collect();
    let mut cover = AvailabilityCover::default();
    let mut u: Vec<&[bool]> = targets.iter().map(|v| free[v].as_slice()).collect();
    while !u.is_empty() {
        let mut best = (0usize, 0u32);
        for &c in palette {
            let hits = u.iter().filter(|f| f[c as usize]).count();
            if hits > best.0 {
                best = (hits, c);
            }
        }
        if best.0 == 0 {
            return Err(ProtocolError::invariant(
                "no palette color free at any remaining target",
            ));
        }
        let c = best.1 as usize;
        let bitmap: Vec<bool> = u.iter().map(|f| f[c]).collect();
        u.retain(|f| !f[c]);
        cover.entries.push((best.1, bitmap));
    }
    if cover.bitmap_bits() > 3 * targets.len() {
        return Err(ProtocolError::invariant(format!(
            "cover bitmaps use {} bits for {} targets",
            cover.bitmap_bits(),
            targets.len()
        )));
    }
    Ok(cover)
}
