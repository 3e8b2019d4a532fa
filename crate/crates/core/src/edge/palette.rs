use crate::graph::Party;

/// Split of the `2Δ−1` colors into two party palettes and one special color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaletteSplit {
    pub alice: Vec<u32>,
    pub bob: Vec<u32>,
    pub special: u32,
}

impl PaletteSplit {
    pub fn of(&self, party: Party) -> &[u32] {
        match party {
            Party::Alice => &self.alice,
            Party::Bob => &self.bob,
        }
    }
}

/// Alice gets `0..=Δ−2`, Bob `Δ−1..=2Δ−3`, the special color is `2Δ−2`.
pub fn partition_palette(delta: usize) -> PaletteSplit {
    assert!(delta >= 2, "palette split needs Δ ≥ 2");
    let d = delta as u32;
    PaletteSplit {
        alice: (0..d - 1).collect(),
        bob: (d - 1..2 * d - 2).collect(),
        special: 2 * d - 2,
    }
}
