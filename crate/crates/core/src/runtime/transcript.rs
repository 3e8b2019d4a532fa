use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Bits sent by each side in one communication round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub a: u64,
    pub b: u64,
    pub phase: String,
}

/// Exact per-round accounting of a protocol run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Transcript {
    pub rounds: Vec<RoundRecord>,
    pub total_bits: u64,
    pub total_rounds: u64,
}

impl Transcript {
    pub fn push(&mut self, a: u64, b: u64, phase: &str) {
        self.rounds.push(RoundRecord {
            a,
            b,
            phase: phase.to_string(),
        });
        self.total_bits += a + b;
        self.total_rounds += 1;
    }

    /// Total bits per phase tag.
    pub fn bits_by_phase(&self) -> BTreeMap<String, u64> {
        let mut out = BTreeMap::new();
        for r in &self.rounds {
            *out.entry(r.phase.clone()).or_insert(0) += r.a + r.b;
        }
        out
    }

    pub fn rounds_in_phase(&self, phase: &str) -> u64 {
        self.rounds.iter().filter(|r| r.phase == phase).count() as u64
    }

    /// True iff the cached totals agree with the per-round records.
    pub fn is_consistent(&self) -> bool {
        self.total_rounds == self.rounds.len() as u64
            && self.total_bits == self.rounds.iter().map(|r| r.a + r.b).sum::<u64>()
    }
}
