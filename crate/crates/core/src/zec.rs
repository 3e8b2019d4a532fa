//! The zero-communication edge-coloring game on nine vertices.
//!
//! Inputs are indexed as in [`zec_inputs`]: input `(i, j)` with `i < j` means
//! the player's two edges go to shared vertices `v_i` and `v_j`. An outcome
//! is `lo·3 + hi`, the colors of the edges to `v_i` and `v_j`.

use rand::{Rng, RngCore, SeedableRng};
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::generate::zec_inputs;
use crate::graph::Party;

pub const INPUTS: usize = 21;
pub const OUTCOMES: usize = 9;
pub const COLORS: usize = 3;
/// Bound on the joint win probability of any strategy pair.
pub const WIN_BOUND: f64 = 11024.0 / 11025.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZecError {
    #[error("strategy has {0} rows, expected 21")]
    Rows(usize),
    #[error("input {input}: probabilities sum to {sum}")]
    NotNormalized { input: usize, sum: f64 },
    #[error("input {input}: negative or non-finite probability")]
    BadProbability { input: usize },
    #[error("no failure witness found; labels {0:?}")]
    NoWitness(Box<LabelTable>),
}

/// Per input, a distribution over the nine color pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; OUTCOMES]>", into = "Vec<[f64; OUTCOMES]>")]
pub struct ZecStrategy {
    table: Vec<[f64; OUTCOMES]>,
}

impl TryFrom<Vec<[f64; OUTCOMES]>> for ZecStrategy {
    type Error = ZecError;

    fn try_from(table: Vec<[f64; OUTCOMES]>) -> Result<Self, ZecError> {
        ZecStrategy::new(table)
    }
}

impl From<ZecStrategy> for Vec<[f64; OUTCOMES]> {
    fn from(s: ZecStrategy) -> Self {
        s.table
    }
}

pub fn outcome(lo: usize, hi: usize) -> usize {
    lo * COLORS + hi
}

impl ZecStrategy {
    pub fn new(table: Vec<[f64; OUTCOMES]>) -> Result<Self, ZecError> {
        if table.len() != INPUTS {
            return Err(ZecError::Rows(table.len()));
        }
        for (input, row) in table.iter().enumerate() {
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(ZecError::BadProbability { input });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(ZecError::NotNormalized { input, sum });
            }
        }
        Ok(ZecStrategy { table })
    }

    /// Deterministic play given by `f(input) = (lo, hi)`.
    pub fn deterministic(f: impl Fn(usize) -> (usize, usize)) -> Self {
        let table = (0..INPUTS)
            .map(|i| {
                let mut row = [0.0; OUTCOMES];
                let (lo, hi) = f(i);
                row[outcome(lo, hi)] = 1.0;
                row
            })
            .collect();
        ZecStrategy { table }
    }

    /// Both edges independently uniform.
    pub fn uniform() -> Self {
        ZecStrategy {
            table: vec![[1.0 / OUTCOMES as f64; OUTCOMES]; INPUTS],
        }
    }

    /// Each row drawn from a symmetric Dirichlet(1).
    pub fn random_dirichlet<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let table = (0..INPUTS)
            .map(|_| {
                let mut row = [0.0; OUTCOMES];
                for p in row.iter_mut() {
                    let x: f64 = Exp1.sample(rng);
                    *p = x;
                }
                let sum: f64 = row.iter().sum();
                for p in row.iter_mut() {
                    *p /= sum;
                }
                // Push rounding drift into the largest entry.
                let drift = 1.0 - row.iter().sum::<f64>();
                let k = (0..OUTCOMES).max_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap();
                row[k] += drift;
                row
            })
            .collect();
        ZecStrategy { table }
    }

    pub fn row(&self, input: usize) -> &[f64; OUTCOMES] {
        &self.table[input]
    }

    /// Apply a color relabeling to every outcome.
    pub fn relabel(&self, perm: [usize; COLORS]) -> Self {
        let table = self
            .table
            .iter()
            .map(|row| {
                let mut out = [0.0; OUTCOMES];
                for lo in 0..COLORS {
                    for hi in 0..COLORS {
                        out[outcome(perm[lo], perm[hi])] = row[outcome(lo, hi)];
                    }
                }
                out
            })
            .collect();
        ZecStrategy { table }
    }

    /// Probability that the edge to shared vertex `v` gets `color` on `input`.
    /// Zero if the input does not contain `v`.
    pub fn marginal(&self, input: usize, v: usize, color: usize) -> f64 {
        let (i, j) = zec_inputs()[input];
        let row = &self.table[input];
        if v == i as usize {
            (0..COLORS).map(|hi| row[outcome(color, hi)]).sum()
        } else if v == j as usize {
            (0..COLORS).map(|lo| row[outcome(lo, color)]).sum()
        } else {
            0.0
        }
    }

    /// Draw an outcome for `input` from one uniform draw.
    pub fn sample(&self, input: usize, rng: &mut dyn RngCore) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (k, &p) in self.table[input].iter().enumerate() {
            acc += p;
            if u < acc {
                return k;
            }
        }
        (0..OUTCOMES)
            .rev()
            .find(|&k| self.table[input][k] > 0.0)
            .unwrap_or(OUTCOMES - 1)
    }
}

/// The strategy file: one table per player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyPair {
    pub alice: ZecStrategy,
    pub bob: ZecStrategy,
}

/// Whether a joint play properly colors the gadget.
pub fn outcome_wins(a_input: usize, a_out: usize, b_input: usize, b_out: usize) -> bool {
    let inputs = zec_inputs();
    let (ai, aj) = inputs[a_input];
    let (bi, bj) = inputs[b_input];
    let a = [(ai, a_out / COLORS), (aj, a_out % COLORS)];
    let b = [(bi, b_out / COLORS), (bj, b_out % COLORS)];
    if a[0].1 == a[1].1 || b[0].1 == b[1].1 {
        return false;
    }
    a.iter().all(|&(v, c)| b.iter().all(|&(w, d)| v != w || c != d))
}

/// Win probability conditioned on a fixed input pair.
pub fn conditional_win(a: &ZecStrategy, b: &ZecStrategy, a_input: usize, b_input: usize) -> f64 {
    let mut p = 0.0;
    for (oa, &pa) in a.row(a_input).iter().enumerate() {
        if pa == 0.0 {
            continue;
        }
        for (ob, &pb) in b.row(b_input).iter().enumerate() {
            if outcome_wins(a_input, oa, b_input, ob) {
                p += pa * pb;
            }
        }
    }
    p
}

/// Exact win probability over uniform inputs and both strategies.
pub fn zec_win_probability(a: &ZecStrategy, b: &ZecStrategy) -> f64 {
    let mut total = 0.0;
    for ia in 0..INPUTS {
        for ib in 0..INPUTS {
            total += conditional_win(a, b, ia, ib);
        }
    }
    total / (INPUTS * INPUTS) as f64
}

/// Label sets per shared vertex, as sorted color lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelTable {
    pub alice: [Vec<u8>; 7],
    pub bob: [Vec<u8>; 7],
}

impl LabelTable {
    pub fn side(&self, p: Party) -> &[Vec<u8>; 7] {
        match p {
            Party::Alice => &self.alice,
            Party::Bob => &self.bob,
        }
    }
}

const LABEL_THRESHOLD: f64 = 0.2;

fn labels(s: &ZecStrategy) -> [Vec<u8>; 7] {
    std::array::from_fn(|v| {
        (0..COLORS as u8)
            .filter(|&c| (0..INPUTS).any(|input| s.marginal(input, v, c as usize) >= LABEL_THRESHOLD))
            .collect()
    })
}

pub fn build_label_table(a: &ZecStrategy, b: &ZecStrategy) -> LabelTable {
    LabelTable {
        alice: labels(a),
        bob: labels(b),
    }
}

/// A concrete input (pair) under which the strategies fail with at least
/// `bound` probability overall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FailureWitness {
    pub case: u8,
    /// The player whose two edges clash (case 1 only).
    pub side: Option<Party>,
    pub alice_input: Option<usize>,
    pub bob_input: Option<usize>,
    /// Shared vertices involved.
    pub vertices: Vec<usize>,
    pub color: u8,
    /// Probability of the clash given the witness inputs.
    pub conditional_failure: f64,
    /// Probability of the witness inputs together with the clash.
    pub failure_probability: f64,
    /// The bound the case guarantees: 1/105 or 1/11025.
    pub bound: f64,
}

fn input_of(i: usize, j: usize) -> usize {
    let (lo, hi) = (i.min(j) as u8, i.max(j) as u8);
    zec_inputs().iter().position(|&p| p == (lo, hi)).expect("valid pair")
}

/// Follow the case analysis on the label table to a failing input.
pub fn find_failure_witness(a: &ZecStrategy, b: &ZecStrategy) -> Result<FailureWitness, ZecError> {
    let table = build_label_table(a, b);
    for side in [Party::Alice, Party::Bob] {
        let labels = table.side(side);
        let singles: Vec<usize> = (0..7).filter(|&v| labels[v].len() == 1).collect();
        if singles.len() < 4 {
            continue;
        }
        for (x, &v1) in singles.iter().enumerate() {
            for &v2 in &singles[x + 1..] {
                if labels[v1] != labels[v2] {
                    continue;
                }
                let c = labels[v1][0] as usize;
                let input = input_of(v1, v2);
                let s = if side == Party::Alice { a } else { b };
                let conditional = s.row(input)[outcome(c, c)];
                return Ok(FailureWitness {
                    case: 1,
                    side: Some(side),
                    alice_input: (side == Party::Alice).then_some(input),
                    bob_input: (side == Party::Bob).then_some(input),
                    vertices: vec![v1.min(v2), v1.max(v2)],
                    color: c as u8,
                    conditional_failure: conditional,
                    failure_probability: conditional / INPUTS as f64,
                    bound: 1.0 / 105.0,
                });
            }
        }
    }
    for v in 0..7 {
        let (la, lb) = (&table.alice[v], &table.bob[v]);
        if la.len() < 2 || lb.len() < 2 {
            continue;
        }
        let Some(&c) = la.iter().find(|c| lb.contains(c)) else {
            continue;
        };
        let best = |s: &ZecStrategy| {
            (0..INPUTS)
                .map(|i| (i, s.marginal(i, v, c as usize)))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("21 inputs")
        };
        let (ia, pa) = best(a);
        let (ib, pb) = best(b);
        let conditional = pa * pb;
        return Ok(FailureWitness {
            case: 2,
            side: None,
            alice_input: Some(ia),
            bob_input: Some(ib),
            vertices: vec![v],
            color: c,
            conditional_failure: conditional,
            failure_probability: conditional / (INPUTS * INPUTS) as f64,
            bound: 1.0 / 11025.0,
        });
    }
    Err(ZecError::NoWitness(Box::new(table)))
}

/// Monte-Carlo estimate of winning `copies` independent games at once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProductEstimate {
    pub estimate: f64,
    /// 95% Wilson score interval.
    pub ci_low: f64,
    pub ci_high: f64,
    /// `p^copies` for the exact single-game value `p`.
    pub exact_power: f64,
    pub trials: u64,
}

pub fn product_game_estimate<R: Rng + ?Sized>(
    a: &ZecStrategy,
    b: &ZecStrategy,
    copies: usize,
    trials: u64,
    rng: &mut R,
) -> ProductEstimate {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(rng.next_u64());
    let mut wins = 0u64;
    for _ in 0..trials {
        let all = (0..copies).all(|_| {
            let ia = rng.random_range(0..INPUTS);
            let ib = rng.random_range(0..INPUTS);
            let oa = a.sample(ia, &mut rng);
            let ob = b.sample(ib, &mut rng);
            outcome_wins(ia, oa, ib, ob)
        });
        wins += all as u64;
    }
    let (lo, hi) = wilson(wins, trials);
    ProductEstimate {
        estimate: if trials == 0 { 0.0 } else { wins as f64 / trials as f64 },
        ci_low: lo,
        ci_high: hi,
        exact_power: zec_win_probability(a, b).powi(copies as i32),
        trials,
    }
}

fn wilson(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}
