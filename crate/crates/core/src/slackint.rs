//! Finding a common free element (k-Slack-Int) and uniform available-color
//! sampling built on it.

use rand::RngCore;

use crate::error::{ProtocolError, Result};
use crate::graph::Party;
use crate::runtime::{
    bernoulli, bit_width, draw_permutation, parallel, run_protocol, BitString, Channel, PublicCoins, RuntimeConfig,
    Transcript,
};

/// Alice holds `x`, Bob holds `y`, both subsets of `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlackIntInstance {
    pub m: usize,
    pub x: Vec<u32>,
    pub y: Vec<u32>,
}

impl SlackIntInstance {
    pub fn new(m: usize, x: Vec<u32>, y: Vec<u32>) -> Self {
        SlackIntInstance { m, x, y }
    }

    /// `m − |X| − |Y|`, with duplicates and out-of-range ids ignored.
    pub fn slack(&self) -> i64 {
        let a = self.membership(Party::Alice).iter().filter(|&&b| b).count();
        let b = self.membership(Party::Bob).iter().filter(|&&b| b).count();
        self.m as i64 - a as i64 - b as i64
    }

    pub fn complement(&self) -> Vec<u32> {
        let a = self.membership(Party::Alice);
        let b = self.membership(Party::Bob);
        (0..self.m as u32)
            .filter(|&e| !a[e as usize] && !b[e as usize])
            .collect()
    }

    pub fn membership(&self, party: Party) -> Vec<bool> {
        let mut out = vec![false; self.m];
        let set = if party == Party::Alice { &self.x } else { &self.y };
        for &e in set {
            if let Some(slot) = out.get_mut(e as usize) {
                *slot = true;
            }
        }
        out
    }

    fn check(&self) -> Result<()> {
        let all = self.x.iter().chain(&self.y);
        if let Some(e) = all.clone().find(|&&e| e as usize >= self.m) {
            return Err(ProtocolError::precondition(format!(
                "element {e} outside 0..{}",
                self.m
            )));
        }
        if self.slack() < 1 {
            return Err(ProtocolError::precondition("slack must be at least 1"));
        }
        Ok(())
    }
}

/// `min(1, 150·m / k̃²)`.
pub fn sampling_probability(m: usize, guess: usize) -> f64 {
    (150.0 * m as f64 / (guess as f64 * guess as f64)).min(1.0)
}

/// `⌈m/2^t⌉` for `t = 0, 1, …`, ending at 1.
pub fn guess_sequence(m: usize) -> Vec<usize> {
    let mut out = vec![m.max(1)];
    let mut t = 1u32;
    while *out.last().unwrap() > 1 {
        out.push(m.div_ceil(1usize << t));
        t += 1;
    }
    out
}

/// Binary-search state over an ordered domain.
struct Search<'a> {
    own: &'a [bool],
    s: Vec<u32>,
}

impl Search<'_> {
    fn left_len(&self) -> usize {
        self.s.len().div_ceil(2)
    }

    fn own_left(&self) -> u64 {
        self.s[..self.left_len()]
            .iter()
            .filter(|&&e| self.own[e as usize])
            .count() as u64
    }

    /// `true` means the right half.
    fn decide(&self, other_left: u64) -> bool {
        other_left + self.own_left() >= self.left_len() as u64
    }

    fn apply(&mut self, right: bool) {
        let l = self.left_len();
        if right {
            self.s.drain(..l);
        } else {
            self.s.truncate(l);
        }
    }

    fn count_msg(&self, msg: &mut BitString) {
        msg.push_uint(self.own_left(), bit_width(self.left_len() as u64));
    }

    fn finish(&self) -> Result<u32> {
        match self.s[..] {
            [e] if !self.own[e as usize] => Ok(e),
            [e] => Err(ProtocolError::precondition(format!(
                "search ended on occupied element {e}"
            ))),
            _ => Err(ProtocolError::precondition("empty search domain")),
        }
    }
}

/// Alternating binary search. The speaker sends the direction it decided on
/// the previous step (if any) and its count for the next left half; the
/// listener then decides the next direction and becomes the speaker.
async fn search(
    chan: &Channel,
    mut st: Search<'_>,
    mut speaker: Party,
    mut decided: Option<bool>,
    mut carries_dir: bool,
) -> Result<u32> {
    let me = chan.role();
    loop {
        if speaker == me {
            let mut msg = BitString::new();
            if let Some(d) = decided.take() {
                msg.push_bit(d);
                st.apply(d);
            }
            let done = st.s.len() < 2;
            if !done {
                st.count_msg(&mut msg);
            }
            chan.exchange(msg).await;
            if done {
                return st.finish();
            }
        } else {
            let msg = chan.recv().await;
            let mut r = msg.reader();
            if carries_dir {
                st.apply(r.read_bit()?);
            }
            if st.s.len() < 2 {
                r.finish()?;
                return st.finish();
            }
            let other = r.read_uint(bit_width(st.left_len() as u64))?;
            r.finish()?;
            decided = Some(st.decide(other));
        }
        carries_dir = true;
        speaker = speaker.other();
    }
}

/// Deterministic search over `domain` (an ordered list of elements of
/// `0..own.len()`). `own` is this party's membership vector.
pub async fn det_slack_int_party(chan: &Channel, own: &[bool], domain: Vec<u32>) -> Result<u32> {
    let st = Search { own, s: domain };
    if st.s.len() < 2 {
        return st.finish();
    }
    search(chan, st, Party::Alice, None, false).await
}

/// Randomized guessing followed by the deterministic search. `order[j]` is the
/// element placed at position `j`; pass the identity for the plain protocol.
pub async fn rand_slack_int_party(chan: &Channel, own: &[bool], order: &[u32]) -> Result<u32> {
    let m = own.len();
    let mut rng = chan.coins(0);
    for guess in guess_sequence(m) {
        let p = sampling_probability(m, guess);
        let s: Vec<u32> = order.iter().copied().filter(|_| bernoulli(rng.next_u64(), p)).collect();
        if s.is_empty() {
            continue;
        }
        let size = s.len() as u64;
        let own_in_s = s.iter().filter(|&&e| own[e as usize]).count() as u64;
        let st = Search { own, s };
        if chan.is_alice() {
            let mut msg = BitString::new();
            msg.push_uint(own_in_s, bit_width(size));
            chan.exchange(msg).await;
            let reply = chan.recv().await;
            let mut r = reply.reader();
            if !r.read_bit()? {
                r.finish()?;
                continue;
            }
            if st.s.len() < 2 {
                r.finish()?;
                return st.finish();
            }
            let bob_left = r.read_uint(bit_width(st.left_len() as u64))?;
            r.finish()?;
            let d = st.decide(bob_left);
            return search(chan, st, Party::Alice, Some(d), true).await;
        } else {
            let msg = chan.recv().await;
            let mut r = msg.reader();
            let alice_in_s = r.read_uint(bit_width(size))?;
            r.finish()?;
            let ok = alice_in_s + own_in_s < size;
            let mut reply = BitString::new();
            reply.push_bit(ok);
            if ok && st.s.len() >= 2 {
                st.count_msg(&mut reply);
            }
            chan.exchange(reply).await;
            if !ok {
                continue;
            }
            if st.s.len() < 2 {
                return st.finish();
            }
            return search(chan, st, Party::Alice, None, true).await;
        }
    }
    Err(ProtocolError::precondition("no common free element"))
}

/// Uniformly random common free element, known to both parties.
pub async fn color_sample_party(chan: &Channel, own: &[bool]) -> Result<u32> {
    let order = draw_permutation(&mut chan.coins(1), own.len());
    rand_slack_int_party(chan, own, &order).await
}

fn agree(a: u32, b: u32) -> Result<u32> {
    if a == b {
        Ok(a)
    } else {
        Err(ProtocolError::invariant(format!("parties disagree: {a} vs {b}")))
    }
}

pub fn det_slack_int(inst: &SlackIntInstance, domain: &[u32]) -> Result<(u32, Transcript)> {
    let (xa, yb) = (inst.membership(Party::Alice), inst.membership(Party::Bob));
    let party = |own: Vec<bool>| move |c: Channel| async move { det_slack_int_party(&c, &own, domain.to_vec()).await };
    let (a, b, t) = run_protocol(PublicCoins::new(0), &RuntimeConfig::default(), party(xa), party(yb))?;
    Ok((agree(a, b)?, t))
}

pub fn rand_slack_int(inst: &SlackIntInstance, seed: u64) -> Result<(u32, Transcript)> {
    inst.check()?;
    let order: Vec<u32> = (0..inst.m as u32).collect();
    let (xa, yb) = (inst.membership(Party::Alice), inst.membership(Party::Bob));
    let order = &order;
    let party = |own: Vec<bool>| move |c: Channel| async move { rand_slack_int_party(&c, &own, order).await };
    let (a, b, t) = run_protocol(PublicCoins::new(seed), &RuntimeConfig::default(), party(xa), party(yb))?;
    Ok((agree(a, b)?, t))
}

pub fn color_sample_uniform(inst: &SlackIntInstance, seed: u64) -> Result<(u32, Transcript)> {
    inst.check()?;
    let (xa, yb) = (inst.membership(Party::Alice), inst.membership(Party::Bob));
    let party = |own: Vec<bool>| move |c: Channel| async move { color_sample_party(&c, &own).await };
    let (a, b, t) = run_protocol(PublicCoins::new(seed), &RuntimeConfig::default(), party(xa), party(yb))?;
    Ok((agree(a, b)?, t))
}

/// All instances side by side; instance `i` runs on sub-channel `i`.
pub fn batch_color_sample(insts: &[SlackIntInstance], seed: u64) -> Result<(Vec<u32>, Transcript)> {
    for (i, inst) in insts.iter().enumerate() {
        inst.check()
            .map_err(|e| ProtocolError::precondition(format!("instance {i}: {e}")))?;
    }
    let party = |role: Party| {
        move |c: Channel| async move {
            parallel(&c, 0..insts.len() as u32, |i, sc| {
                let own = insts[i as usize].membership(role);
                async move { color_sample_party(&sc, &own).await }
            })
            .await
        }
    };
    let (a, b, t) = run_protocol(
        PublicCoins::new(seed),
        &RuntimeConfig::default(),
        party(Party::Alice),
        party(Party::Bob),
    )?;
    let out = a.into_iter().zip(b).map(|(x, y)| agree(x, y)).collect::<Result<_>>()?;
    Ok((out, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(m: usize, x: &[u32], y: &[u32]) -> SlackIntInstance {
        SlackIntInstance::new(m, x.to_vec(), y.to_vec())
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_slack_int(&inst(4, &[], &[]), &[0, 1, 2, 3]).unwrap().0, 0);
        assert_eq!(det_slack_int(&inst(4, &[0, 1], &[2]), &[0, 1, 2, 3]).unwrap().0, 3);
        let all: Vec<u32> = (0..6).collect();
        assert_eq!(det_slack_int(&inst(6, &[0, 2, 4], &[1, 3]), &all).unwrap().0, 5);
    }

    #[test]
    fn det_rounds_and_violation() {
        let all: Vec<u32> = (0..16).collect();
        let (_, t) = det_slack_int(&inst(16, &[0, 5], &[9]), &all).unwrap();
        assert!(t.total_rounds <= 5);
        let err = det_slack_int(&inst(2, &[0], &[1]), &[0, 1]).unwrap_err();
        assert!(matches!(err, ProtocolError::Precondition(_)));
    }

    #[test]
    fn probabilities_and_guesses() {
        assert!((sampling_probability(1024, 1024) - 150.0 / 1024.0).abs() < 1e-12);
        assert_eq!(sampling_probability(16, 4), 1.0);
        assert_eq!(guess_sequence(8), vec![8, 4, 2, 1]);
        assert_eq!(guess_sequence(5), vec![5, 3, 2, 1]);
        assert_eq!(guess_sequence(1), vec![1]);
    }

    #[test]
    fn rand_examples() {
        let (e, _) = rand_slack_int(&inst(8, &[], &[]), 3).unwrap();
        assert!(e < 8);
        for seed in 0..50 {
            assert_eq!(rand_slack_int(&inst(4, &[0, 1], &[2]), seed).unwrap().0, 3);
        }
    }

    #[test]
    fn forced_and_rejected() {
        for seed in 0..20 {
            assert_eq!(color_sample_uniform(&inst(2, &[0], &[]), seed).unwrap().0, 1);
        }
        assert!(color_sample_uniform(&inst(2, &[0], &[1]), 0).is_err());
        assert!(color_sample_uniform(&inst(2, &[4], &[]), 0).is_err());
    }

    #[test]
    fn batch_composition() {
        let (out, t) = batch_color_sample(&[], 1).unwrap();
        assert!(out.is_empty());
        assert_eq!(t.total_bits, 0);
        let insts = [inst(4, &[0], &[1]), inst(4, &[2], &[])];
        let (out, t) = batch_color_sample(&insts, 2).unwrap();
        let solo: Vec<Transcript> = insts
            .iter()
            .enumerate()
            .map(|(i, x)| {
                // Same coins as sub-channel `i` of the batch.
                let party =
                    |own: Vec<bool>| move |c: Channel| async move { color_sample_party(&c.sub(i as u32), &own).await };
                run_protocol(
                    PublicCoins::new(2),
                    &RuntimeConfig::default(),
                    party(x.membership(Party::Alice)),
                    party(x.membership(Party::Bob)),
                )
                .unwrap()
                .2
            })
            .collect();
        assert_eq!(t.total_rounds, solo.iter().map(|s| s.total_rounds).max().unwrap());
        assert_eq!(t.total_bits, solo.iter().map(|s| s.total_bits).sum::<u64>());
        assert!(!insts[0].membership(Party::Alice)[out[0] as usize]);
        let err = batch_color_sample(&[inst(2, &[], &[]), inst(1, &[0], &[])], 0).unwrap_err();
        assert!(err.to_string().contains("instance 1"));
    }
}
