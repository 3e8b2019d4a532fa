//! Lockstep two-party runtime.
//!
//! Each party is an `async` computation that talks through a [`Channel`].
//! Every [`Channel::exchange`] is one simultaneous message swap with the other
//! party on the same tag. The executor advances both parties until they
//! block, swaps all pending messages as one round, and records the payload
//! sizes. Sub-channels give independent tags, so many sub-protocols can run
//! side by side and share rounds.

mod bits;
mod coins;
mod transcript;

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::future::Future;
use std::pin::{pin, Pin};
use std::rc::Rc;
use std::task::{Context, Poll, Waker};

use rand_chacha::ChaCha8Rng;

pub use bits::{bit_width, BitReader, BitString};
pub use coins::{bernoulli, draw_permutation, PublicCoins};
pub use transcript::{RoundRecord, Transcript};

use crate::error::{ProtocolError, Result};
use crate::graph::Party;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuntimeConfig {
    /// Maximum number of supersteps before the run is aborted.
    pub round_cap: u64,
}

impl Default for RuntimeConfig {
    fn default() -> Self {
        RuntimeConfig { round_cap: 1_000_000 }
    }
}

struct Outgoing {
    tag: Rc<[u32]>,
    msg: BitString,
    phase: &'static str,
}

struct PartyState {
    role: Party,
    coins: PublicCoins,
    phase: Cell<&'static str>,
    outbox: RefCell<Vec<Outgoing>>,
    inbox: RefCell<HashMap<Rc<[u32]>, BitString>>,
}

/// One party's handle on a tagged conversation.
#[derive(Clone)]
pub struct Channel {
    state: Rc<PartyState>,
    path: Rc<[u32]>,
}

impl Channel {
    pub fn role(&self) -> Party {
        self.state.role
    }

    pub fn is_alice(&self) -> bool {
        self.state.role == Party::Alice
    }

    /// Child channel with tag `path ++ [id]`.
    pub fn sub(&self, id: u32) -> Channel {
        let mut p = self.path.to_vec();
        p.push(id);
        Channel {
            state: self.state.clone(),
            path: p.into(),
        }
    }

    /// Label subsequent rounds opened by this party.
    pub fn set_phase(&self, phase: &'static str) {
        self.state.phase.set(phase);
    }

    /// Public randomness tied to this channel's tag and `label`.
    pub fn coins(&self, label: u64) -> ChaCha8Rng {
        self.state.coins.stream(&self.path, label)
    }

    /// Send `msg` and receive the other party's message on the same tag.
    pub fn exchange(&self, msg: BitString) -> Exchange {
        Exchange {
            chan: self.clone(),
            msg: Some(msg),
        }
    }

    /// Receive only.
    pub fn recv(&self) -> Exchange {
        self.exchange(BitString::new())
    }
}

/// Future returned by [`Channel::exchange`].
pub struct Exchange {
    chan: Channel,
    msg: Option<BitString>,
}

impl Future for Exchange {
    type Output = BitString;

    fn poll(self: Pin<&mut Self>, _cx: &mut Context<'_>) -> Poll<BitString> {
        let this = self.get_mut();
        let st = &this.chan.state;
        if let Some(msg) = this.msg.take() {
            st.outbox.borrow_mut().push(Outgoing {
                tag: this.chan.path.clone(),
                msg,
                phase: st.phase.get(),
            });
            return Poll::Pending;
        }
        match st.inbox.borrow_mut().remove(&this.chan.path) {
            Some(m) => Poll::Ready(m),
            None => Poll::Pending,
        }
    }
}

fn tag_name(tag: &[u32]) -> String {
    let parts: Vec<String> = tag.iter().map(u32::to_string).collect();
    format!("/{}", parts.join("/"))
}

fn take_outbox(st: &PartyState) -> Result<Vec<Outgoing>> {
    let mut out = std::mem::take(&mut *st.outbox.borrow_mut());
    out.sort_by(|x, y| x.tag.cmp(&y.tag));
    if let Some(w) = out.windows(2).find(|w| w[0].tag == w[1].tag) {
        return Err(ProtocolError::TagCollision(tag_name(&w[0].tag)));
    }
    Ok(out)
}

fn new_party(role: Party, coins: PublicCoins) -> Channel {
    Channel {
        state: Rc::new(PartyState {
            role,
            coins,
            phase: Cell::new("main"),
            outbox: RefCell::new(Vec::new()),
            inbox: RefCell::new(HashMap::new()),
        }),
        path: Rc::from(Vec::new()),
    }
}

/// Run a two-party protocol to completion.
pub fn run_protocol<A, B, FA, FB, OA, OB>(
    coins: PublicCoins,
    cfg: &RuntimeConfig,
    alice: A,
    bob: B,
) -> Result<(OA, OB, Transcript)>
where
    A: FnOnce(Channel) -> FA,
    B: FnOnce(Channel) -> FB,
    FA: Future<Output = Result<OA>>,
    FB: Future<Output = Result<OB>>,
{
    let ca = new_party(Party::Alice, coins);
    let cb = new_party(Party::Bob, coins);
    let (sa, sb) = (ca.state.clone(), cb.state.clone());
    let mut fa = pin!(alice(ca));
    let mut fb = pin!(bob(cb));
    let mut cx = Context::from_waker(Waker::noop());
    let mut out_a = None;
    let mut out_b = None;
    let mut transcript = Transcript::default();
    let mut steps = 0u64;
    loop {
        if out_a.is_none() {
            if let Poll::Ready(r) = fa.as_mut().poll(&mut cx) {
                out_a = Some(r?);
            }
        }
        if out_b.is_none() {
            if let Poll::Ready(r) = fb.as_mut().poll(&mut cx) {
                out_b = Some(r?);
            }
        }
        let msgs_a = take_outbox(&sa)?;
        let msgs_b = take_outbox(&sb)?;
        if msgs_a.is_empty() && msgs_b.is_empty() {
            if let (Some(a), Some(b)) = (out_a.take(), out_b.take()) {
                return Ok((a, b, transcript));
            }
            return Err(ProtocolError::Deadlock);
        }
        steps += 1;
        if steps > cfg.round_cap {
            return Err(ProtocolError::RoundCap(cfg.round_cap));
        }
        if msgs_a.len() != msgs_b.len() {
            let (long, short) = if msgs_a.len() > msgs_b.len() {
                (&msgs_a, &msgs_b)
            } else {
                (&msgs_b, &msgs_a)
            };
            let missing = long
                .iter()
                .find(|m| !short.iter().any(|s| s.tag == m.tag))
                .expect("longer outbox has an unmatched tag");
            return Err(ProtocolError::Undelivered(tag_name(&missing.tag)));
        }
        let mut bits_a = 0u64;
        let mut bits_b = 0u64;
        let mut phase = None;
        for (ma, mb) in msgs_a.iter().zip(&msgs_b) {
            if ma.tag != mb.tag {
                return Err(ProtocolError::Undelivered(tag_name(&ma.tag)));
            }
            bits_a += ma.msg.len() as u64;
            bits_b += mb.msg.len() as u64;
        }
        for m in msgs_a.iter().chain(&msgs_b) {
            if !m.msg.is_empty() {
                phase = Some(m.phase);
                break;
            }
        }
        if let Some(phase) = phase {
            transcript.push(bits_a, bits_b, phase);
        }
        let mut ia = sa.inbox.borrow_mut();
        let mut ib = sb.inbox.borrow_mut();
        for (ma, mb) in msgs_a.into_iter().zip(msgs_b) {
            ia.insert(mb.tag, mb.msg);
            ib.insert(ma.tag, ma.msg);
        }
    }
}

/// Polls every child on each poll and finishes when all have finished, or
/// as soon as one fails.
struct TryJoinAll<F: Future> {
    futs: Vec<Option<Pin<Box<F>>>>,
    out: Vec<Option<F::Output>>,
}

// Children are boxed, so moving the containers is fine.
impl<F: Future> Unpin for TryJoinAll<F> {}

impl<T, F: Future<Output = Result<T>>> Future for TryJoinAll<F> {
    type Output = Result<Vec<T>>;

    fn poll(self: Pin<&mut Self>, cx: &mut Context<'_>) -> Poll<Self::Output> {
        let this = self.get_mut();
        let mut pending = false;
        for (slot, out) in this.futs.iter_mut().zip(this.out.iter_mut()) {
            if let Some(f) = slot {
                match f.as_mut().poll(cx) {
                    Poll::Ready(Err(e)) => return Poll::Ready(Err(e)),
                    Poll::Ready(ok) => {
                        *out = Some(ok);
                        *slot = None;
                    }
                    Poll::Pending => pending = true,
                }
            }
        }
        if pending {
            return Poll::Pending;
        }
        let done = this
            .out
            .iter_mut()
            .map(|o| o.take().expect("finished child").expect("errors return early"))
            .collect();
        Poll::Ready(Ok(done))
    }
}

/// Run `f(id, chan.sub(id))` for every id side by side. Results follow the
/// order of `ids`.
pub async fn parallel<T, F, Fut>(chan: &Channel, ids: impl IntoIterator<Item = u32>, mut f: F) -> Result<Vec<T>>
where
    F: FnMut(u32, Channel) -> Fut,
    Fut: Future<Output = Result<T>>,
{
    let ids: Vec<u32> = ids.into_iter().collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        let mut tag = chan.path.to_vec();
        tag.push(w[0]);
        return Err(ProtocolError::TagCollision(tag_name(&tag)));
    }
    let futs: Vec<_> = ids.iter().map(|&id| Some(Box::pin(f(id, chan.sub(id))))).collect();
    let out = (0..futs.len()).map(|_| None).collect();
    TryJoinAll { futs, out }.await
}
