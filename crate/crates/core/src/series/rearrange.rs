//! Rearrangements of conditionally convergent series.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::SeriesHandle;
use crate::accumulator::SumAccumulator;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Bits kept when partial sums are reported.
const REPORT_BITS: u32 = 64;

/// A change of direction in the greedy construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flip {
    /// Position in the rearranged order (1-based).
    pub step: usize,
    /// Original index of the term consumed at the flip.
    pub index: u64,
    /// `|t − target| ≤ |a_index|`, checked exactly.
    pub within_last_term: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rearrangement {
    /// Original indices in rearranged order.
    pub indices: Vec<u64>,
    /// Outward-rounded partial sums of the rearranged series.
    pub partial_sums: Vec<Enclosure>,
    pub flips: Vec<Flip>,
}

/// Lazily classifies terms into positive (including zero) and negative queues.
struct Pools<'a> {
    s: &'a SeriesHandle,
    next: u64,
    limit: u64,
    pos: VecDeque<(u64, Rational)>,
    neg: VecDeque<(u64, Rational)>,
    consumed: usize,
}

impl<'a> Pools<'a> {
    fn new(s: &'a SeriesHandle, steps: usize) -> Self {
        let limit = s.start() + 16 * steps as u64 + 16;
        Pools { s, next: s.start(), limit, pos: VecDeque::new(), neg: VecDeque::new(), consumed: 0 }
    }

    fn take(&mut self, positive: bool) -> Result<(u64, Rational)> {
        loop {
            let queue = if positive { &mut self.pos } else { &mut self.neg };
            if let Some(t) = queue.pop_front() {
                self.consumed += 1;
                return Ok(t);
            }
            if self.next > self.limit {
                let class = if positive { "positive" } else { "negative" };
                return Err(Error::SignClassExhausted { class, consumed: self.consumed });
            }
            let n = self.next;
            self.next += 1;
            let a = self.s.terms().exact_term(n)?;
            if a.is_negative() {
                self.neg.push_back((n, a));
            } else {
                self.pos.push_back((n, a));
            }
        }
    }
}

/// Greedy construction: take positive terms while the running sum is at most
/// `target`, negative ones while it is at least `target`.
pub fn rearrange_riemann(s: &SeriesHandle, target: &Rational, steps: usize) -> Result<Rearrangement> {
    let mut pools = Pools::new(s, steps);
    let mut acc = SumAccumulator::new();
    let mut up = *target >= Rational::zero();
    let mut out = Rearrangement { indices: Vec::with_capacity(steps), partial_sums: Vec::with_capacity(steps), flips: Vec::new() };
    for step in 1..=steps {
        let (n, a) = pools.take(up)?;
        acc.add(&a);
        out.indices.push(n);
        out.partial_sums.push(acc.to_enclosure(REPORT_BITS));
        let crossed = match acc.cmp_rational(target) {
            Ordering::Greater => up,
            Ordering::Less => !up,
            Ordering::Equal => false,
        };
        if crossed {
            up = !up;
            // on the far side now, so the distance is at most |a|
            let mag = a.abs();
            let within = acc.cmp_rational(&(target + &mag)) != Ordering::Greater && acc.cmp_rational(&(target - &mag)) != Ordering::Less;
            out.flips.push(Flip { step, index: n, within_last_term: within });
        }
    }
    Ok(out)
}

/// Fixed pattern of `p` positive then `q` negative terms, repeated for
/// `blocks` blocks. Returns the partial sum after each block.
pub fn rearrange_pattern(s: &SeriesHandle, p: usize, q: usize, blocks: usize) -> Result<Vec<Enclosure>> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidParameter("pattern needs p ≥ 1 and q ≥ 1".into()));
    }
    let mut pools = Pools::new(s, blocks * (p + q));
    let mut acc = SumAccumulator::new();
    let mut out = Vec::with_capacity(blocks);
    for _ in 0..blocks {
        for _ in 0..p {
            acc.add(&pools.take(true)?.1);
        }
        for _ in 0..q {
            acc.add(&pools.take(false)?.1);
        }
        out.push(acc.to_enclosure(REPORT_BITS));
    }
    Ok(out)
}
