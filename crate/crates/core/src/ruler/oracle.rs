//! Exhaustive existence oracle for (v,k) modular Golomb rulers.
//!
//! Backtracking over normalised candidates: a_1 = 0 and the first gap a_2 is
//! required to be a minimum of the cyclic gap sequence (every ruler can be
//! translated so its smallest gap comes first, so the restriction is
//! exhaustive, and the lexicographically first ruler with a_1 = 0 satisfies
//! it, so the witness returned is the true lexicographic minimum).
//!
//! The search tree is partitioned by the first free mark a_2; shards are
//! independent, so they can run concurrently and merge order-independently.
//! The node budget is split evenly across shards, which keeps outcomes
//! reproducible regardless of thread count.

use super::ModularRuler;
use crate::bits::BitVec;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    /// The lexicographically first (v,k) modular Golomb ruler with a_1 = 0.
    Exists(ModularRuler),
    /// The full canonical search tree was exhausted without a hit.
    NotExists,
    /// The node budget ran out first; carries the nodes searched.
    BudgetExceeded(u64),
}

#[derive(Debug)]
enum ShardOutcome {
    Found(Vec<u64>),
    Exhausted(u64),
    OutOfBudget(u64),
    Cancelled,
}

struct Shard<'a> {
    v: u64,
    k: usize,
    first_gap: u64,
    budget: u64,
    nodes: u64,
    used: BitVec,
    marks: Vec<u64>,
    cancel_below: &'a std::sync::atomic::AtomicU64,
}

impl Shard<'_> {
    /// Try to append `x`; on success the difference table is updated and
    /// true is returned, otherwise the table is left untouched.
    fn try_place(&mut self, x: u64) -> bool {
        let placed = self.marks.len();
        for i in 0..placed {
            let d = x - self.marks[i];
            let nd = self.v - d;
            if d == nd || self.used.get(d as usize) || self.used.get(nd as usize) {
                for &a in &self.marks[..i] {
                    let d = x - a;
                    self.used.set(d as usize, false);
                    self.used.set((self.v - d) as usize, false);
                }
                return false;
            }
            self.used.set(d as usize, true);
            self.used.set(nd as usize, true);
        }
        self.marks.push(x);
        true
    }

    fn unplace(&mut self) {
        let x = self.marks.pop().expect("unplace on empty mark list");
        for &a in &self.marks {
            let d = x - a;
            self.used.set(d as usize, false);
            self.used.set((self.v - d) as usize, false);
        }
    }

    fn search(&mut self) -> ShardOutcome {
        if self.marks.len() == self.k {
            return ShardOutcome::Found(self.marks.clone());
        }
        let remaining = (self.k - self.marks.len()) as u64;
        let last = *self.marks.last().expect("shard starts with two marks");
        // every later gap and the wrap gap are >= the first gap
        let hi = match self.v.checked_sub(remaining * self.first_gap) {
            Some(hi) => hi,
            None => return ShardOutcome::Exhausted(self.nodes),
        };
        let mut x = last + self.first_gap;
        while x <= hi {
            if self.nodes >= self.budget {
                return ShardOutcome::OutOfBudget(self.nodes);
            }
            if self.nodes.is_multiple_of(4096)
                && self
                    .cancel_below
                    .load(std::sync::atomic::Ordering::Relaxed)
                    < self.first_gap
            {
                return ShardOutcome::Cancelled;
            }
            self.nodes += 1;
            if self.try_place(x) {
                match self.search() {
                    ShardOutcome::Exhausted(_) => self.unplace(),
                    done => return done,
                }
            }
            x += 1;
        }
        ShardOutcome::Exhausted(self.nodes)
    }
}

/// Exhaustive search for a (v,k) modular Golomb ruler with at most `budget`
/// search-tree nodes. `Exists` carries the lexicographically first witness;
/// `NotExists` is only reported after full exhaustion.
pub fn oracle_exists(v: u64, k: u64, budget: u64) -> OracleResult {
    oracle_impl(v, k, budget)
}

/// Same as [`oracle_exists`] but run inside a dedicated rayon pool of the
/// given size. Results do not depend on the thread count.
pub fn oracle_exists_with_threads(v: u64, k: u64, budget: u64, threads: usize) -> OracleResult {
    if threads == 0 {
        return oracle_impl(v, k, budget);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(|pool| pool.install(|| oracle_impl(v, k, budget)))
        .unwrap_or_else(|_| oracle_impl(v, k, budget))
}

fn oracle_impl(v: u64, k: u64, budget: u64) -> OracleResult {
    assert!(v >= 1 && k >= 1, "oracle preconditions: v >= 1, k >= 1");
    if k == 1 {
        return OracleResult::Exists(ModularRuler::new(vec![0], v).expect("single mark"));
    }
    if v < 2 {
        return OracleResult::NotExists;
    }
    // first gap ranges over 1..=v/k (k cyclic gaps, each >= the first)
    let gaps: Vec<u64> = (1..=v / k).collect();
    if gaps.is_empty() {
        return OracleResult::NotExists;
    }
    let shard_budget = (budget / gaps.len() as u64).max(1);
    let cancel_below = std::sync::atomic::AtomicU64::new(u64::MAX);

    let outcomes: Vec<ShardOutcome> = gaps
        .par_iter()
        .map(|&first_gap| {
            if cancel_below.load(std::sync::atomic::Ordering::Relaxed) < first_gap {
                return ShardOutcome::Cancelled;
            }
            let mut shard = Shard {
                v,
                k: k as usize,
                first_gap,
                budget: shard_budget,
                nodes: 0,
                used: BitVec::new(v as usize),
                marks: vec![0],
                cancel_below: &cancel_below,
            };
            if !shard.try_place(first_gap) {
                return ShardOutcome::Exhausted(0);
            }
            shard.nodes = 1;
            let outcome = shard.search();
            if let ShardOutcome::Found(_) = outcome {
                cancel_below.fetch_min(first_gap, std::sync::atomic::Ordering::Relaxed);
            }
            outcome
        })
        .collect();

    let mut nodes_total = 0u64;
    let mut out_of_budget = false;
    for outcome in &outcomes {
        match outcome {
            ShardOutcome::Found(marks) => {
                let ruler = ModularRuler::new(marks.clone(), v).expect("oracle marks are sorted");
                debug_assert!(ruler.is_valid());
                return OracleResult::Exists(ruler);
            }
            ShardOutcome::Exhausted(n) => nodes_total += n,
            ShardOutcome::OutOfBudget(n) => {
                nodes_total += n;
                out_of_budget = true;
            }
            // cancellation only happens after a hit in a strictly earlier
            // shard, and that Found is reached first in this ordered loop
            ShardOutcome::Cancelled => {}
        }
    }
    if out_of_budget {
        OracleResult::BudgetExceeded(nodes_total)
    } else {
        OracleResult::NotExists
    }
}
