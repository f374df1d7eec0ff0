//! Exhaustive solvers. Slow by design; every approximation is tested against these.

use std::ops::ControlFlow;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::exec::{find_map_first, Execution};
use crate::fd::AttrSet;
use crate::instance::Instance;
use crate::redblue::{RbscInstance, RbscSolution};

/// Largest universe the exhaustive searches accept.
pub const EXACT_LIMIT: usize = 24;

/// Calls `f` on every `k`-subset of `0..c` in lexicographic order whose first
/// element is `first`, until `f` breaks.
fn combinations_from<B>(
    c: usize,
    k: usize,
    first: usize,
    mut f: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if k == 0 {
        return f(&[]);
    }
    if first + k > c {
        return ControlFlow::Continue(());
    }
    let mut idx: Vec<usize> = (first..first + k).collect();
    loop {
        f(&idx)?;
        // advance positions 1..k, keeping idx[0] fixed
        let mut p = k;
        loop {
            if p <= 1 {
                return ControlFlow::Continue(());
            }
            p -= 1;
            if idx[p] < c - (k - p) {
                break;
            }
        }
        idx[p] += 1;
        for q in p + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Index-order first `Some` over all `k`-subsets of `0..c` in lexicographic order.
pub(crate) fn first_combination<R: Send>(
    exec: Execution,
    c: usize,
    k: usize,
    f: impl Fn(&[usize]) -> Option<R> + Sync + Send,
) -> Option<R> {
    let probe = |idx: &[usize]| match f(idx) {
        Some(r) => ControlFlow::Break(r),
        None => ControlFlow::Continue(()),
    };
    if k == 0 {
        return f(&[]);
    }
    find_map_first(exec, 0, c, |first| {
        combinations_from(c, k, first, probe).break_value()
    })
}

/// Dependencies packed into machine words for fast repeated closure.
#[derive(Debug, Clone)]
pub(crate) struct MaskFds {
    fds: Vec<(u64, u64)>,
    full: bool,
    rounds: usize,
    targets: u64,
}

impl MaskFds {
    pub(crate) fn new(inst: &Instance) -> Self {
        MaskFds {
            fds: inst
                .fds()
                .iter()
                .map(|fd| (fd.lhs.low_mask(), 1u64 << fd.rhs.0))
                .collect(),
            full: inst.rounds() >= inst.n(),
            rounds: inst.rounds(),
            targets: inst.targets().low_mask(),
        }
    }

    fn step(&self, x: u64) -> u64 {
        let mut next = x;
        for &(l, r) in &self.fds {
            if l & !x == 0 {
                next |= r;
            }
        }
        next
    }

    pub(crate) fn derive(&self, mut x: u64) -> u64 {
        if self.full {
            loop {
                let mut changed = false;
                for &(l, r) in &self.fds {
                    if l & !x == 0 && r & !x != 0 {
                        x |= r;
                        changed = true;
                    }
                }
                if !changed {
                    return x;
                }
            }
        }
        for _ in 0..self.rounds {
            let next = self.step(x);
            if next == x {
                break;
            }
            x = next;
        }
        x
    }

    pub(crate) fn feasible(&self, x: u64) -> bool {
        self.targets & !x == 0 || self.targets & !self.derive(x) == 0
    }
}

fn candidates(inst: &Instance) -> Vec<usize> {
    let mut useful = inst.targets().clone();
    for fd in inst.fds() {
        useful.union_with(&fd.lhs);
    }
    useful.iter().filter(|&a| a < inst.n()).collect()
}

/// A minimum-cardinality feasible set, lexicographically first among those.
pub fn exact_tcand(inst: &Instance) -> Result<AttrSet> {
    exact_tcand_with(inst, Execution::default())
}

pub fn exact_tcand_with(inst: &Instance, exec: Execution) -> Result<AttrSet> {
    let n = inst.n();
    if n > EXACT_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: EXACT_LIMIT,
        });
    }
    let fds = MaskFds::new(inst);
    let cand = candidates(inst);
    let all: u64 = cand.iter().fold(0, |m, &a| m | 1 << a);
    if !fds.feasible(all) {
        return Err(Error::Infeasible {
            rounds: inst.rounds(),
        });
    }
    for k in 0..=cand.len() {
        let hit = first_combination(exec, cand.len(), k, |idx| {
            let x = idx.iter().fold(0u64, |m, &i| m | 1 << cand[i]);
            fds.feasible(x).then_some(x)
        });
        if let Some(x) = hit {
            return Ok(BitSet::from_mask(x));
        }
    }
    unreachable!("the full candidate set is feasible")
}

struct Masks {
    reds: Vec<u64>,
    blues: Vec<u64>,
    want: u64,
}

fn rbsc_masks(rb: &RbscInstance) -> Result<Masks> {
    let (r, b) = (rb.red_count(), rb.blue_count());
    if r > 64 || b > 64 {
        return Err(Error::TooLarge {
            size: r.max(b),
            limit: 64,
        });
    }
    rb.check_coverable()?;
    if r > EXACT_LIMIT && rb.sets().len() > EXACT_LIMIT {
        return Err(Error::TooLarge {
            size: r.min(rb.sets().len()),
            limit: EXACT_LIMIT,
        });
    }
    Ok(Masks {
        reds: rb.sets().iter().map(|s| s.reds.low_mask()).collect(),
        blues: rb.sets().iter().map(|s| s.blues.low_mask()).collect(),
        want: BitSet::full(b).low_mask(),
    })
}

/// Optimal red cost alone, skipping the witness search of [`exact_rbsc`].
pub fn exact_rbsc_cost(rb: &RbscInstance) -> Result<usize> {
    let m = rbsc_masks(rb)?;
    let mut best = usize::MAX;
    min_cost_branch(&m.reds, &m.blues, m.want, 0, &mut best);
    Ok(best)
}

/// Minimum red cost over blue-covering subcollections; ties go to fewer
/// sets, then to the lexicographically first index list.
pub fn exact_rbsc(rb: &RbscInstance) -> Result<RbscSolution> {
    let Masks { reds, blues, want } = rbsc_masks(rb)?;
    let mut best = usize::MAX;
    min_cost_branch(&reds, &blues, want, 0, &mut best);
    if want == 0 {
        return Ok(RbscSolution {
            sets: Vec::new(),
            cost: 0,
        });
    }

    // Cheapest witness: fewest sets, then lexicographic. The count comes
    // from iterative deepening; the lexicographic choice from fixing sets
    // one at a time while a completion still exists.
    let usable: Vec<usize> = (0..reds.len())
        .filter(|&i| blues[i] != 0 && reds[i].count_ones() as usize <= best)
        .collect();
    let search = CoverSearch::new(&usable, &reds, &blues, want, best);
    let count = (1..=usable.len())
        .find(|&c| search.exists(0, want, 0, c))
        .expect("a cover of optimal cost exists");
    let (mut sets, mut red, mut need, mut from) = (Vec::with_capacity(count), 0u64, want, 0);
    while need != 0 {
        let left = count - sets.len() - 1;
        let pos = (from..usable.len())
            .find(|&pos| {
                let i = usable[pos];
                let nr = red | reds[i];
                blues[i] & need != 0
                    && nr.count_ones() as usize <= best
                    && search.exists(pos + 1, need & !blues[i], nr, left)
            })
            .expect("a completion exists");
        let i = usable[pos];
        sets.push(i);
        red |= reds[i];
        need &= !blues[i];
        from = pos + 1;
    }
    Ok(RbscSolution { sets, cost: best })
}

struct CoverSearch<'a> {
    usable: &'a [usize],
    reds: &'a [u64],
    blues: &'a [u64],
    budget: usize,
    widest: u32,
    /// Positions in `usable` of the sets holding each blue, ascending.
    holders: Vec<Vec<usize>>,
}

impl<'a> CoverSearch<'a> {
    fn new(
        usable: &'a [usize],
        reds: &'a [u64],
        blues: &'a [u64],
        want: u64,
        budget: usize,
    ) -> Self {
        let mut holders = vec![Vec::new(); 64 - want.leading_zeros() as usize];
        for (pos, &i) in usable.iter().enumerate() {
            for (b, h) in holders.iter_mut().enumerate() {
                if blues[i] >> b & 1 == 1 {
                    h.push(pos);
                }
            }
        }
        CoverSearch {
            usable,
            reds,
            blues,
            budget,
            widest: usable
                .iter()
                .map(|&i| (blues[i] & want).count_ones())
                .max()
                .unwrap_or(1),
            holders,
        }
    }

    /// Whether at most `left` sets from `usable[from..]` cover `need`
    /// without exceeding the red budget. Branches on the uncovered blue with
    /// the fewest candidate sets.
    fn exists(&self, from: usize, need: u64, red: u64, left: usize) -> bool {
        if need == 0 {
            return true;
        }
        if (need.count_ones() as usize) > left * self.widest as usize {
            return false;
        }
        let mut pick: Option<&[usize]> = None;
        let mut rest = need;
        while rest != 0 {
            let h = &self.holders[rest.trailing_zeros() as usize];
            rest &= rest - 1;
            let h = &h[h.partition_point(|&p| p < from)..];
            if pick.is_none_or(|p| h.len() < p.len()) {
                pick = Some(h);
            }
        }
        // a picked set meets no remaining blue, so `from` can stay put
        pick.unwrap_or(&[]).iter().any(|&pos| {
            let i = self.usable[pos];
            let nr = red | self.reds[i];
            nr.count_ones() as usize <= self.budget
                && self.exists(from, need & !self.blues[i], nr, left - 1)
        })
    }
}

/// Branch and bound on the uncovered blue with the fewest candidate sets.
/// Sets whose reds are already paid for are taken for free, so every branch
/// adds at least one red.
fn min_cost_branch(reds: &[u64], blues: &[u64], need: u64, red: u64, best: &mut usize) {
    let mut need = need;
    for (&r, &b) in reds.iter().zip(blues) {
        if r & !red == 0 {
            need &= !b;
        }
    }
    let paid = red.count_ones() as usize;
    if need == 0 {
        *best = (*best).min(paid);
        return;
    }
    if paid + 1 >= *best {
        return;
    }
    let mut pick = (usize::MAX, 0u64);
    let mut rest = need;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        rest &= rest - 1;
        let options = blues.iter().filter(|&&b| b & low != 0).count();
        if options < pick.0 {
            pick = (options, low);
        }
    }
    for (&r, &b) in reds.iter().zip(blues) {
        if b & pick.1 != 0 {
            min_cost_branch(reds, blues, need, red | r, best);
        }
    }
}

#[cfg(test)]
fn min_cost_by_reds(reds: &[u64], blues: &[u64], want: u64) -> usize {
    let relevant: Vec<usize> = {
        let m = reds
            .iter()
            .zip(blues)
            .filter(|(_, &b)| b != 0)
            .fold(0u64, |m, (&r, _)| m | r);
        BitSet::from_mask(m).iter().collect()
    };
    for k in 0..=relevant.len() {
        let hit = first_combination(Execution::Sequential, relevant.len(), k, |idx| {
            let q = idx.iter().fold(0u64, |m, &i| m | 1 << relevant[i]);
            let covered = reds
                .iter()
                .zip(blues)
                .filter(|(&r, _)| r & !q == 0)
                .fold(0u64, |m, (_, &b)| m | b);
            (covered & want == want).then_some(())
        });
        if hit.is_some() {
            return k;
        }
    }
    unreachable!("coverability was checked")
}

#[cfg(test)]
fn min_cost_by_sets(reds: &[u64], blues: &[u64], want: u64) -> usize {
    let m = reds.len();
    (0u64..1 << m)
        .filter_map(|mask| {
            let (r, b) = BitSet::from_mask(mask)
                .iter()
                .fold((0u64, 0u64), |(r, b), i| (r | reds[i], b | blues[i]));
            (b & want == want).then_some(r.count_ones() as usize)
        })
        .min()
        .expect("coverability was checked")
}
