//! Functional dependencies and attribute closure.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub type AttrSet = BitSet;

/// Dense attribute index in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attr(pub usize);

impl Attr {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Attr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A regular dependency `lhs -> rhs`. The left side may be empty, in which
/// case the dependency fires unconditionally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fd {
    pub lhs: AttrSet,
    pub rhs: Attr,
}

impl Fd {
    pub fn new(lhs: impl IntoIterator<Item = usize>, rhs: usize) -> Self {
        Fd {
            lhs: lhs.into_iter().collect(),
            rhs: Attr(rhs),
        }
    }

    pub fn is_simple(&self) -> bool {
        self.lhs.len() == 1
    }

    /// `{i} -> i`.
    pub fn is_self(&self) -> bool {
        self.lhs.len() == 1 && self.lhs.contains(self.rhs.0)
    }

    /// Right side already on the left, so the dependency never derives anything.
    pub fn is_trivial(&self) -> bool {
        self.lhs.contains(self.rhs.0)
    }
}

/// A dependency as written by a user, possibly with several right-side attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawFd {
    pub lhs: AttrSet,
    pub rhs: Vec<Attr>,
}

impl RawFd {
    pub fn new(lhs: impl IntoIterator<Item = usize>, rhs: impl IntoIterator<Item = usize>) -> Self {
        RawFd {
            lhs: lhs.into_iter().collect(),
            rhs: rhs.into_iter().map(Attr).collect(),
        }
    }
}

/// Normalized dependency set over the universe `0..n`.
///
/// Immutable after construction. Keeps a per-attribute occurrence index so
/// that [`FdSet::closure`] runs in time linear in the total size of the set.
#[derive(Debug, Clone)]
pub struct FdSet {
    n: usize,
    fds: Vec<Fd>,
    /// Dependencies using attribute `a` are `occurs[starts[a]..starts[a + 1]]`.
    starts: Vec<u32>,
    occurs: Vec<u32>,
    unconditional: Vec<u32>,
}

impl PartialEq for FdSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.fds == other.fds
    }
}

impl Eq for FdSet {}

/// Closure bookkeeping, exposed for linearity checks.
#[derive(Debug, Clone, Default)]
pub struct ClosureTrace {
    /// Number of times each dependency's pending-attribute counter was decremented.
    pub decrements: Vec<usize>,
    /// Attributes taken off the work queue.
    pub dequeued: usize,
}

impl FdSet {
    /// Builds a set from regular dependencies, dropping duplicates while
    /// keeping first occurrences in order.
    pub fn new(n: usize, fds: impl IntoIterator<Item = Fd>) -> Result<Self> {
        let all: Vec<Fd> = fds.into_iter().collect();
        for fd in &all {
            if fd.rhs.0 >= n {
                return Err(Error::AttributeOutOfRange { attr: fd.rhs.0, n });
            }
            if let Some(a) = fd.lhs.iter().find(|&a| a >= n) {
                return Err(Error::AttributeOutOfRange { attr: a, n });
            }
        }
        // sort positions by content; the first position of each run survives
        let mut order: Vec<u32> = (0..all.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| {
            let (x, y) = (&all[a as usize], &all[b as usize]);
            (x.rhs, &x.lhs, a).cmp(&(y.rhs, &y.lhs, b))
        });
        let mut keep = vec![true; all.len()];
        for w in order.windows(2) {
            let (x, y) = (&all[w[0] as usize], &all[w[1] as usize]);
            if x.rhs == y.rhs && x.lhs == y.lhs {
                keep[w[1] as usize] = false;
            }
        }
        let kept: Vec<Fd> = all
            .into_iter()
            .zip(keep)
            .filter(|p| p.1)
            .map(|p| p.0)
            .collect();
        let mut starts = vec![0u32; n + 1];
        let mut unconditional = Vec::new();
        for (k, fd) in kept.iter().enumerate() {
            if fd.lhs.is_empty() {
                unconditional.push(k as u32);
            }
            for a in &fd.lhs {
                starts[a + 1] += 1;
            }
        }
        for a in 0..n {
            starts[a + 1] += starts[a];
        }
        let mut fill = starts.clone();
        let mut occurs = vec![0u32; starts[n] as usize];
        for (k, fd) in kept.iter().enumerate() {
            for a in &fd.lhs {
                occurs[fill[a] as usize] = k as u32;
                fill[a] += 1;
            }
        }
        Ok(FdSet {
            n,
            fds: kept,
            starts,
            occurs,
            unconditional,
        })
    }

    pub fn empty(n: usize) -> Self {
        FdSet::new(n, []).expect("empty set is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.fds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fds.is_empty()
    }

    pub fn fds(&self) -> &[Fd] {
        &self.fds
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Fd> {
        self.fds.iter()
    }

    /// Distinct left sides in first-occurrence order.
    pub fn left_sides(&self) -> Vec<AttrSet> {
        let mut seen = HashSet::new();
        self.fds
            .iter()
            .filter(|fd| seen.insert(&fd.lhs))
            .map(|fd| fd.lhs.clone())
            .collect()
    }

    /// Distinct left sides of dependencies into `rhs`, in order.
    pub fn left_sides_into(&self, rhs: Attr) -> Vec<AttrSet> {
        let mut seen = HashSet::new();
        self.fds
            .iter()
            .filter(|fd| fd.rhs == rhs && seen.insert(&fd.lhs))
            .map(|fd| fd.lhs.clone())
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        self.fds.iter().all(Fd::is_simple)
    }

    /// `X ∪ {i : LS -> i, LS ⊆ X}`.
    pub fn one_step_closure(&self, x: &AttrSet) -> AttrSet {
        let mut out = x.clone();
        for fd in &self.fds {
            if fd.lhs.is_subset(x) {
                out.insert(fd.rhs.0);
            }
        }
        out
    }

    /// Attributes derivable from `x` within `rounds` rounds of inference.
    pub fn bounded_closure(&self, x: &AttrSet, rounds: usize) -> AttrSet {
        let mut cur = x.clone();
        for _ in 0..rounds {
            let next = self.one_step_closure(&cur);
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }

    /// Full attribute closure `X⁺`.
    pub fn closure(&self, x: &AttrSet) -> AttrSet {
        self.closure_traced(x).0
    }

    pub fn closure_traced(&self, x: &AttrSet) -> (AttrSet, ClosureTrace) {
        let mut pending: Vec<usize> = self.fds.iter().map(|fd| fd.lhs.len()).collect();
        let mut trace = ClosureTrace {
            decrements: vec![0; self.fds.len()],
            dequeued: 0,
        };
        let mut out = x.clone();
        let mut queue: Vec<usize> = x.iter().collect();
        for &k in &self.unconditional {
            let rhs = self.fds[k as usize].rhs.0;
            if out.insert(rhs) {
                queue.push(rhs);
            }
        }
        while let Some(a) = queue.pop() {
            trace.dequeued += 1;
            if a >= self.n {
                continue;
            }
            for &k in &self.occurs[self.starts[a] as usize..self.starts[a + 1] as usize] {
                let k = k as usize;
                pending[k] -= 1;
                trace.decrements[k] += 1;
                if pending[k] == 0 {
                    let rhs = self.fds[k].rhs.0;
                    if out.insert(rhs) {
                        queue.push(rhs);
                    }
                }
            }
        }
        (out, trace)
    }

    pub fn stats(&self) -> Stats {
        let mut per_rhs: HashMap<Attr, HashSet<&AttrSet>> = HashMap::new();
        for fd in &self.fds {
            per_rhs.entry(fd.rhs).or_default().insert(&fd.lhs);
        }
        let f = per_rhs.values().map(HashSet::len).max().unwrap_or(0);
        let sides = self.left_sides();
        let delta = sides
            .iter()
            .enumerate()
            .map(|(i, ls)| {
                sides
                    .iter()
                    .enumerate()
                    .filter(|&(j, other)| i != j && ls.intersects(other))
                    .count()
            })
            .max()
            .unwrap_or(0);
        Stats { f, delta }
    }
}

impl<'a> IntoIterator for &'a FdSet {
    type Item = &'a Fd;
    type IntoIter = std::slice::Iter<'a, Fd>;

    fn into_iter(self) -> Self::IntoIter {
        self.fds.iter()
    }
}

/// Expands multi-attribute right sides and removes duplicates. Output order
/// follows input order, then right-side order.
pub fn normalize(n: usize, raw: impl IntoIterator<Item = RawFd>) -> Result<FdSet> {
    let expanded = raw.into_iter().flat_map(|r| {
        let lhs = r.lhs;
        r.rhs.into_iter().map(move |rhs| Fd {
            lhs: lhs.clone(),
            rhs,
        })
    });
    FdSet::new(n, expanded)
}

/// Structural parameters that drive the rounding guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stats {
    /// Maximum number of distinct left sides pointing at one attribute.
    pub f: usize,
    /// Maximum number of other left sides sharing an attribute with a left side.
    pub delta: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> AttrSet {
        xs.iter().copied().collect()
    }

    // a=0 b=1 c=2 d=3
    fn chain() -> FdSet {
        FdSet::new(3, [Fd::new([0], 1), Fd::new([1], 2)]).unwrap()
    }

    #[test]
    fn normalize_expands_and_dedupes() {
        let fs = normalize(4, [RawFd::new([0, 1], [2, 3]), RawFd::new([0], [2])]).unwrap();
        assert_eq!(
            fs.fds(),
            &[Fd::new([0, 1], 2), Fd::new([0, 1], 3), Fd::new([0], 2)]
        );
        let fs = normalize(2, [RawFd::new([0], [1]), RawFd::new([0], [1])]).unwrap();
        assert_eq!(fs.len(), 1);
    }

    #[test]
    fn normalize_rejects_out_of_range() {
        assert_eq!(
            normalize(2, [RawFd::new([0], [5])]).unwrap_err(),
            Error::AttributeOutOfRange { attr: 5, n: 2 }
        );
    }

    #[test]
    fn one_step_examples() {
        assert_eq!(chain().one_step_closure(&set(&[0])), set(&[0, 1]));
        let fs = FdSet::new(1, [Fd::new([], 0)]).unwrap();
        assert_eq!(fs.one_step_closure(&set(&[])), set(&[0]));
        let fs = FdSet::new(4, [Fd::new([1, 2], 3), Fd::new([0], 1)]).unwrap();
        assert_eq!(fs.one_step_closure(&set(&[1, 2])), set(&[1, 2, 3]));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(chain().closure(&set(&[0])), set(&[0, 1, 2]));
        let fs = FdSet::new(3, [Fd::new([0], 1), Fd::new([0], 2)]).unwrap();
        assert_eq!(fs.closure(&set(&[0])), set(&[0, 1, 2]));
        assert_eq!(chain().closure(&BitSet::full(3)), BitSet::full(3));
    }

    #[test]
    fn unconditional_fds_fire_from_empty() {
        let fs = FdSet::new(3, [Fd::new([], 1), Fd::new([1], 2)]).unwrap();
        assert_eq!(fs.closure(&set(&[])), set(&[1, 2]));
        assert_eq!(fs.bounded_closure(&set(&[]), 1), set(&[1]));
    }

    #[test]
    fn bounded_closure_examples() {
        assert_eq!(chain().bounded_closure(&set(&[0]), 1), set(&[0, 1]));
        assert_eq!(chain().bounded_closure(&set(&[0]), 2), set(&[0, 1, 2]));
        assert_eq!(chain().bounded_closure(&set(&[0]), 0), set(&[0]));
    }

    #[test]
    fn stats_examples() {
        let fs = FdSet::new(3, [Fd::new([0], 2), Fd::new([1], 2)]).unwrap();
        assert_eq!(fs.stats().f, 2);
        // ab->x bc->y de->z
        let fs = FdSet::new(
            8,
            [Fd::new([0, 1], 5), Fd::new([1, 2], 6), Fd::new([3, 4], 7)],
        )
        .unwrap();
        assert_eq!(fs.stats().delta, 1);
        let fs = FdSet::new(1, [Fd::new([0], 0)]).unwrap();
        assert_eq!(fs.stats(), Stats { f: 1, delta: 0 });
    }

    #[test]
    fn f_counts_distinct_left_sides() {
        let fs = FdSet::new(
            3,
            [
                Fd::new([0], 2),
                Fd::new([0], 2),
                Fd::new([1], 2),
                Fd::new([0, 1], 2),
            ],
        )
        .unwrap();
        assert_eq!(fs.stats().f, 3);
    }

    #[test]
    fn delta_counts_shared_left_sides_once() {
        // a->x, a->y share the left side {a}; ab->z intersects it.
        let fs = FdSet::new(5, [Fd::new([0], 3), Fd::new([0], 4), Fd::new([0, 1], 2)]).unwrap();
        assert_eq!(fs.left_sides().len(), 2);
        assert_eq!(fs.stats().delta, 1);
    }
}
