//! Red-Blue Set Cover and its equivalence with one-round TCAND.
//!
//! Text format, one directive per line:
//!
//! ```text
//! red: r1 r2
//! blue: b1 b2
//! set: r1 b1
//! set: b2
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::fd::{Attr, AttrSet, Fd, FdSet};
use crate::instance::{is_valid_name, Instance, Symbols};

/// One set of the collection, split into its red and blue parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RbscSet {
    pub reds: BitSet,
    pub blues: BitSet,
}

impl RbscSet {
    pub fn new(
        reds: impl IntoIterator<Item = usize>,
        blues: impl IntoIterator<Item = usize>,
    ) -> Self {
        RbscSet {
            reds: reds.into_iter().collect(),
            blues: blues.into_iter().collect(),
        }
    }
}

/// Reds and blues live in separate index spaces, so they are disjoint by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbscInstance {
    red_names: Vec<String>,
    blue_names: Vec<String>,
    sets: Vec<RbscSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbscSolution {
    /// Chosen set indices, ascending.
    pub sets: Vec<usize>,
    /// Number of distinct red elements in the chosen sets.
    pub cost: usize,
}

impl RbscInstance {
    pub fn new(
        red_names: Vec<String>,
        blue_names: Vec<String>,
        sets: Vec<RbscSet>,
    ) -> Result<Self> {
        let mut all: Vec<&str> = red_names
            .iter()
            .chain(&blue_names)
            .map(String::as_str)
            .collect();
        if let Some(name) = all.iter().find(|n| !is_valid_name(n)) {
            return Err(Error::InvalidParameter(format!(
                "invalid element name `{name}`"
            )));
        }
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!(
                "duplicate element name `{}`",
                w[0]
            )));
        }
        for s in &sets {
            if let Some(x) = s.reds.iter().find(|&x| x >= red_names.len()) {
                return Err(Error::AttributeOutOfRange {
                    attr: x,
                    n: red_names.len(),
                });
            }
            if let Some(x) = s.blues.iter().find(|&x| x >= blue_names.len()) {
                return Err(Error::AttributeOutOfRange {
                    attr: x,
                    n: blue_names.len(),
                });
            }
        }
        Ok(RbscInstance {
            red_names,
            blue_names,
            sets,
        })
    }

    /// Reds named `r0, r1, ...` and blues `b0, b1, ...`.
    pub fn unnamed(reds: usize, blues: usize, sets: Vec<RbscSet>) -> Result<Self> {
        RbscInstance::new(
            (0..reds).map(|i| format!("r{i}")).collect(),
            (0..blues).map(|i| format!("b{i}")).collect(),
            sets,
        )
    }

    pub fn red_count(&self) -> usize {
        self.red_names.len()
    }

    pub fn blue_count(&self) -> usize {
        self.blue_names.len()
    }

    pub fn red_names(&self) -> &[String] {
        &self.red_names
    }

    pub fn blue_names(&self) -> &[String] {
        &self.blue_names
    }

    pub fn sets(&self) -> &[RbscSet] {
        &self.sets
    }

    /// Errors with the uncoverable blue indices, if any.
    pub fn check_coverable(&self) -> Result<()> {
        let mut covered = BitSet::new();
        for s in &self.sets {
            covered.union_with(&s.blues);
        }
        let missing: Vec<usize> = (0..self.blue_count())
            .filter(|&b| !covered.contains(b))
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::Uncoverable(missing))
        }
    }

    /// Red cost and blue coverage of a subcollection.
    pub fn evaluate(&self, chosen: &[usize]) -> (usize, bool) {
        let mut reds = BitSet::new();
        let mut blues = BitSet::new();
        for &i in chosen {
            reds.union_with(&self.sets[i].reds);
            blues.union_with(&self.sets[i].blues);
        }
        (
            reds.len(),
            BitSet::full(self.blue_count()).is_subset(&blues),
        )
    }
}

pub fn parse_rbsc(text: &str) -> Result<RbscInstance> {
    let mut reds: Option<Vec<String>> = None;
    let mut blues: Option<Vec<String>> = None;
    let mut raw_sets: Vec<(usize, Vec<&str>)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| Error::Syntax {
            line: lineno,
            message: "expected `red:`, `blue:` or `set:`".into(),
        })?;
        let names: Vec<&str> = rest.split_whitespace().collect();
        let slot = match key.trim() {
            "red" => &mut reds,
            "blue" => &mut blues,
            "set" => {
                raw_sets.push((lineno, names));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    line: lineno,
                    message: format!("unknown directive `{other}`"),
                })
            }
        };
        if slot.is_some() {
            return Err(Error::Syntax {
                line: lineno,
                message: format!("duplicate `{}` line", key.trim()),
            });
        }
        for name in &names {
            if !is_valid_name(name) {
                return Err(Error::Syntax {
                    line: lineno,
                    message: format!("invalid element name `{name}`"),
                });
            }
        }
        *slot = Some(names.into_iter().map(str::to_owned).collect());
    }
    let reds = reds.unwrap_or_default();
    let blues = blues.unwrap_or_default();
    let red_ids: HashMap<&str, usize> = reds
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let blue_ids: HashMap<&str, usize> = blues
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    if let Some(name) = reds.iter().find(|s| blue_ids.contains_key(s.as_str())) {
        return Err(Error::InvalidParameter(format!(
            "`{name}` is both red and blue"
        )));
    }
    let mut sets = Vec::with_capacity(raw_sets.len());
    for (lineno, names) in raw_sets {
        let mut s = RbscSet::new([], []);
        for name in names {
            if let Some(&r) = red_ids.get(name) {
                s.reds.insert(r);
            } else if let Some(&b) = blue_ids.get(name) {
                s.blues.insert(b);
            } else {
                return Err(Error::UnknownAttribute {
                    line: lineno,
                    name: name.to_owned(),
                });
            }
        }
        sets.push(s);
    }
    RbscInstance::new(reds, blues, sets)
}

pub fn write_rbsc(rb: &RbscInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "red: {}", rb.red_names.join(" "));
    let _ = writeln!(out, "blue: {}", rb.blue_names.join(" "));
    for s in &rb.sets {
        let names: Vec<&str> = s
            .reds
            .iter()
            .map(|r| rb.red_names[r].as_str())
            .chain(s.blues.iter().map(|b| rb.blue_names[b].as_str()))
            .collect();
        let _ = writeln!(out, "set: {}", names.join(" "));
    }
    out
}

/// Whether `text` looks like the Red-Blue format rather than the FD format.
pub fn looks_like_rbsc(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .any(|l| {
            matches!(
                l.split_once(':').map(|(k, _)| k.trim()),
                Some("red" | "blue" | "set")
            )
        })
}

/// Output of [`tcand_to_rbsc`]: blue `j` stands for target `targets[j]`.
#[derive(Debug, Clone)]
pub struct TcandToRbsc {
    pub rb: RbscInstance,
    pub targets: Vec<Attr>,
}

/// One-round TCAND as Red-Blue Set Cover: reds are attributes, blues are
/// copies of the targets. Each dependency into a target gives the set
/// `LS ∪ {t'}`, and each target also gets `{t, t'}` so that choosing the
/// target itself stays expressible.
pub fn tcand_to_rbsc(inst: &Instance) -> Result<TcandToRbsc> {
    if inst.rounds() != 1 {
        return Err(Error::UnsupportedRounds {
            expected: 1,
            actual: inst.rounds(),
        });
    }
    let targets: Vec<Attr> = inst.targets().iter().map(Attr).collect();
    let mut blue_of = vec![usize::MAX; inst.n()];
    for (j, t) in targets.iter().enumerate() {
        blue_of[t.0] = j;
    }
    let mut sets = Vec::new();
    for fd in inst.fds() {
        let j = blue_of[fd.rhs.0];
        if j != usize::MAX {
            sets.push(RbscSet {
                reds: fd.lhs.clone(),
                blues: BitSet::from_iter([j]),
            });
        }
    }
    for (j, t) in targets.iter().enumerate() {
        sets.push(RbscSet::new([t.0], [j]));
    }
    let symbols = inst.symbols();
    let mut taken = HashSet::with_capacity(targets.len());
    let mut blues: Vec<String> = Vec::with_capacity(targets.len());
    for &t in &targets {
        let mut name = format!("{}'", symbols.name(t));
        while symbols.get(&name).is_some() || taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        blues.push(name);
    }
    // names are distinct and valid by construction
    Ok(TcandToRbsc {
        rb: RbscInstance {
            red_names: symbols.names().to_vec(),
            blue_names: blues,
            sets,
        },
        targets,
    })
}

impl TcandToRbsc {
    /// A cover's reds form a one-round feasible attribute set of size `cost`.
    pub fn cover_to_attrs(&self, chosen: &[usize]) -> AttrSet {
        let mut x = BitSet::new();
        for &i in chosen {
            x.union_with(&self.rb.sets()[i].reds);
        }
        x
    }

    /// Every set whose reds lie in `x`. Covers all blues when `x` is feasible,
    /// at red cost at most `|x|`.
    pub fn attrs_to_cover(&self, x: &AttrSet) -> Vec<usize> {
        (0..self.rb.sets().len())
            .filter(|&i| self.rb.sets()[i].reds.is_subset(x))
            .collect()
    }
}

/// Output of [`rbsc_to_tcand`]. Attribute `r` is red `r`; blue `b` becomes the
/// targets `reds + b * copies + j` for `j < copies`.
#[derive(Debug, Clone)]
pub struct RbscToTcand {
    pub inst: Instance,
    pub copies: usize,
    reds: usize,
    fallback: Vec<usize>,
}

/// Red-Blue Set Cover as one-round TCAND. Each set `S` yields `S∖B -> b` for
/// every blue `b ∈ S`.
///
/// Every blue is represented by `copies` interchangeable targets, with
/// `copies` at least the greedy cover cost. Choosing a blue directly then
/// never beats a cover, which keeps the optimal values equal.
pub fn rbsc_to_tcand(rb: &RbscInstance) -> Result<RbscToTcand> {
    let r = rb.red_count();
    let (copies, fallback) = match rbsc_greedy(rb) {
        Ok(sol) => (sol.cost.max(1), sol.sets),
        Err(_) => {
            let mut all = BitSet::new();
            for s in rb.sets() {
                all.union_with(&s.reds);
            }
            (all.len().max(1), (0..rb.sets().len()).collect())
        }
    };
    let n = r + rb.blue_count() * copies;
    let target = |b: usize, j: usize| r + b * copies + j;
    let mut fds =
        Vec::with_capacity(rb.sets().iter().map(|s| s.blues.len()).sum::<usize>() * copies);
    for s in rb.sets() {
        for b in &s.blues {
            for j in 0..copies {
                fds.push(Fd {
                    lhs: s.reds.clone(),
                    rhs: Attr(target(b, j)),
                });
            }
        }
    }
    let mut names = rb.red_names().to_vec();
    for name in rb.blue_names() {
        if copies == 1 {
            names.push(name.clone());
        } else {
            names.extend((0..copies).map(|j| format!("{name}#{j}")));
        }
    }
    let targets: AttrSet = (r..n).collect();
    let inst = Instance::with_symbols(FdSet::new(n, fds)?, targets, 1, Symbols::new(names)?)?;
    Ok(RbscToTcand {
        inst,
        copies,
        reds: r,
        fallback,
    })
}

impl RbscToTcand {
    pub fn cover_to_attrs(&self, rb: &RbscInstance, chosen: &[usize]) -> AttrSet {
        let mut x = BitSet::new();
        for &i in chosen {
            x.union_with(&rb.sets()[i].reds);
        }
        x
    }

    /// A cover of red cost at most `|x|` for a feasible `x`.
    pub fn attrs_to_cover(&self, rb: &RbscInstance, x: &AttrSet) -> Vec<usize> {
        let blues = rb.blue_count();
        let saturated = (0..blues)
            .any(|b| (0..self.copies).all(|j| x.contains(self.reds + b * self.copies + j)));
        if saturated {
            return self.fallback.clone();
        }
        (0..rb.sets().len())
            .filter(|&i| rb.sets()[i].reds.is_subset(x))
            .collect()
    }
}

/// Greedy cover by new blues per new red. Sets adding no new red rank above
/// all others, by new blues; ties go to the lowest index.
pub fn rbsc_greedy(rb: &RbscInstance) -> Result<RbscSolution> {
    rb.check_coverable()?;
    let mut uncovered = BitSet::full(rb.blue_count());
    let mut used = BitSet::new();
    let mut chosen = Vec::new();
    let mut taken = vec![false; rb.sets().len()];
    while !uncovered.is_empty() {
        // (free, blues, reds, index)
        let mut best: Option<(bool, usize, usize, usize)> = None;
        for (i, s) in rb.sets().iter().enumerate() {
            if taken[i] {
                continue;
            }
            let nb = s.blues.intersection(&uncovered).len();
            if nb == 0 {
                continue;
            }
            let nr = s.reds.difference(&used).len();
            let better = match best {
                None => true,
                Some((bfree, bb, br, _)) => match (nr == 0, bfree) {
                    (true, false) => true,
                    (false, true) => false,
                    (true, true) => nb > bb,
                    (false, false) => nb * (br + 1) > bb * (nr + 1),
                },
            };
            if better {
                best = Some((nr == 0, nb, nr, i));
            }
        }
        let (_, _, _, i) = best.expect("coverability was checked");
        taken[i] = true;
        chosen.push(i);
        uncovered.difference_with(&rb.sets()[i].blues);
        used.union_with(&rb.sets()[i].reds);
    }
    chosen.sort_unstable();
    Ok(RbscSolution {
        sets: chosen,
        cost: used.len(),
    })
}
