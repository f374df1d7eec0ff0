use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fd::{Attr, AttrSet, FdSet};

/// Bidirectional map between attribute names and dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Symbols {
    names: Vec<String>,
    ids: HashMap<String, usize>,
}

impl Symbols {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut ids = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !is_valid_name(name) {
                return Err(Error::InvalidParameter(format!(
                    "invalid attribute name `{name}`"
                )));
            }
            if ids.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate attribute name `{name}`"
                )));
            }
        }
        Ok(Symbols { names, ids })
    }

    /// `v0, v1, ...`
    pub fn numbered(n: usize) -> Self {
        Symbols::new((0..n).map(|i| format!("v{i}")).collect()).expect("generated names are valid")
    }

    /// Returns the id of `name`, adding it if unseen.
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<Attr> {
        self.ids.get(name).copied().map(Attr)
    }

    pub fn name(&self, attr: Attr) -> &str {
        &self.names[attr.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "_"
        && !name.starts_with('#')
        && !name.contains("->")
        && !name.contains(':')
        && !name.contains(',')
        && !name.chars().any(char::is_whitespace)
}

/// A D-round TCAND instance: dependencies, target set and round budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    fds: FdSet,
    targets: AttrSet,
    rounds: usize,
    symbols: Symbols,
}

/// Largest admissible round budget. The empty universe still admits one round.
pub fn max_rounds(n: usize) -> usize {
    n.max(1)
}

impl Instance {
    pub fn new(fds: FdSet, targets: AttrSet, rounds: usize) -> Result<Self> {
        let n = fds.n();
        Instance::with_symbols(fds, targets, rounds, Symbols::numbered(n))
    }

    /// Instance with unbounded inference (`rounds = n`).
    pub fn full(fds: FdSet, targets: AttrSet) -> Result<Self> {
        let rounds = max_rounds(fds.n());
        Instance::new(fds, targets, rounds)
    }

    pub fn with_symbols(
        fds: FdSet,
        targets: AttrSet,
        rounds: usize,
        symbols: Symbols,
    ) -> Result<Self> {
        let n = fds.n();
        if symbols.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} names for {n} attributes",
                symbols.len()
            )));
        }
        if let Some(t) = targets.iter().find(|&t| t >= n) {
            return Err(Error::AttributeOutOfRange { attr: t, n });
        }
        if rounds < 1 || rounds > max_rounds(n) {
            return Err(Error::RoundsOutOfRange {
                rounds,
                max: max_rounds(n),
            });
        }
        Ok(Instance {
            fds,
            targets,
            rounds,
            symbols,
        })
    }

    pub fn with_rounds(mut self, rounds: usize) -> Result<Self> {
        if rounds < 1 || rounds > max_rounds(self.n()) {
            return Err(Error::RoundsOutOfRange {
                rounds,
                max: max_rounds(self.n()),
            });
        }
        self.rounds = rounds;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.fds.n()
    }

    pub fn fds(&self) -> &FdSet {
        &self.fds
    }

    pub fn targets(&self) -> &AttrSet {
        &self.targets
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn name(&self, attr: Attr) -> &str {
        self.symbols.name(attr)
    }

    /// Names of the attributes in `set`, in id order.
    pub fn names_of(&self, set: &AttrSet) -> Vec<String> {
        set.iter().map(|a| self.name(Attr(a)).to_owned()).collect()
    }

    /// Whether `x` derives every target within the round budget.
    pub fn is_feasible(&self, x: &AttrSet) -> bool {
        if self.targets.is_subset(x) {
            return true;
        }
        let derived = if self.rounds >= self.n() {
            self.fds.closure(x)
        } else {
            self.fds.bounded_closure(x, self.rounds)
        };
        self.targets.is_subset(&derived)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::Fd;

    fn set(xs: &[usize]) -> AttrSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn feasibility_examples() {
        let fds = FdSet::new(2, [Fd::new([0], 1)]).unwrap();
        let inst = Instance::new(fds, set(&[1]), 1).unwrap();
        assert!(inst.is_feasible(&set(&[0])));

        let inst = Instance::new(FdSet::empty(1), set(&[0]), 1).unwrap();
        assert!(!inst.is_feasible(&set(&[])));

        let fds = FdSet::new(3, [Fd::new([0], 1), Fd::new([1], 2)]).unwrap();
        let inst = Instance::new(fds, set(&[2]), 1).unwrap();
        assert!(!inst.is_feasible(&set(&[0])));
        assert!(inst.clone().with_rounds(2).unwrap().is_feasible(&set(&[0])));
    }

    #[test]
    fn rejects_bad_rounds_and_targets() {
        let fds = FdSet::empty(2);
        assert_eq!(
            Instance::new(fds.clone(), set(&[]), 3).unwrap_err(),
            Error::RoundsOutOfRange { rounds: 3, max: 2 }
        );
        assert!(Instance::new(fds.clone(), set(&[]), 0).is_err());
        assert_eq!(
            Instance::new(fds, set(&[4]), 1).unwrap_err(),
            Error::AttributeOutOfRange { attr: 4, n: 2 }
        );
        assert!(Instance::full(FdSet::empty(0), set(&[])).is_ok());
    }

    #[test]
    fn symbols_reject_reserved_names() {
        assert!(Symbols::new(vec!["a".into(), "a".into()]).is_err());
        for bad in ["_", "a->b", "x:y", "", "has space", "#c"] {
            assert!(Symbols::new(vec![bad.into()]).is_err(), "{bad}");
        }
    }
}
