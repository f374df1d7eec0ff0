//! Instance generators: integrality-gap layers, vertex cover and random fuzzing input.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::fd::{Fd, FdSet};
use crate::instance::{Instance, Symbols};
use crate::rounding::Graph;

/// Layers `V(0), ..., V(D)` of `g` attributes each. Every pair of layer `r`
/// derives exactly one attribute of layer `r+1`, the pairs being spread so
/// each attribute receives `⌊C(g,2)/g⌋` or `⌈C(g,2)/g⌉` of them. Targets are
/// the top layer and the round budget is `D`.
///
/// The pair `{k, k+d mod g}` for `1 <= d <= (g-1)/2` goes to attribute `k`;
/// for even `g` the opposite pair `{k, k+g/2}` goes to `k < g/2`. With `g = 5`
/// no four attributes derive the top layer, so the optimum is 5.
pub fn gen_gap_instance(g: usize, rounds: usize) -> Result<Instance> {
    if g < 3 {
        return Err(Error::InvalidParameter(format!("layer width {g} < 3")));
    }
    if rounds < 1 {
        return Err(Error::InvalidParameter(
            "at least one layer is required".into(),
        ));
    }
    let id = |r: usize, i: usize| r * g + i;
    let mut fds = Vec::new();
    for r in 0..rounds {
        for k in 0..g {
            let mut pairs: Vec<usize> = (1..=(g - 1) / 2).map(|d| (k + d) % g).collect();
            if g.is_multiple_of(2) && k < g / 2 {
                pairs.push(k + g / 2);
            }
            for other in pairs {
                fds.push(Fd::new([id(r, k), id(r, other)], id(r + 1, k)));
            }
        }
    }
    let n = g * (rounds + 1);
    let names = (0..=rounds)
        .flat_map(|r| (0..g).map(move |i| format!("x{i}_{r}")))
        .collect();
    let targets = (0..g).map(|i| id(rounds, i)).collect();
    Instance::with_symbols(FdSet::new(n, fds)?, targets, rounds, Symbols::new(names)?)
}

/// Vertex `v` becomes attribute `v{v}`, edge `uv` the target `e{u}_{v}` with
/// the dependencies `v{u} -> e{u}_{v}` and `v{v} -> e{u}_{v}`; one round.
/// Either endpoint derives the edge, so feasible sets are vertex covers.
pub fn gen_vc_instance(graph: &Graph) -> Result<Instance> {
    let nv = graph.len();
    let edges: Vec<(usize, usize)> = (0..nv)
        .flat_map(|u| {
            graph
                .neighbors(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
        .collect();
    let n = nv + edges.len();
    let fds = edges
        .iter()
        .enumerate()
        .flat_map(|(k, &(u, v))| [Fd::new([u], nv + k), Fd::new([v], nv + k)]);
    let names = (0..nv)
        .map(|v| format!("v{v}"))
        .chain(edges.iter().map(|(u, v)| format!("e{u}_{v}")))
        .collect();
    let targets = (nv..n).collect();
    Instance::with_symbols(FdSet::new(n, fds)?, targets, 1, Symbols::new(names)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomParams {
    pub n: usize,
    pub m: usize,
    pub max_lhs: usize,
    pub target_fraction: f64,
    /// Defaults to `n`.
    pub rounds: Option<usize>,
    pub seed: u64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            n: 10,
            m: 15,
            max_lhs: 2,
            target_fraction: 0.3,
            rounds: None,
            seed: 0,
        }
    }
}

/// `m` dependencies with left sides of uniform size in `[1, max_lhs]` and a
/// right side outside the left side; `round(target_fraction * n)` targets.
/// Duplicates are dropped, so fewer than `m` dependencies may remain.
pub fn gen_random_instance(p: &RandomParams) -> Result<Instance> {
    if p.n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if p.max_lhs == 0 || p.max_lhs > p.n {
        return Err(Error::InvalidParameter(format!(
            "max_lhs {} outside [1, {}]",
            p.max_lhs, p.n
        )));
    }
    if p.m > 0 && p.max_lhs >= p.n {
        return Err(Error::InvalidParameter(format!(
            "max_lhs {} leaves no room for a right side among {} attributes",
            p.max_lhs, p.n
        )));
    }
    if !(0.0..=1.0).contains(&p.target_fraction) {
        return Err(Error::InvalidParameter(format!(
            "target fraction {} outside [0, 1]",
            p.target_fraction
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut fds = Vec::with_capacity(p.m);
    for _ in 0..p.m {
        let size = rng.gen_range(1..=p.max_lhs);
        let picked = sample(&mut rng, p.n, size + 1).into_vec();
        let rhs = picked[size];
        fds.push(Fd::new(picked[..size].iter().copied(), rhs));
    }
    let count = (p.target_fraction * p.n as f64).round() as usize;
    let targets: BitSet = sample(&mut rng, p.n, count.min(p.n)).into_iter().collect();
    let rounds = p.rounds.unwrap_or(p.n);
    Instance::new(FdSet::new(p.n, fds)?, targets, rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::write_instance;
    use crate::oracle::exact_tcand;

    #[test]
    fn gap_instance_shapes() {
        let inst = gen_gap_instance(5, 1).unwrap();
        assert_eq!(
            (inst.n(), inst.fds().len(), inst.targets().len()),
            (10, 10, 5)
        );
        let inst = gen_gap_instance(5, 3).unwrap();
        assert_eq!((inst.n(), inst.fds().len(), inst.rounds()), (20, 30, 3));
        let inst = gen_gap_instance(3, 1).unwrap();
        assert_eq!(inst.fds().len(), 3);
        for t in inst.targets() {
            assert_eq!(inst.fds().iter().filter(|fd| fd.rhs.0 == t).count(), 1);
        }
        assert!(gen_gap_instance(2, 1).is_err());
    }

    #[test]
    fn gap_pairs_are_balanced_and_used_once() {
        for g in 3..9 {
            let inst = gen_gap_instance(g, 2).unwrap();
            let pairs = g * (g - 1) / 2;
            assert_eq!(inst.fds().len(), 2 * pairs);
            for fd in inst.fds() {
                assert_eq!(fd.lhs.len(), 2);
            }
            let lhs: std::collections::HashSet<_> =
                inst.fds().iter().map(|fd| fd.lhs.clone()).collect();
            assert_eq!(lhs.len(), 2 * pairs);
            for t in g..3 * g {
                let indeg = inst.fds().iter().filter(|fd| fd.rhs.0 == t).count();
                assert!(
                    indeg == pairs / g || indeg == pairs.div_ceil(g),
                    "g={g} t={t} {indeg}"
                );
            }
        }
    }

    #[test]
    fn gap_optimum_is_five() {
        assert_eq!(
            exact_tcand(&gen_gap_instance(5, 1).unwrap()).unwrap().len(),
            5
        );
    }

    #[test]
    fn vc_examples() {
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let inst = gen_vc_instance(&tri).unwrap();
        assert_eq!((inst.n(), inst.fds().len()), (6, 6));
        assert_eq!(inst.fds().stats().f, 2);
        assert_eq!(exact_tcand(&inst).unwrap().len(), 2);

        let edge = Graph::from_edges(2, [(0, 1)]);
        assert_eq!(
            exact_tcand(&gen_vc_instance(&edge).unwrap()).unwrap().len(),
            1
        );

        let star = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]);
        let x = exact_tcand(&gen_vc_instance(&star).unwrap()).unwrap();
        assert_eq!(x.iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn random_examples() {
        let p = RandomParams {
            m: 0,
            seed: 3,
            ..RandomParams::default()
        };
        let inst = gen_random_instance(&p).unwrap();
        assert_eq!(exact_tcand(&inst).unwrap().len(), inst.targets().len());

        let p = RandomParams {
            max_lhs: 1,
            m: 30,
            ..RandomParams::default()
        };
        assert!(gen_random_instance(&p).unwrap().fds().is_simple());

        let p = RandomParams {
            seed: 7,
            ..RandomParams::default()
        };
        assert_eq!(
            write_instance(&gen_random_instance(&p).unwrap()),
            write_instance(&gen_random_instance(&p).unwrap())
        );
    }

    #[test]
    fn random_rejects_bad_parameters() {
        let base = RandomParams::default();
        for p in [
            RandomParams { n: 0, ..base },
            RandomParams { max_lhs: 0, ..base },
            RandomParams {
                max_lhs: 10,
                ..base
            },
            RandomParams {
                target_fraction: 1.5,
                ..base
            },
            RandomParams {
                rounds: Some(11),
                ..base
            },
        ] {
            assert!(gen_random_instance(&p).is_err(), "{p:?}");
        }
    }

    #[test]
    fn right_side_never_in_left_side() {
        for seed in 0..20 {
            let p = RandomParams {
                seed,
                max_lhs: 3,
                ..RandomParams::default()
            };
            for fd in gen_random_instance(&p).unwrap().fds() {
                assert!(!fd.lhs.contains(fd.rhs.0));
            }
        }
    }
}
