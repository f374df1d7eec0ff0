//! FD-graph, strongly connected components and the greedy solver for simple
//! dependency sets.

use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::fd::{AttrSet, FdSet};
use crate::instance::{Instance, Symbols};

/// Edge `i -> j` whenever some `X -> j` has `i ∈ X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FdGraph {
    adj: Vec<Vec<usize>>,
}

impl FdGraph {
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Sorted successor list of `v`.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn to_dot(&self, names: &Symbols) -> String {
        let mut out = String::from("digraph fd {\n");
        for v in 0..self.n() {
            let _ = writeln!(out, "  n{v} [label=\"{}\"];", names.names()[v]);
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  n{u} -> n{v};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_fd_graph(fds: &FdSet) -> FdGraph {
    let mut adj = vec![Vec::new(); fds.n()];
    for fd in fds {
        for i in &fd.lhs {
            adj[i].push(fd.rhs.0);
        }
    }
    for vs in &mut adj {
        vs.sort_unstable();
        vs.dedup();
    }
    FdGraph { adj }
}

/// Condensation of an [`FdGraph`]. Components are numbered in reverse
/// topological order: every edge goes from a higher to a lower index.
#[derive(Debug, Clone)]
pub struct CondensedGraph {
    components: Vec<Vec<usize>>,
    comp_of: Vec<usize>,
    dag: Vec<Vec<usize>>,
    reach: Vec<AttrSet>,
}

impl CondensedGraph {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Members of component `c`, ascending.
    pub fn component(&self, c: usize) -> &[usize] {
        &self.components[c]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.comp_of[v]
    }

    pub fn dag_successors(&self, c: usize) -> &[usize] {
        &self.dag[c]
    }

    /// Attributes reachable from component `c`, its own members included.
    pub fn reach(&self, c: usize) -> &AttrSet {
        &self.reach[c]
    }

    /// Components without incoming edges, ascending.
    pub fn sources(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.len()];
        for succ in &self.dag {
            for &d in succ {
                has_in[d] = true;
            }
        }
        (0..self.len()).filter(|&c| !has_in[c]).collect()
    }

    pub fn to_dot(&self, names: &Symbols) -> String {
        let mut out = String::from("digraph condensed {\n");
        for (c, members) in self.components.iter().enumerate() {
            let label: Vec<&str> = members.iter().map(|&v| names.names()[v].as_str()).collect();
            let _ = writeln!(out, "  c{c} [label=\"{{{}}}\"];", label.join(","));
        }
        for (c, succ) in self.dag.iter().enumerate() {
            for d in succ {
                let _ = writeln!(out, "  c{c} -> c{d};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Tarjan's algorithm, iterative, followed by reach sets over the DAG.
pub fn scc_condense(g: &FdGraph) -> CondensedGraph {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp_of = vec![UNSEEN; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&(v, pos)) = call.last() {
            if pos == 0 && index[v] == UNSEEN {
                index[v] = next;
                low[v] = next;
                next += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = g.adj[v].get(pos) {
                call.last_mut().expect("non-empty").1 += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let c = components.len();
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().expect("v is on the stack");
                    on_stack[w] = false;
                    comp_of[w] = c;
                    members.push(w);
                    if w == v {
                        break;
                    }
                }
                members.sort_unstable();
                components.push(members);
            }
        }
    }

    let k = components.len();
    let mut dag = vec![Vec::new(); k];
    for (u, vs) in g.adj.iter().enumerate() {
        for &v in vs {
            let (cu, cv) = (comp_of[u], comp_of[v]);
            if cu != cv {
                dag[cu].push(cv);
            }
        }
    }
    for succ in &mut dag {
        succ.sort_unstable();
        succ.dedup();
    }
    let mut reach: Vec<AttrSet> = Vec::with_capacity(k);
    for c in 0..k {
        let mut r: AttrSet = components[c].iter().copied().collect();
        for &d in &dag[c] {
            debug_assert!(d < c);
            r.union_with(&reach[d]);
        }
        reach.push(r);
    }
    CondensedGraph {
        components,
        comp_of,
        dag,
        reach,
    }
}

/// Repeatedly takes the set covering most uncovered elements, lowest index on
/// ties. Returns indices in pick order.
pub fn greedy_set_cover(universe: &BitSet, sets: &[BitSet]) -> Result<Vec<usize>> {
    let mut all = BitSet::new();
    for s in sets {
        all.union_with(s);
    }
    let missing = universe.difference(&all);
    if !missing.is_empty() {
        return Err(Error::Uncoverable(missing.iter().collect()));
    }
    let mut left = universe.clone();
    let mut picked = Vec::new();
    while !left.is_empty() {
        let (best, _) = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.intersection(&left).len()))
            .fold(
                (usize::MAX, 0),
                |acc, (i, gain)| if gain > acc.1 { (i, gain) } else { acc },
            );
        picked.push(best);
        left.difference_with(&sets[best]);
    }
    Ok(picked)
}

/// Diagnostics from [`solve_simple`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleSolution {
    pub attrs: AttrSet,
    /// Number of strongly connected components.
    pub components: usize,
    /// Number of source components in the condensation.
    pub sources: usize,
}

/// Greedy cover of the targets by reach sets of source components, one
/// lowest-id representative per chosen component.
pub fn solve_simple(inst: &Instance) -> Result<SimpleSolution> {
    if !inst.fds().is_simple() {
        return Err(Error::NotSimple);
    }
    if inst.rounds() < inst.n() {
        return Err(Error::UnsupportedRounds {
            expected: inst.n(),
            actual: inst.rounds(),
        });
    }
    let cg = scc_condense(&build_fd_graph(inst.fds()));
    let sources = cg.sources();
    let sets: Vec<BitSet> = sources
        .iter()
        .map(|&c| cg.reach(c).intersection(inst.targets()))
        .collect();
    let picked = greedy_set_cover(inst.targets(), &sets).map_err(|_| Error::Infeasible {
        rounds: inst.rounds(),
    })?;
    let attrs = picked
        .iter()
        .map(|&i| cg.component(sources[i])[0])
        .collect();
    Ok(SimpleSolution {
        attrs,
        components: cg.len(),
        sources: sources.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::Fd;
    use crate::format::parse_instance;

    fn fds(n: usize, list: &[(&[usize], usize)]) -> FdSet {
        FdSet::new(n, list.iter().map(|(l, r)| Fd::new(l.iter().copied(), *r))).unwrap()
    }

    fn set(xs: &[usize]) -> AttrSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn fd_graph_examples() {
        assert_eq!(
            build_fd_graph(&fds(3, &[(&[0], 1), (&[1], 2)])).edges(),
            vec![(0, 1), (1, 2)]
        );
        assert_eq!(
            build_fd_graph(&fds(4, &[(&[1, 2], 3)])).edges(),
            vec![(1, 3), (2, 3)]
        );
        let g = build_fd_graph(&FdSet::empty(3));
        assert_eq!(g.n(), 3);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn condense_examples() {
        let cg = scc_condense(&build_fd_graph(&fds(3, &[(&[0], 1), (&[1], 0), (&[1], 2)])));
        let mut comps = cg.components().to_vec();
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1], vec![2]]);
        assert_eq!(cg.reach(cg.component_of(0)), &set(&[0, 1, 2]));

        let cg = scc_condense(&build_fd_graph(&fds(4, &[(&[0], 1), (&[1], 2), (&[2], 3)])));
        assert_eq!(cg.len(), 4);
        assert_eq!(cg.sources(), vec![cg.component_of(0)]);

        let cg = scc_condense(&build_fd_graph(&fds(3, &[(&[0], 1), (&[1], 2), (&[2], 0)])));
        assert_eq!(cg.len(), 1);
    }

    #[test]
    fn is_simple_examples() {
        assert!(fds(4, &[(&[0], 1), (&[1], 2), (&[2], 3)]).is_simple());
        assert!(!fds(4, &[(&[0], 1), (&[1, 2], 3)]).is_simple());
        assert!(FdSet::empty(2).is_simple());
    }

    #[test]
    fn greedy_set_cover_examples() {
        let sets = [set(&[1, 2]), set(&[3]), set(&[2, 3])];
        assert_eq!(
            greedy_set_cover(&set(&[1, 2, 3]), &sets).unwrap(),
            vec![0, 1]
        );
        assert_eq!(
            greedy_set_cover(&set(&[]), &sets).unwrap(),
            Vec::<usize>::new()
        );
        assert_eq!(greedy_set_cover(&set(&[1]), &[set(&[1])]).unwrap(), vec![0]);
        assert_eq!(
            greedy_set_cover(&set(&[4]), &sets).unwrap_err(),
            Error::Uncoverable(vec![4])
        );
    }

    #[test]
    fn solve_simple_examples() {
        let inst = parse_instance("a -> b\nb -> c\ntarget: c\n").unwrap();
        assert_eq!(solve_simple(&inst).unwrap().attrs, set(&[0]));

        let inst = parse_instance("a -> b\nc -> d\ntarget: b d\n").unwrap();
        assert_eq!(solve_simple(&inst).unwrap().attrs, set(&[0, 2]));

        let inst = parse_instance("a -> b\nb -> c\nc -> a\ntarget: a c\n").unwrap();
        let sol = solve_simple(&inst).unwrap();
        assert_eq!((sol.attrs, sol.components, sol.sources), (set(&[0]), 1, 1));
    }

    #[test]
    fn solve_simple_preconditions() {
        let inst = parse_instance("a b -> c\ntarget: c\n").unwrap();
        assert_eq!(solve_simple(&inst).unwrap_err(), Error::NotSimple);
        let inst = parse_instance("a -> b\nb -> c\ntarget: c\nrounds: 1\n").unwrap();
        assert!(matches!(
            solve_simple(&inst),
            Err(Error::UnsupportedRounds { .. })
        ));
    }

    #[test]
    fn isolated_target_covers_itself() {
        let inst = parse_instance("attrs: a b t\na -> b\ntarget: t b\n").unwrap();
        assert_eq!(solve_simple(&inst).unwrap().attrs, set(&[0, 2]));
    }

    #[test]
    fn dot_export_lists_edges() {
        let inst = parse_instance("a -> b\ntarget: b\n").unwrap();
        let g = build_fd_graph(inst.fds());
        assert!(g.to_dot(inst.symbols()).contains("n0 -> n1;"));
        let cg = scc_condense(&g);
        assert!(cg.to_dot(inst.symbols()).contains("->"));
    }
}
