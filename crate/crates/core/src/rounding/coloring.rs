//! Meta-graphs of left sides and equitable colouring.

use crate::error::{Error, Result};
use crate::fd::{Attr, AttrSet, FdSet};

/// Simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Ignores loops and repeated edges.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
            let pos = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(pos, u);
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Left sides of the dependencies into one target, adjacent when they
/// share an attribute. The last node is the target itself, standing for the
/// implicit `{t} -> t`; it is isolated because dependencies whose left side
/// contains the target are left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaGraph {
    pub target: Attr,
    pub nodes: Vec<AttrSet>,
    pub graph: Graph,
}

impl MetaGraph {
    /// Index of the `{t}` node.
    pub fn self_node(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Nodes coming from actual dependencies.
    pub fn fd_nodes(&self) -> &[AttrSet] {
        &self.nodes[..self.nodes.len() - 1]
    }
}

pub fn build_meta_graph(t: Attr, fds: &FdSet) -> MetaGraph {
    let mut nodes: Vec<AttrSet> = Vec::new();
    for fd in fds {
        if fd.rhs == t && !fd.lhs.contains(t.0) && !nodes.contains(&fd.lhs) {
            nodes.push(fd.lhs.clone());
        }
    }
    let mut graph = Graph::new(nodes.len() + 1);
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i].intersects(&nodes[j]) {
                graph.add_edge(i, j);
            }
        }
    }
    nodes.push([t.0].into_iter().collect());
    MetaGraph {
        target: t,
        nodes,
        graph,
    }
}

/// A proper colouring with `k + 1` classes whose sizes differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub classes: usize,
}

impl Coloring {
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.classes];
        for &c in &self.colors {
            sizes[c] += 1;
        }
        sizes
    }

    /// Members of class `c`, ascending.
    pub fn class(&self, c: usize) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == c)
            .collect()
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        (0..g.len()).all(|u| {
            g.neighbors(u)
                .iter()
                .all(|&v| self.colors[u] != self.colors[v])
        })
    }

    pub fn is_equitable(&self) -> bool {
        spread(&self.class_sizes()) <= 1
    }
}

/// Equitable `(k + 1)`-colouring of a graph with maximum degree at most `k`.
///
/// Greedy assignment into the smallest admissible class, then moves along
/// chains of classes (`v ∈ X` with no neighbour in `Y` may move to `Y`)
/// from an oversized class to an undersized one. Chains can get stuck, so a
/// capacity-constrained backtracking search finishes the remaining cases.
pub fn equitable_coloring(g: &Graph, k: usize) -> Result<Coloring> {
    let degree = g.max_degree();
    if degree > k {
        return Err(Error::DegreeExceeded { degree, bound: k });
    }
    let classes = k + 1;
    let n = g.len();
    let mut colors = vec![usize::MAX; n];
    let mut sizes = vec![0usize; classes];
    for v in 0..n {
        let mut blocked = vec![false; classes];
        for &u in g.neighbors(v) {
            if colors[u] != usize::MAX {
                blocked[colors[u]] = true;
            }
        }
        let c = (0..classes)
            .filter(|&c| !blocked[c])
            .min_by_key(|&c| (sizes[c], c))
            .expect("degree <= k leaves a free class");
        colors[v] = c;
        sizes[c] += 1;
    }

    while let Some(chain) = balancing_chain(g, &colors, &sizes) {
        for (v, to) in chain.into_iter().rev() {
            sizes[colors[v]] -= 1;
            sizes[to] += 1;
            colors[v] = to;
        }
    }

    let coloring = if spread(&sizes) <= 1 {
        Coloring { colors, classes }
    } else {
        backtrack(g, classes)
            .ok_or_else(|| Error::Internal("no equitable colouring found".into()))?
    };
    debug_assert!(coloring.is_proper(g) && coloring.is_equitable());
    Ok(coloring)
}

fn spread(sizes: &[usize]) -> usize {
    sizes.iter().max().unwrap_or(&0) - sizes.iter().min().unwrap_or(&0)
}

fn movable(g: &Graph, colors: &[usize], v: usize, to: usize) -> bool {
    g.neighbors(v).iter().all(|&u| colors[u] != to)
}

/// Shortest chain of moves from a largest class to a class at least two
/// smaller, as `(vertex, destination)` pairs in path order.
fn balancing_chain(g: &Graph, colors: &[usize], sizes: &[usize]) -> Option<Vec<(usize, usize)>> {
    let max = *sizes.iter().max()?;
    let min = *sizes.iter().min()?;
    if max - min <= 1 {
        return None;
    }
    let classes = sizes.len();
    for start in (0..classes).filter(|&c| sizes[c] == max) {
        // BFS over classes; prev[y] = (x, v) means v moves from x to y.
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; classes];
        let mut seen = vec![false; classes];
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for y in 0..classes {
                if seen[y] {
                    continue;
                }
                let mover = (0..g.len()).find(|&v| colors[v] == x && movable(g, colors, v, y));
                let Some(v) = mover else { continue };
                seen[y] = true;
                prev[y] = Some((x, v));
                if sizes[y] + 2 <= max {
                    let mut chain = Vec::new();
                    let mut cur = y;
                    while let Some((from, v)) = prev[cur] {
                        chain.push((v, cur));
                        cur = from;
                    }
                    chain.reverse();
                    return Some(chain);
                }
                queue.push_back(y);
            }
        }
    }
    None
}

/// Exhaustive search with class capacities; vertices in decreasing degree,
/// at most one fresh empty class tried per vertex.
fn backtrack(g: &Graph, classes: usize) -> Option<Coloring> {
    let n = g.len();
    let q = n / classes;
    let big = n % classes;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.neighbors(v).len()), v));

    struct State<'a> {
        g: &'a Graph,
        order: Vec<usize>,
        colors: Vec<usize>,
        sizes: Vec<usize>,
        q: usize,
        big: usize,
        full_big: usize,
    }

    fn go(s: &mut State<'_>, pos: usize) -> bool {
        if pos == s.order.len() {
            return true;
        }
        let v = s.order[pos];
        let mut tried_empty = false;
        for c in 0..s.sizes.len() {
            if s.sizes[c] == 0 {
                if tried_empty {
                    continue;
                }
                tried_empty = true;
            }
            let fits = s.sizes[c] < s.q || (s.sizes[c] == s.q && s.full_big < s.big);
            if !fits {
                continue;
            }
            if !movable(s.g, &s.colors, v, c) {
                continue;
            }
            s.colors[v] = c;
            s.sizes[c] += 1;
            let grew_big = s.sizes[c] == s.q + 1;
            if grew_big {
                s.full_big += 1;
            }
            if go(s, pos + 1) {
                return true;
            }
            if grew_big {
                s.full_big -= 1;
            }
            s.sizes[c] -= 1;
            s.colors[v] = usize::MAX;
        }
        false
    }

    let mut s = State {
        g,
        order,
        colors: vec![usize::MAX; n],
        sizes: vec![0; classes],
        q,
        big,
        full_big: 0,
    };
    go(&mut s, 0).then(|| Coloring {
        colors: s.colors,
        classes,
    })
}
