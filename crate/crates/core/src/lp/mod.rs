//! Linear relaxations of the layered integer program and their solver.
//!
//! Layer `d` ranges over `n-D..=n`. `x[d][i]` says attribute `i` is known
//! after layer `d`; `z[d][LS]` says left side `LS` fired at layer `d`.
//! The bottom layer `n-D` holds the chosen attributes.

mod simplex;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::fd::AttrSet;
use crate::instance::Instance;

pub use simplex::{solve_lp, LpSolution, FEAS_TOL, PIVOT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Var {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// A minimization problem over bounded variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpModel {
    pub vars: Vec<Var>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<f64>,
    /// `(layer, attribute) -> variable`
    pub x: BTreeMap<(usize, usize), usize>,
    /// `(layer, left side) -> variable`
    pub z: BTreeMap<(usize, AttrSet), usize>,
    /// Layer of the decision variables.
    pub bottom: usize,
    /// Top layer, where targets are required.
    pub top: usize,
}

impl LpModel {
    pub fn add_var(&mut self, name: String, lo: f64, hi: f64, cost: f64) -> usize {
        self.vars.push(Var { name, lo, hi });
        self.objective.push(cost);
        self.vars.len() - 1
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        let name = format!("c{}", self.constraints.len());
        self.constraints.push(Constraint {
            name,
            terms,
            sense,
            rhs,
        });
    }

    pub fn x_var(&self, layer: usize, attr: usize) -> Option<usize> {
        self.x.get(&(layer, attr)).copied()
    }

    pub fn z_var(&self, layer: usize, ls: &AttrSet) -> Option<usize> {
        self.z.get(&(layer, ls.clone())).copied()
    }

    /// Value of `x[layer][attr]`, zero for pruned variables.
    pub fn x_value(&self, sol: &LpSolution, layer: usize, attr: usize) -> f64 {
        self.x_var(layer, attr).map_or(0.0, |k| sol.values[k])
    }

    pub fn z_value(&self, sol: &LpSolution, layer: usize, ls: &AttrSet) -> f64 {
        self.z_var(layer, ls).map_or(0.0, |k| sol.values[k])
    }

    /// Largest constraint or bound violation of `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, &x) in self.vars.iter().zip(values) {
            worst = worst.max(v.lo - x).max(x - v.hi);
        }
        for c in &self.constraints {
            let lhs: f64 = c.terms.iter().map(|&(k, a)| a * values[k]).sum();
            let gap = match c.sense {
                Sense::Le => lhs - c.rhs,
                Sense::Ge => c.rhs - lhs,
                Sense::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(gap);
        }
        worst
    }
}

/// Options for [`build_layered_lp_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayeredOptions {
    /// Drop variables that cannot influence a target.
    pub prune: bool,
}

impl Default for LayeredOptions {
    fn default() -> Self {
        LayeredOptions { prune: true }
    }
}

pub fn build_layered_lp(inst: &Instance) -> LpModel {
    build_layered_lp_with(inst, LayeredOptions::default())
}

/// Relaxation of the layered program:
///
/// ```text
/// minimize   Σ_i x[n-D][i]
/// subject to x[d][i] <= x[d-1][i] + Σ_{LS -> i} z[d][LS]
///            z[d][LS] <= x[d-1][j]        for j ∈ LS
///            x[n][t] = 1                  for t ∈ T
///            0 <= x, z <= 1
/// ```
///
/// Dependencies `{i} -> i` are skipped: the carried term already covers them.
pub fn build_layered_lp_with(inst: &Instance, opts: LayeredOptions) -> LpModel {
    let n = inst.n();
    let rounds = inst.rounds();
    let top = n.max(rounds);
    let bottom = top - rounds;
    let mut into: Vec<Vec<AttrSet>> = vec![Vec::new(); n];
    for fd in inst.fds() {
        if !fd.is_trivial() && !into[fd.rhs.0].contains(&fd.lhs) {
            into[fd.rhs.0].push(fd.lhs.clone());
        }
    }

    // relevant[l] = attributes that get an x variable at layer bottom + l
    let mut relevant = vec![BitSet::new(); rounds + 1];
    if opts.prune {
        relevant[rounds] = inst.targets().clone();
        for l in (0..rounds).rev() {
            let mut r = relevant[l + 1].clone();
            for i in &relevant[l + 1] {
                for ls in &into[i] {
                    r.union_with(ls);
                }
            }
            relevant[l] = r;
        }
    } else {
        relevant.iter_mut().for_each(|r| *r = BitSet::full(n));
    }

    let mut model = LpModel {
        bottom,
        top,
        ..LpModel::default()
    };
    for (l, rel) in relevant.iter().enumerate() {
        let d = bottom + l;
        for i in rel {
            let cost = if l == 0 { 1.0 } else { 0.0 };
            let k = model.add_var(format!("x_{i}_{d}"), 0.0, 1.0, cost);
            model.x.insert((d, i), k);
        }
    }
    for l in 1..=rounds {
        let d = bottom + l;
        let mut sides: Vec<&AttrSet> = Vec::new();
        let mut seen = HashMap::new();
        for i in &relevant[l] {
            for ls in &into[i] {
                if seen.insert(ls, ()).is_none() {
                    sides.push(ls);
                }
            }
        }
        for (s, ls) in sides.into_iter().enumerate() {
            let k = model.add_var(format!("z_{s}_{d}"), 0.0, 1.0, 0.0);
            model.z.insert((d, ls.clone()), k);
            for j in ls {
                let below = model.x[&(d - 1, j)];
                model.add_constraint(vec![(k, 1.0), (below, -1.0)], Sense::Le, 0.0);
            }
        }
        for i in &relevant[l] {
            let mut terms = vec![(model.x[&(d, i)], 1.0), (model.x[&(d - 1, i)], -1.0)];
            for ls in &into[i] {
                terms.push((model.z[&(d, ls.clone())], -1.0));
            }
            model.add_constraint(terms, Sense::Le, 0.0);
        }
    }
    for t in inst.targets() {
        model.add_constraint(vec![(model.x[&(top, t)], 1.0)], Sense::Eq, 1.0);
    }
    model
}

/// The one-round relaxation:
///
/// ```text
/// minimize   Σ_j y_j
/// subject to y_i + Σ_{LS -> i} z_LS >= 1   for i ∈ T
///            z_LS <= y_j                   for j ∈ LS
/// ```
///
/// `y` lives at the bottom layer and `z` at the top, as in [`build_layered_lp`].
pub fn build_one_round_lp(inst: &Instance) -> Result<LpModel> {
    if inst.rounds() != 1 {
        return Err(Error::UnsupportedRounds {
            expected: 1,
            actual: inst.rounds(),
        });
    }
    let n = inst.n();
    let top = n.max(1);
    let bottom = top - 1;
    let mut model = LpModel {
        bottom,
        top,
        ..LpModel::default()
    };
    for j in 0..n {
        let k = model.add_var(format!("y_{j}"), 0.0, 1.0, 1.0);
        model.x.insert((bottom, j), k);
    }
    let mut sides: Vec<&AttrSet> = Vec::new();
    let mut seen = HashMap::new();
    for fd in inst.fds() {
        if inst.targets().contains(fd.rhs.0)
            && !fd.is_trivial()
            && seen.insert(&fd.lhs, ()).is_none()
        {
            sides.push(&fd.lhs);
        }
    }
    for (s, ls) in sides.into_iter().enumerate() {
        let k = model.add_var(format!("z_{s}"), 0.0, 1.0, 0.0);
        model.z.insert((top, ls.clone()), k);
        for j in ls {
            model.add_constraint(
                vec![(k, 1.0), (model.x[&(bottom, j)], -1.0)],
                Sense::Le,
                0.0,
            );
        }
    }
    for t in inst.targets() {
        let mut terms = vec![(model.x[&(bottom, t)], 1.0)];
        let mut seen = HashMap::new();
        for fd in inst.fds() {
            if fd.rhs.0 == t && !fd.is_trivial() && seen.insert(&fd.lhs, ()).is_none() {
                terms.push((model.z[&(top, fd.lhs.clone())], 1.0));
            }
        }
        model.add_constraint(terms, Sense::Ge, 1.0);
    }
    Ok(model)
}

/// Optimum of the layered relaxation, a lower bound on the optimal cardinality.
pub fn lp_lower_bound(inst: &Instance) -> Result<f64> {
    Ok(solve_lp(&build_layered_lp(inst))?.objective)
}

/// CPLEX LP text.
pub fn export_lp(model: &LpModel) -> String {
    fn terms(out: &mut String, model: &LpModel, terms: &[(usize, f64)]) {
        if terms.is_empty() {
            out.push_str(" 0");
        }
        for (pos, &(k, a)) in terms.iter().enumerate() {
            let sign = if a < 0.0 {
                "-"
            } else if pos > 0 {
                "+"
            } else {
                ""
            };
            let mag = a.abs();
            out.push(' ');
            out.push_str(sign);
            if pos > 0 || a < 0.0 {
                out.push(' ');
            }
            if mag != 1.0 {
                let _ = write!(out, "{mag} ");
            }
            out.push_str(&model.vars[k].name);
        }
    }

    let mut out = String::from("Minimize\n obj:");
    let obj: Vec<(usize, f64)> = model
        .objective
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0.0)
        .map(|(k, &c)| (k, c))
        .collect();
    terms(&mut out, model, &obj);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        terms(&mut out, model, &c.terms);
        let op = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", c.rhs);
    }
    out.push_str("Bounds\n");
    for v in &model.vars {
        let _ = writeln!(out, " {} <= {} <= {}", v.lo, v.name, v.hi);
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_instance;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn layered_model_example() {
        let inst = parse_instance("a -> b\ntarget: b\nrounds: 1\n").unwrap();
        let model = build_layered_lp_with(&inst, LayeredOptions { prune: false });
        let mut names: Vec<&str> = model.vars.iter().map(|v| v.name.as_str()).collect();
        names.sort();
        assert_eq!(names, ["x_0_1", "x_0_2", "x_1_1", "x_1_2", "z_0_2"]);
        let text = export_lp(&model);
        assert!(text.contains("z_0_2 - x_0_1 <= 0"), "{text}");
        assert!(text.contains("x_1_2 - x_1_1 - z_0_2 <= 0"), "{text}");
        assert!(text.contains("x_1_2 = 1"), "{text}");
        let sol = solve_lp(&model).unwrap();
        assert!(approx(sol.objective, 1.0));
    }

    #[test]
    fn pruning_drops_irrelevant_variables() {
        let inst = parse_instance("a -> b\nc -> d\ntarget: b\nrounds: 1\n").unwrap();
        let pruned = build_layered_lp(&inst);
        let full = build_layered_lp_with(&inst, LayeredOptions { prune: false });
        assert!(pruned.vars.len() < full.vars.len());
        assert!(pruned.x_var(3, 2).is_none());
        let (a, b) = (solve_lp(&pruned).unwrap(), solve_lp(&full).unwrap());
        assert!(approx(a.objective, b.objective));
    }

    #[test]
    fn empty_targets_cost_nothing() {
        let inst = parse_instance("a -> b\ntarget:\n").unwrap();
        assert!(approx(lp_lower_bound(&inst).unwrap(), 0.0));
    }

    #[test]
    fn one_round_examples() {
        // ab -> t
        let inst = parse_instance("a b -> t\ntarget: t\nrounds: 1\n").unwrap();
        let model = build_one_round_lp(&inst).unwrap();
        let text = export_lp(&model);
        assert!(text.contains("y_2 + z_0 >= 1"), "{text}");
        assert!(text.contains("z_0 - y_0 <= 0"), "{text}");
        assert!(text.contains("z_0 - y_1 <= 0"), "{text}");
        let sol = solve_lp(&model).unwrap();
        assert!(approx(sol.objective, 1.0));

        let inst = parse_instance("attrs: t\ntarget: t\nrounds: 1\n").unwrap();
        let sol = solve_lp(&build_one_round_lp(&inst).unwrap()).unwrap();
        assert!(approx(sol.objective, 1.0));
        assert!(approx(sol.values[0], 1.0));

        // a -> t, b -> t: a single attribute always suffices
        let inst = parse_instance("a -> t\nb -> t\ntarget: t\nrounds: 1\n").unwrap();
        let sol = solve_lp(&build_one_round_lp(&inst).unwrap()).unwrap();
        assert!(approx(sol.objective, 1.0));
    }

    #[test]
    fn one_round_requires_one_round() {
        let inst = parse_instance("a -> b\ntarget: b\nrounds: 2\n").unwrap();
        assert!(build_one_round_lp(&inst).is_err());
    }

    #[test]
    fn chain_bound_is_at_most_one() {
        let inst = parse_instance("a -> b\nb -> c\ntarget: c\nrounds: 2\n").unwrap();
        let v = lp_lower_bound(&inst).unwrap();
        assert!(v <= 1.0 + 1e-9 && v > 0.0);
    }

    #[test]
    fn infeasible_model() {
        let mut m = LpModel::default();
        let y = m.add_var("y".into(), 0.0, 1.0, 1.0);
        m.add_constraint(vec![(y, 1.0)], Sense::Ge, 2.0);
        assert_eq!(solve_lp(&m).unwrap_err(), Error::LpInfeasible);
    }

    #[test]
    fn bounded_variables_and_mixed_rows() {
        // min -x - y  s.t. x + y <= 1.5, x - y >= -0.5, 0 <= x,y <= 1
        let mut m = LpModel::default();
        let x = m.add_var("x".into(), 0.0, 1.0, -1.0);
        let y = m.add_var("y".into(), 0.0, 1.0, -1.0);
        m.add_constraint(vec![(x, 1.0), (y, 1.0)], Sense::Le, 1.5);
        m.add_constraint(vec![(x, 1.0), (y, -1.0)], Sense::Ge, -0.5);
        let sol = solve_lp(&m).unwrap();
        assert!(approx(sol.objective, -1.5));
        assert!(m.max_violation(&sol.values) < 1e-9);

        // equality with negative right side and a shifted lower bound
        let mut m = LpModel::default();
        let x = m.add_var("x".into(), 0.25, 1.0, 1.0);
        let y = m.add_var("y".into(), 0.0, 1.0, 2.0);
        m.add_constraint(vec![(x, -1.0), (y, -1.0)], Sense::Eq, -1.0);
        let sol = solve_lp(&m).unwrap();
        assert!(approx(sol.objective, 1.0));
        assert!(approx(sol.values[x], 1.0));
    }
}
