//! Rounding of layered LP solutions: threshold rounding and randomized
//! rounding over equitably coloured meta-graphs.

pub mod coloring;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::fd::{Attr, AttrSet};
use crate::instance::Instance;
use crate::lp::{build_layered_lp, build_one_round_lp, solve_lp, LpModel, LpSolution};

pub use coloring::{build_meta_graph, equitable_coloring, Coloring, Graph, MetaGraph};

/// Slack applied to every threshold comparison against LP values.
pub const ROUNDING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Rounded {
    pub attrs: AttrSet,
    pub lp_objective: f64,
    pub threshold: f64,
}

/// Keeps every attribute whose bottom-layer value reaches `1/(f+1)^D`.
pub fn round_deterministic(inst: &Instance) -> Result<Rounded> {
    let model = build_layered_lp(inst);
    let sol = solve_lp(&model)?;
    Ok(threshold_round(inst, &model, &sol))
}

pub fn threshold_round(inst: &Instance, model: &LpModel, sol: &LpSolution) -> Rounded {
    let f = inst.fds().stats().f;
    let threshold = ((f + 1) as f64).powi(inst.rounds() as i32).recip();
    let attrs = (0..inst.n())
        .filter(|&i| model.x_value(sol, model.bottom, i) >= threshold - ROUNDING_TOL)
        .collect();
    Rounded {
        attrs,
        lp_objective: sol.objective,
        threshold,
    }
}

/// `max(1, ⌈c (Δ+1) ln n⌉)`.
pub fn coin_count(c: f64, delta: usize, n: usize) -> usize {
    let raw = (c * (delta + 1) as f64 * (n.max(1) as f64).ln()).ceil();
    (raw as usize).max(1)
}

/// First class whose weight reaches `1/classes`, with its weight.
pub fn select_class(coloring: &Coloring, weights: &[f64]) -> Option<(usize, f64)> {
    let mut sums = vec![0.0; coloring.classes];
    for (v, &c) in coloring.colors.iter().enumerate() {
        sums[c] += weights[v];
    }
    let need = 1.0 / coloring.classes as f64 - ROUNDING_TOL;
    sums.iter().position(|&s| s >= need).map(|j| (j, sums[j]))
}

/// One attribute's coins: candidates and their success probability.
#[derive(Debug, Clone)]
struct Draw {
    attrs: Vec<(usize, f64)>,
}

/// Precomputed LP solution and selected colour classes for one-round
/// instances, so that many seeds can be sampled cheaply.
#[derive(Debug, Clone)]
pub struct RandomizedRounder {
    n: usize,
    coins: usize,
    draws: Vec<(Attr, Draw)>,
    lp_objective: f64,
}

impl RandomizedRounder {
    pub fn new(inst: &Instance, c: f64) -> Result<Self> {
        if !(c >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "oversampling constant {c} < 1"
            )));
        }
        let model = build_one_round_lp(inst)?;
        let sol = solve_lp(&model)?;
        let delta = inst.fds().stats().delta;
        let mut draws = Vec::new();
        for t in inst.targets() {
            let meta = build_meta_graph(Attr(t), inst.fds());
            let mut weights: Vec<f64> = meta
                .fd_nodes()
                .iter()
                .map(|ls| model.z_value(&sol, model.top, ls))
                .collect();
            weights.push(model.x_value(&sol, model.bottom, t));
            let draw = class_draw(&meta, &weights, delta, |a| {
                model.x_value(&sol, model.bottom, a)
            })?;
            draws.push((Attr(t), draw));
        }
        Ok(RandomizedRounder {
            n: inst.n(),
            coins: coin_count(c, delta, inst.n()),
            draws,
            lp_objective: sol.objective,
        })
    }

    pub fn coins(&self) -> usize {
        self.coins
    }

    pub fn lp_objective(&self) -> f64 {
        self.lp_objective
    }

    pub fn sample(&self, seed: u64) -> AttrSet {
        let mut out = BitSet::with_capacity(self.n);
        for (t, draw) in &self.draws {
            toss(&mut out, seed, 0, t.0, draw, self.coins);
        }
        out
    }
}

/// Colours the meta-graph with `Δ+1` classes, picks the first class of
/// weight at least `1/(Δ+1)` and lists the attributes of its left sides with
/// their probabilities.
fn class_draw(
    meta: &MetaGraph,
    weights: &[f64],
    delta: usize,
    prob: impl Fn(usize) -> f64,
) -> Result<Draw> {
    let coloring = equitable_coloring(&meta.graph, delta)?;
    let (class, _) = select_class(&coloring, weights).ok_or_else(|| {
        Error::Internal(format!("no colour class reaches weight 1/{}", delta + 1))
    })?;
    let mut attrs = BitSet::new();
    for v in coloring.class(class) {
        attrs.union_with(&meta.nodes[v]);
    }
    Ok(Draw {
        attrs: attrs.iter().map(|a| (a, prob(a).clamp(0.0, 1.0))).collect(),
    })
}

fn toss(out: &mut AttrSet, seed: u64, layer: usize, t: usize, draw: &Draw, coins: usize) {
    for &(a, p) in &draw.attrs {
        if out.contains(a) {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((layer as u64) << 48) ^ ((t as u64) << 24) ^ a as u64);
        if (0..coins).any(|_| rng.gen::<f64>() < p) {
            out.insert(a);
        }
    }
}

/// One-round randomized rounding. The result is feasible only with high
/// probability; callers check.
pub fn round_randomized(inst: &Instance, seed: u64, c: f64) -> Result<AttrSet> {
    Ok(RandomizedRounder::new(inst, c)?.sample(seed))
}

/// Randomized rounding down the layered LP. Attributes picked at layer `d`
/// become the targets of layer `d-1`; each target's weights are scaled by its
/// own LP value. With one round this is [`round_randomized`].
pub fn round_randomized_d(inst: &Instance, seed: u64, c: f64) -> Result<AttrSet> {
    if inst.rounds() == 1 {
        return round_randomized(inst, seed, c);
    }
    if !(c >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "oversampling constant {c} < 1"
        )));
    }
    let model = build_layered_lp(inst);
    let sol = solve_lp(&model)?;
    let delta = inst.fds().stats().delta;
    let coins = coin_count(c, delta, inst.n());
    let mut wanted = inst.targets().clone();
    for d in (model.bottom + 1..=model.top).rev() {
        let mut below = BitSet::with_capacity(inst.n());
        for t in &wanted {
            let scale = model.x_value(&sol, d, t);
            if scale <= 1e-12 {
                below.insert(t);
                continue;
            }
            let meta = build_meta_graph(Attr(t), inst.fds());
            let mut weights: Vec<f64> = meta
                .fd_nodes()
                .iter()
                .map(|ls| model.z_value(&sol, d, ls) / scale)
                .collect();
            weights.push(model.x_value(&sol, d - 1, t) / scale);
            let draw = class_draw(&meta, &weights, delta, |a| {
                model.x_value(&sol, d - 1, a) / scale
            })?;
            toss(&mut below, seed, d, t, &draw, coins);
        }
        wanted = below;
    }
    Ok(wanted)
}

/// Feasibility rate and mean size of [`RandomizedRounder::sample`] over seeds `0..seeds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarlo {
    pub feasible_rate: f64,
    pub mean_size: f64,
    pub lp_objective: f64,
    pub coins: usize,
}

pub fn monte_carlo(inst: &Instance, c: f64, seeds: u64, exec: Execution) -> Result<MonteCarlo> {
    let rounder = RandomizedRounder::new(inst, c)?;
    let outcomes = map_range(exec, 0, seeds as usize, |s| {
        let x = rounder.sample(s as u64);
        (inst.is_feasible(&x), x.len())
    });
    let total = seeds.max(1) as f64;
    Ok(MonteCarlo {
        feasible_rate: outcomes.iter().filter(|o| o.0).count() as f64 / total,
        mean_size: outcomes.iter().map(|o| o.1).sum::<usize>() as f64 / total,
        lp_objective: rounder.lp_objective,
        coins: rounder.coins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_instance;

    fn set(xs: &[usize]) -> AttrSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn deterministic_examples() {
        let inst = parse_instance("a -> t\nb -> t\ntarget: t\nrounds: 1\n").unwrap();
        let r = round_deterministic(&inst).unwrap();
        assert!((r.threshold - 1.0 / 3.0).abs() < 1e-12);
        assert!(inst.is_feasible(&r.attrs));

        let inst = parse_instance("attrs: t\ntarget: t\nrounds: 1\n").unwrap();
        assert_eq!(round_deterministic(&inst).unwrap().attrs, set(&[0]));
    }

    #[test]
    fn coin_counts() {
        assert_eq!(coin_count(2.0, 0, 1), 1);
        assert_eq!(coin_count(2.0, 1, 10), (4.0 * 10f64.ln()).ceil() as usize);
    }

    #[test]
    fn randomized_examples() {
        let inst = parse_instance("attrs: t\ntarget: t\nrounds: 1\n").unwrap();
        for seed in 0..20 {
            assert_eq!(round_randomized(&inst, seed, 2.0).unwrap(), set(&[0]));
        }
        let inst = parse_instance("a b -> t\ntarget: t\nrounds: 1\n").unwrap();
        assert_eq!(round_randomized(&inst, 3, 2.0).unwrap(), set(&[2]));
    }

    #[test]
    fn randomized_is_reproducible() {
        let inst = parse_instance(
            "a b -> t\nc d -> t\ne f -> t\ng h -> t\ni j -> t\ntarget: t\nrounds: 1\n",
        )
        .unwrap();
        for seed in 0..10 {
            assert_eq!(
                round_randomized(&inst, seed, 2.0).unwrap(),
                round_randomized(&inst, seed, 2.0).unwrap()
            );
        }
    }

    #[test]
    fn disjoint_pairs_are_covered_often() {
        let inst = parse_instance(
            "a b -> t\nc d -> t\ne f -> t\ng h -> t\ni j -> t\ntarget: t\nrounds: 1\n",
        )
        .unwrap();
        let mc = monte_carlo(&inst, 2.0, 200, Execution::Sequential).unwrap();
        assert!(mc.feasible_rate >= 0.9, "{mc:?}");
    }

    #[test]
    fn multi_round_examples() {
        let inst = parse_instance("a -> b\nb -> c\ntarget: c\nrounds: 2\n").unwrap();
        let ok = (0..200)
            .filter(|&s| inst.is_feasible(&round_randomized_d(&inst, s, 2.0).unwrap()))
            .count();
        assert!(ok >= 180, "{ok}");

        let inst = parse_instance("a -> b\ntarget:\nrounds: 2\n").unwrap();
        assert!(round_randomized_d(&inst, 1, 2.0).unwrap().is_empty());

        let inst = parse_instance("a -> b\ntarget: b\nrounds: 1\n").unwrap();
        for s in 0..5 {
            assert_eq!(
                round_randomized_d(&inst, s, 2.0).unwrap(),
                round_randomized(&inst, s, 2.0).unwrap()
            );
        }
    }

    #[test]
    fn rejects_small_oversampling() {
        let inst = parse_instance("a -> b\ntarget: b\nrounds: 1\n").unwrap();
        assert!(round_randomized(&inst, 0, 0.5).is_err());
    }
}
