use std::time::Instant;

use tcand::graph::solve_simple;
use tcand::rounding::RandomizedRounder;
use tcand::{
    exact_rbsc, exact_tcand, lp_lower_bound, rbsc_greedy, rbsc_to_tcand, round_deterministic,
    round_randomized_d, tcand_to_rbsc, AttrSet, Instance, RbscInstance, Result,
};

use crate::report::{CompareReport, CompareRow, Solution, SolveReport, SCHEMA_VERSION};
use crate::{Failure, Input, Mode};

/// Seeds tried by lp-rand before giving up.
pub const RAND_ATTEMPTS: u64 = 10;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
    pub c: f64,
}

/// A TCAND answer before re-verification.
#[derive(Debug, Clone)]
pub struct Run {
    pub attrs: AttrSet,
    pub lp_bound: Option<f64>,
    /// Seed and attempt number of lp-rand.
    pub seed: Option<(u64, usize)>,
}

pub fn run_tcand(inst: &Instance, mode: Mode, opts: &Options) -> Result<Run> {
    let plain = |attrs| Run {
        attrs,
        lp_bound: None,
        seed: None,
    };
    Ok(match mode {
        Mode::Exact => plain(exact_tcand(inst)?),
        Mode::Simple => plain(solve_simple(inst)?.attrs),
        Mode::LpDet => {
            let r = round_deterministic(inst)?;
            Run {
                attrs: r.attrs,
                lp_bound: Some(r.lp_objective),
                seed: None,
            }
        }
        Mode::LpRand => {
            let (sample, lp): (Box<dyn Fn(u64) -> Result<AttrSet>>, _) = if inst.rounds() == 1 {
                let rounder = RandomizedRounder::new(inst, opts.c)?;
                let lp = rounder.lp_objective();
                (Box::new(move |s| Ok(rounder.sample(s))), Some(lp))
            } else {
                (Box::new(|s| round_randomized_d(inst, s, opts.c)), None)
            };
            let mut last = AttrSet::new();
            let mut used = (opts.seed, 0);
            for k in 0..RAND_ATTEMPTS {
                let seed = opts.seed.wrapping_add(k);
                last = sample(seed)?;
                used = (seed, k as usize + 1);
                if inst.is_feasible(&last) {
                    break;
                }
            }
            Run {
                attrs: last,
                lp_bound: lp,
                seed: Some(used),
            }
        }
        Mode::RbscGreedy => {
            let red = tcand_to_rbsc(inst)?;
            plain(red.cover_to_attrs(&rbsc_greedy(&red.rb)?.sets))
        }
    })
}

/// LP bound of the reduced instance when one was solved, and the lp-rand seed.
type Extras = (Option<f64>, Option<(u64, usize)>);

fn run_rbsc(rb: &RbscInstance, mode: Mode, opts: &Options) -> Result<(Vec<usize>, Extras)> {
    match mode {
        Mode::Exact => Ok((exact_rbsc(rb)?.sets, (None, None))),
        Mode::RbscGreedy => Ok((rbsc_greedy(rb)?.sets, (None, None))),
        _ => {
            let red = rbsc_to_tcand(rb)?;
            let run = run_tcand(&red.inst, mode, opts)?;
            Ok((red.attrs_to_cover(rb, &run.attrs), (run.lp_bound, run.seed)))
        }
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn ratio(size: usize, lp: Option<f64>) -> Option<f64> {
    lp.filter(|&b| b > 1e-9).map(|b| size as f64 / b)
}

pub fn lp_bound_of(input: &Input) -> Option<f64> {
    match input {
        Input::Tcand(inst) => lp_lower_bound(inst).ok(),
        Input::Rbsc(rb) => rbsc_to_tcand(rb)
            .ok()
            .and_then(|red| lp_lower_bound(&red.inst).ok()),
    }
}

pub fn solve(
    input: &Input,
    mode: Mode,
    opts: &Options,
) -> std::result::Result<SolveReport, Failure> {
    let start = Instant::now();
    let (problem, solution, size, feasible, lp, seed) = match input {
        Input::Tcand(inst) => {
            let run = run_tcand(inst, mode, opts)?;
            let feasible = inst.is_feasible(&run.attrs);
            let size = run.attrs.len();
            let names = Solution::Attributes(inst.names_of(&run.attrs));
            ("tcand", names, size, feasible, run.lp_bound, run.seed)
        }
        Input::Rbsc(rb) => {
            let (sets, (lp, seed)) = run_rbsc(rb, mode, opts)?;
            let (cost, covers) = rb.evaluate(&sets);
            ("rbsc", Solution::Sets(sets), cost, covers, lp, seed)
        }
    };
    let elapsed_ms = ms(start);
    let lp_bound = lp.or_else(|| lp_bound_of(input));
    Ok(SolveReport {
        schema_version: SCHEMA_VERSION,
        command: "solve",
        problem,
        mode: mode.name(),
        solution,
        size,
        feasible,
        lp_bound,
        ratio_vs_lp: ratio(size, lp_bound),
        elapsed_ms,
        seed: seed.map(|s| s.0),
        attempts: seed.map(|s| s.1),
    })
}

/// Every mode on the same input, sizes against the exact optimum when it is
/// within reach. Modes whose preconditions fail are listed with their error.
pub fn compare(input: &Input, opts: &Options) -> CompareReport {
    let lp_bound = lp_bound_of(input);
    let mut exact = None;
    let mut modes = Vec::new();
    for mode in Mode::ALL {
        let row = match solve(input, mode, opts) {
            Ok(rep) => {
                if mode == Mode::Exact {
                    exact = Some(rep.size);
                }
                CompareRow {
                    mode: mode.name(),
                    size: Some(rep.size),
                    feasible: rep.feasible,
                    ratio_vs_exact: exact.filter(|&e| e > 0).map(|e| rep.size as f64 / e as f64),
                    ratio_vs_lp: ratio(rep.size, lp_bound),
                    elapsed_ms: rep.elapsed_ms,
                    error: None,
                }
            }
            Err(f) => CompareRow {
                mode: mode.name(),
                size: None,
                feasible: false,
                ratio_vs_exact: None,
                ratio_vs_lp: None,
                elapsed_ms: 0.0,
                error: Some(f.message),
            },
        };
        modes.push(row);
    }
    CompareReport {
        schema_version: SCHEMA_VERSION,
        command: "solve",
        problem: match input {
            Input::Tcand(_) => "tcand",
            Input::Rbsc(_) => "rbsc",
        },
        exact,
        lp_bound,
        modes,
    }
}
