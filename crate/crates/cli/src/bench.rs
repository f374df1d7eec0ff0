use std::time::Instant;

use clap::ValueEnum;

use tcand::exec::map_vec;
use tcand::{
    exact_tcand, gen_gap_instance, gen_random_instance, lp_lower_bound, Execution, Instance,
    RandomParams,
};

use crate::report::{BenchInstance, BenchReport, BenchResult, ModeSummary, SCHEMA_VERSION};
use crate::solve::{run_tcand, Options};
use crate::{Failure, Mode};

/// Largest universe handed to the exact oracle.
const EXACT_MAX_N: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Integrality-gap layers with width 5 and one to three rounds.
    Gap,
    /// Two dozen random instances on 8 to 12 attributes.
    RandomSmall,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Gap => "gap",
            Suite::RandomSmall => "random-small",
        }
    }

    fn instances(self) -> Result<Vec<(String, Instance)>, Failure> {
        let mut out = Vec::new();
        match self {
            Suite::Gap => {
                for d in 1..=3 {
                    out.push((format!("gap-g5-d{d}"), gen_gap_instance(5, d)?));
                }
            }
            Suite::RandomSmall => {
                for i in 0..24u64 {
                    let n = 8 + (i % 5) as usize;
                    // every fourth instance is simple with unbounded rounds
                    let (rounds, max_lhs) = match i % 4 {
                        3 => (None, 1),
                        k => (Some(k as usize + 1), 2),
                    };
                    let p = RandomParams {
                        n,
                        m: n + n / 2,
                        max_lhs,
                        target_fraction: 0.3,
                        rounds,
                        seed: i,
                    };
                    out.push((format!("random-{i}"), gen_random_instance(&p)?));
                }
            }
        }
        Ok(out)
    }
}

fn applicable(inst: &Instance, mode: Mode) -> bool {
    match mode {
        Mode::Exact => inst.n() <= EXACT_MAX_N,
        Mode::Simple => inst.fds().is_simple() && inst.rounds() >= inst.n(),
        Mode::RbscGreedy => inst.rounds() == 1,
        Mode::LpDet | Mode::LpRand => true,
    }
}

fn measure(name: &str, inst: &Instance, repeat: usize, opts: &Options) -> BenchInstance {
    let lp_bound = lp_lower_bound(inst).unwrap_or(f64::NAN);
    let exact = (inst.n() <= EXACT_MAX_N)
        .then(|| exact_tcand(inst).ok().map(|x| x.len()))
        .flatten();
    let per_lp = |size: usize| (lp_bound > 1e-9).then(|| size as f64 / lp_bound);
    let results = Mode::ALL
        .into_iter()
        .filter(|&m| applicable(inst, m))
        .map(|mode| {
            let mut samples_ms = Vec::with_capacity(repeat);
            let mut first = None;
            for _ in 0..repeat {
                let start = Instant::now();
                let run = run_tcand(inst, mode, opts);
                samples_ms.push(start.elapsed().as_secs_f64() * 1e3);
                first.get_or_insert(run);
            }
            match first.expect("at least one sample") {
                Ok(run) => {
                    let size = run.attrs.len();
                    BenchResult {
                        mode: mode.name(),
                        size: Some(size),
                        feasible: inst.is_feasible(&run.attrs),
                        ratio_vs_lp: per_lp(size),
                        ratio_vs_exact: exact.filter(|&e| e > 0).map(|e| size as f64 / e as f64),
                        samples_ms,
                        error: None,
                    }
                }
                Err(e) => BenchResult {
                    mode: mode.name(),
                    size: None,
                    feasible: false,
                    ratio_vs_lp: None,
                    ratio_vs_exact: None,
                    samples_ms,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    BenchInstance {
        name: name.to_string(),
        n: inst.n(),
        m: inst.fds().len(),
        rounds: inst.rounds(),
        lp_bound,
        exact,
        integrality_gap: exact.and_then(per_lp),
        results,
    }
}

fn summarize(instances: &[BenchInstance]) -> Vec<ModeSummary> {
    Mode::ALL
        .into_iter()
        .filter_map(|mode| {
            let rows: Vec<&BenchResult> = instances
                .iter()
                .flat_map(|i| &i.results)
                .filter(|r| r.mode == mode.name())
                .collect();
            if rows.is_empty() {
                return None;
            }
            let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio_vs_exact).collect();
            Some(ModeSummary {
                mode: mode.name(),
                runs: rows.len(),
                feasible_rate: rows.iter().filter(|r| r.feasible).count() as f64
                    / rows.len() as f64,
                mean_ratio_vs_exact: (!ratios.is_empty())
                    .then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
                max_ratio_vs_exact: ratios.iter().copied().reduce(f64::max),
            })
        })
        .collect()
}

pub fn run(suite: Suite, repeat: usize, exec: Execution) -> Result<BenchReport, Failure> {
    let opts = Options { seed: 0, c: 2.0 };
    let instances = map_vec(exec, &suite.instances()?, |(name, inst)| {
        measure(name, inst, repeat, &opts)
    });
    Ok(BenchReport {
        schema_version: SCHEMA_VERSION,
        command: "bench",
        suite: suite.name(),
        repeat,
        parallel: exec.is_parallel(),
        summary: summarize(&instances),
        instances,
    })
}
