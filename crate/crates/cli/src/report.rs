//! JSON reports and their `--pretty` tables.

use serde::Serialize;

use crate::Failure;

pub const SCHEMA_VERSION: u32 = 1;

pub trait Pretty {
    fn pretty(&self) -> String;
}

pub fn emit<T: Serialize + Pretty>(report: &T, pretty: bool) -> Result<(), Failure> {
    if pretty {
        print!("{}", report.pretty());
    } else {
        println!(
            "{}",
            serde_json::to_string(report).expect("reports serialize")
        );
    }
    Ok(())
}

#[derive(Serialize)]
pub struct ClosureReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub input: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    pub closure: Vec<String>,
}

impl Pretty for ClosureReport {
    fn pretty(&self) -> String {
        let rounds = self
            .rounds
            .map_or("unbounded".to_string(), |d| d.to_string());
        format!(
            "input:   {{{}}}\nrounds:  {rounds}\nclosure: {{{}}}\n",
            self.input.join(", "),
            self.closure.join(", ")
        )
    }
}

/// Attribute names for dependency files, set indices for Red-Blue Set Cover.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Solution {
    Attributes(Vec<String>),
    Sets(Vec<usize>),
}

impl Solution {
    fn render(&self) -> String {
        match self {
            Solution::Attributes(xs) => xs.join(", "),
            Solution::Sets(xs) => xs
                .iter()
                .map(|s| format!("#{s}"))
                .collect::<Vec<_>>()
                .join(", "),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub problem: &'static str,
    pub mode: &'static str,
    pub solution: Solution,
    pub size: usize,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_vs_lp: Option<f64>,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attempts: Option<usize>,
}

fn opt(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.4}"))
}

impl Pretty for SolveReport {
    fn pretty(&self) -> String {
        let mut s = format!(
            "mode:      {}\nsolution:  {{{}}}\nsize:      {}\nfeasible:  {}\nlp bound:  {}\nratio/lp:  {}\nelapsed:   {:.3} ms\n",
            self.mode,
            self.solution.render(),
            self.size,
            self.feasible,
            opt(self.lp_bound),
            opt(self.ratio_vs_lp),
            self.elapsed_ms
        );
        if let (Some(seed), Some(n)) = (self.seed, self.attempts) {
            s += &format!("seed:      {seed} (attempt {n})\n");
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_vs_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_vs_lp: Option<f64>,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub problem: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp_bound: Option<f64>,
    pub modes: Vec<CompareRow>,
}

impl Pretty for CompareReport {
    fn pretty(&self) -> String {
        let mut s = format!(
            "{:<12} {:>6} {:>9} {:>9} {:>9} {:>11}\n",
            "mode", "size", "feasible", "/exact", "/lp", "ms"
        );
        for r in &self.modes {
            match &r.error {
                Some(e) => s += &format!("{:<12} {e}\n", r.mode),
                None => {
                    s += &format!(
                        "{:<12} {:>6} {:>9} {:>9} {:>9} {:>11.3}\n",
                        r.mode,
                        r.size.map_or("-".into(), |v| v.to_string()),
                        r.feasible,
                        opt(r.ratio_vs_exact),
                        opt(r.ratio_vs_lp),
                        r.elapsed_ms
                    )
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchResult {
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_vs_lp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_vs_exact: Option<f64>,
    pub samples_ms: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchInstance {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub rounds: usize,
    pub lp_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<usize>,
    /// Exact optimum over LP bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrality_gap: Option<f64>,
    pub results: Vec<BenchResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeSummary {
    pub mode: &'static str,
    pub runs: usize,
    pub feasible_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_ratio_vs_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ratio_vs_exact: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub suite: &'static str,
    pub repeat: usize,
    pub parallel: bool,
    pub instances: Vec<BenchInstance>,
    pub summary: Vec<ModeSummary>,
}

impl Pretty for BenchReport {
    fn pretty(&self) -> String {
        let mut s = format!(
            "{:<18} {:>3} {:>3} {:>2} {:>8} {:>5} {:>6}  {:<12} {:>5} {:>5} {:>8} {:>8} {:>10}\n",
            "instance",
            "n",
            "m",
            "D",
            "lp",
            "exact",
            "gap",
            "mode",
            "size",
            "ok",
            "/lp",
            "/exact",
            "median ms"
        );
        for inst in &self.instances {
            for (k, r) in inst.results.iter().enumerate() {
                let head = if k == 0 {
                    format!(
                        "{:<18} {:>3} {:>3} {:>2} {:>8.4} {:>5} {:>6}",
                        inst.name,
                        inst.n,
                        inst.m,
                        inst.rounds,
                        inst.lp_bound,
                        inst.exact.map_or("-".into(), |v| v.to_string()),
                        inst.integrality_gap
                            .map_or("-".into(), |v| format!("{v:.3}"))
                    )
                } else {
                    " ".repeat(52)
                };
                let mut ms = r.samples_ms.clone();
                ms.sort_by(f64::total_cmp);
                let median = ms.get(ms.len() / 2).copied().unwrap_or(0.0);
                s += &format!(
                    "{head}  {:<12} {:>5} {:>5} {:>8} {:>8} {:>10.3}\n",
                    r.mode,
                    r.size.map_or("-".into(), |v| v.to_string()),
                    r.feasible,
                    opt(r.ratio_vs_lp),
                    opt(r.ratio_vs_exact),
                    median
                );
            }
        }
        s += "\nmode         runs  feasible  mean/exact  max/exact\n";
        for m in &self.summary {
            s += &format!(
                "{:<12} {:>4} {:>9.3} {:>11} {:>10}\n",
                m.mode,
                m.runs,
                m.feasible_rate,
                opt(m.mean_ratio_vs_exact),
                opt(m.max_ratio_vs_exact)
            );
        }
        s
    }
}
