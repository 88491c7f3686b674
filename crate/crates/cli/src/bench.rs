//! Benchmark suites.
//!
//! A suite file lists one instance per line; `#` starts a comment.
//!
//! ```text
//! file path/to/instance.dvrp [epsilon=1/5] [gamma=G]
//! lb <k> <gamma> [epsilon=1/5]
//! random <seed> <n> [max-weight=8] [epsilon=1/5] [gamma=G]
//! ```
//!
//! Relative paths are resolved against the suite file's directory. Every line becomes one table
//! row: terminal count, `D`, the tour budget, the approximate tour count, the optimum when it is
//! known, their ratio and the wall time. Random and file instances get their optimum from brute
//! force when they are small enough; lower-bound instances use the certified construction.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use dvrp_core::approx::{approx_solve, verify_solution, ApproxConfig};
use dvrp_core::exact::{brute_force_opt, BRUTE_FORCE_MAX_TERMINALS};
use dvrp_core::generators::{gen_lower_bound, gen_random, lower_bound_solution, DistancePolicy, LowerBoundParams};
use dvrp_core::instance::TreeInstance;
use dvrp_core::rational::{format_rational, parse_rational, ratio};
use dvrp_core::{parse_instance, RoutingInstance};

use crate::Failure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuiteEntry {
    File {
        path: PathBuf,
        epsilon: String,
        gamma: Option<usize>,
    },
    LowerBound {
        k: u32,
        gamma: u64,
        epsilon: String,
    },
    Random {
        seed: u64,
        n: usize,
        max_weight: u64,
        epsilon: String,
        gamma: Option<usize>,
    },
}

impl SuiteEntry {
    fn name(&self) -> String {
        match self {
            SuiteEntry::File { path, .. } => path.display().to_string(),
            SuiteEntry::LowerBound { k, gamma, .. } => format!("lb-k{k}-g{gamma}"),
            SuiteEntry::Random { seed, n, .. } => format!("random-s{seed}-n{n}"),
        }
    }
}

const DEFAULT_EPSILON: &str = "1/5";

/// Parses suite text; `base` is the directory relative file paths are joined to.
pub fn parse_suite(text: &str, base: &Path) -> Result<Vec<SuiteEntry>, Failure> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| Failure::Usage(format!("suite line {}: {m}", i + 1));
        let mut positional = Vec::new();
        let mut epsilon = DEFAULT_EPSILON.to_string();
        let mut gamma = None;
        let mut max_weight = 8;
        for token in line.split_whitespace() {
            match token.split_once('=') {
                Some(("epsilon", v)) => epsilon = v.to_string(),
                Some(("gamma", v)) => gamma = Some(v.parse::<usize>().map_err(|_| err("invalid gamma"))?),
                Some(("max-weight", v)) => max_weight = v.parse().map_err(|_| err("invalid max-weight"))?,
                Some((key, _)) => return Err(err(&format!("unknown option `{key}`"))),
                None => positional.push(token),
            }
        }
        let num = |s: &str| s.parse::<u64>().map_err(|_| err(&format!("expected an integer, found `{s}`")));
        let entry = match positional.as_slice() {
            ["file", path] => SuiteEntry::File {
                path: base.join(path),
                epsilon,
                gamma,
            },
            ["lb", k, g] => {
                if gamma.is_some() {
                    return Err(err("lb entries take gamma positionally"));
                }
                SuiteEntry::LowerBound {
                    k: num(k)? as u32,
                    gamma: num(g)?,
                    epsilon,
                }
            }
            ["random", seed, n] => SuiteEntry::Random {
                seed: num(seed)?,
                n: num(n)? as usize,
                max_weight,
                epsilon,
                gamma,
            },
            _ => return Err(err("expected `file <path>`, `lb <k> <gamma>` or `random <seed> <n>`")),
        };
        entries.push(entry);
    }
    Ok(entries)
}

#[derive(Debug, Clone)]
pub struct Row {
    pub name: String,
    pub terminals: usize,
    pub bound: u64,
    pub gamma: usize,
    pub alg: usize,
    pub opt: Option<usize>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub rows: Vec<Row>,
}

impl Table {
    /// Largest `alg/opt` over rows with a known optimum, as a fraction.
    pub fn max_ratio(&self) -> Option<(usize, usize)> {
        self.rows
            .iter()
            .filter_map(|r| r.opt.filter(|&o| o > 0).map(|o| (r.alg, o)))
            .max_by(|a, b| (a.0 as u128 * b.1 as u128).cmp(&(b.0 as u128 * a.1 as u128)))
    }

    pub fn render(&self, with_time: bool) -> String {
        let mut header = vec!["name", "n", "D", "gamma", "alg", "opt", "ratio"];
        if with_time {
            header.push("ms");
        }
        let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for r in &self.rows {
            let mut row = vec![
                r.name.clone(),
                r.terminals.to_string(),
                r.bound.to_string(),
                r.gamma.to_string(),
                r.alg.to_string(),
                r.opt.map_or("-".into(), |o| o.to_string()),
                fraction(r.opt.map(|o| (r.alg, o))),
            ];
            if with_time {
                row.push(r.elapsed.as_millis().to_string());
            }
            cells.push(row);
        }
        let widths: Vec<usize> = (0..header.len())
            .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &cells {
            let line: Vec<String> = row.iter().zip(&widths).map(|(s, &w)| format!("{s:<w$}")).collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        let _ = writeln!(out, "max-ratio {}", fraction(self.max_ratio()));
        out
    }
}

fn fraction(pair: Option<(usize, usize)>) -> String {
    match pair {
        Some((a, b)) if b > 0 => format_rational(&ratio(a as u64, b as u64)),
        _ => "-".into(),
    }
}

fn config(epsilon: &str, gamma: Option<usize>, workers: Option<usize>) -> Result<ApproxConfig, Failure> {
    let mut cfg = ApproxConfig::new(parse_rational(epsilon)?);
    cfg.gamma_override = gamma;
    cfg.workers = workers;
    Ok(cfg)
}

fn oracle(inst: &RoutingInstance) -> Result<Option<usize>, Failure> {
    if inst.terminals().len() > BRUTE_FORCE_MAX_TERMINALS {
        return Ok(None);
    }
    Ok(brute_force_opt(inst)?.map(|r| r.tour_count))
}

fn run_entry(entry: &SuiteEntry, workers: Option<usize>) -> Result<Row, Failure> {
    let (inst, cfg, certified) = match entry {
        SuiteEntry::File { path, epsilon, gamma } => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            (parse_instance(&text)?, config(epsilon, *gamma, workers)?, None)
        }
        SuiteEntry::LowerBound { k, gamma, epsilon } => {
            let params = LowerBoundParams::new(*k, *gamma)?;
            let inst = gen_lower_bound(params)?;
            let solution = lower_bound_solution(params, &inst)?;
            if let Some(v) = verify_solution(&inst, &solution).first() {
                return Err(Failure::Violation(format!("{}: construction is not feasible: {v}", entry.name())));
            }
            let cfg = config(epsilon, Some(*gamma as usize), workers)?;
            (inst, cfg, Some(solution.len()))
        }
        SuiteEntry::Random {
            seed,
            n,
            max_weight,
            epsilon,
            gamma,
        } => (
            gen_random(*seed, *n, *max_weight, DistancePolicy::default())?,
            config(epsilon, *gamma, workers)?,
            None,
        ),
    };
    let start = Instant::now();
    let report = approx_solve(&inst, &cfg)?;
    let elapsed = start.elapsed();
    let opt = match certified {
        Some(c) => Some(c),
        None => oracle(&inst)?,
    };
    Ok(Row {
        name: entry.name(),
        terminals: inst.terminals().len(),
        bound: inst.distance_bound(),
        gamma: report.gamma_used,
        alg: report.total_tours,
        opt,
        elapsed,
    })
}

/// Reads and runs a suite file. Rows keep the order of the file.
pub fn run_suite_file(path: &Path, workers: Option<usize>) -> Result<Table, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let entries = parse_suite(&text, base)?;
    let rows = entries
        .iter()
        .map(|e| run_entry(e, workers))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Table { rows })
}
