//! The component-based approximation: decompose with `gamma = ceil(1/eps^2)`, solve every
//! component exactly, and add up the tour counts.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::decomposition::{component_local_instance, decompose, ComponentKind, Decomposition};
use crate::error::{Error, Result};
use crate::exact::{solve_bounded, solve_with_tours};
use crate::instance::{normalize, NormalizedInstance, RoutingInstance, TreeInstance, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxConfig {
    /// Accuracy parameter; must lie in `(0, 1/sqrt(20)]`.
    pub epsilon: BigRational,
    /// Replaces `ceil(1/eps^2)` as the per-component tour budget.
    pub gamma_override: Option<usize>,
    /// Reconstruct the tours, not just their number.
    pub materialize_tours: bool,
    /// Size of the worker pool for component solves; the global pool when `None`.
    pub workers: Option<usize>,
    /// Refuse instances whose [`state_space_estimate`] is larger. Unlimited when `None`.
    pub state_budget: Option<u128>,
}

impl ApproxConfig {
    pub fn new(epsilon: BigRational) -> Self {
        ApproxConfig {
            epsilon,
            gamma_override: None,
            materialize_tours: false,
            workers: None,
            state_budget: None,
        }
    }

    pub fn with_gamma(mut self, gamma: usize) -> Self {
        self.gamma_override = Some(gamma);
        self
    }

    pub fn with_tours(mut self) -> Self {
        self.materialize_tours = true;
        self
    }

    pub fn gamma(&self) -> Result<usize> {
        let derived = gamma_for_epsilon(&self.epsilon)?;
        match self.gamma_override {
            Some(0) => Err(Error::InvalidArgument("gamma must be at least 1".into())),
            Some(g) => Ok(g),
            None => Ok(derived),
        }
    }
}

/// `n (2 gamma)^gamma D^(3 gamma)`: a coarse a-priori size of the exact solver's state space.
pub fn state_space_estimate(vertices: usize, gamma: usize, bound: u64) -> BigUint {
    let g = u32::try_from(gamma).unwrap_or(u32::MAX);
    BigUint::from(vertices) * BigUint::from(2 * gamma).pow(g) * BigUint::from(bound).pow(g.saturating_mul(3))
}

/// `ceil(1/eps^2)`, after checking `0 < eps` and `eps^2 <= 1/20`.
pub fn gamma_for_epsilon(epsilon: &BigRational) -> Result<usize> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let p = epsilon.numer();
    let q = epsilon.denom();
    if BigInt::from(20) * p * p > q * q {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {epsilon} is above 1/sqrt(20), which would give gamma < 20"
        )));
    }
    let (quot, rem) = (q * q).div_rem(&(p * p));
    let gamma = if rem.is_zero() { quot } else { quot + 1 };
    usize::try_from(gamma).map_err(|_| Error::Overflow("gamma".into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub index: usize,
    pub kind: ComponentKind,
    /// Original id of the component root and exit.
    pub root: VertexId,
    pub exit: Option<VertexId>,
    pub edge_count: usize,
    pub terminal_count: usize,
    pub is_big: bool,
    pub tours: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxReport {
    pub total_tours: usize,
    pub gamma_used: usize,
    pub per_component: Vec<ComponentReport>,
    /// Terminal ids per tour, when requested.
    pub tours: Option<Vec<Vec<VertexId>>>,
    /// Notes from the decomposition about components outside its guarantees.
    pub flags: Vec<String>,
    pub timings: Vec<(&'static str, Duration)>,
}

impl ApproxReport {
    /// `total <n>` followed by one `component <idx> <kind> <tours>` line per component.
    pub fn summary(&self) -> String {
        let mut s = format!("total {}\n", self.total_tours);
        for c in &self.per_component {
            s.push_str(&format!("component {} {} {}\n", c.index, c.kind.as_str(), c.tours));
        }
        s
    }
}

pub fn approx_solve(inst: &RoutingInstance, cfg: &ApproxConfig) -> Result<ApproxReport> {
    let gamma = cfg.gamma()?;
    let mut timings = Vec::new();

    let start = Instant::now();
    let norm = normalize(inst)?;
    timings.push(("normalize", start.elapsed()));

    if let Some(budget) = cfg.state_budget {
        let estimate = state_space_estimate(norm.vertex_count(), gamma, norm.distance_bound());
        if estimate > BigUint::from(budget) {
            return Err(Error::BudgetExceeded {
                estimate: estimate.to_string(),
                budget,
            });
        }
    }

    let start = Instant::now();
    let dec = decompose(&norm, gamma)?;
    timings.push(("decompose", start.elapsed()));

    let start = Instant::now();
    let solved = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Internal(format!("worker pool: {e}")))?
            .install(|| solve_components(&norm, &dec, gamma, cfg.materialize_tours)),
        None => solve_components(&norm, &dec, gamma, cfg.materialize_tours),
    }?;
    timings.push(("solve", start.elapsed()));

    let original = |v: usize| norm.original_id(v);
    let mut per_component = Vec::with_capacity(dec.len());
    let mut all_tours: Vec<Vec<VertexId>> = Vec::new();
    for (i, (c, (count, tours))) in dec.components.iter().zip(solved).enumerate() {
        per_component.push(ComponentReport {
            index: i,
            kind: c.kind,
            root: original(c.root),
            exit: c.exit.map(original),
            edge_count: c.edges.len(),
            terminal_count: c.terminals.len(),
            is_big: c.is_big,
            tours: count,
        });
        if let Some(ts) = tours {
            all_tours.extend(ts);
        }
    }
    let total_tours = per_component.iter().map(|c| c.tours).sum();
    Ok(ApproxReport {
        total_tours,
        gamma_used: gamma,
        per_component,
        tours: cfg.materialize_tours.then_some(all_tours),
        flags: dec.flags.clone(),
        timings,
    })
}

type Solved = (usize, Option<Vec<Vec<VertexId>>>);

fn solve_components(norm: &NormalizedInstance, dec: &Decomposition, gamma: usize, tours: bool) -> Result<Vec<Solved>> {
    dec.components
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let local = component_local_instance(norm, c)?;
            let missing = || Error::Internal(format!("component {i} needs more than {gamma} tours"));
            if !tours {
                return Ok((solve_bounded(&local, gamma).ok_or_else(missing)?, None));
            }
            let sets = solve_with_tours(&local, gamma).ok_or_else(missing)?;
            // local ids are indices of `norm`; map them on to the caller's ids
            let mapped: Vec<Vec<VertexId>> = sets
                .iter()
                .map(|set| {
                    let mut ids: Vec<VertexId> = set
                        .iter()
                        .map(|&v| norm.original_id(local.original_id(v) as usize))
                        .collect();
                    ids.sort_unstable();
                    ids.dedup();
                    ids
                })
                .collect();
            Ok((mapped.len(), Some(mapped)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownVertex { tour: usize, id: VertexId },
    UncoveredTerminal(VertexId),
    LengthExceedsD { tour: usize, length: u64, bound: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownVertex { tour, id } => write!(f, "tour {tour}: unknown vertex {id}"),
            Violation::UncoveredTerminal(id) => write!(f, "uncovered terminal {id}"),
            Violation::LengthExceedsD { tour, length, bound } => {
                write!(f, "tour {tour}: length exceeds D ({length} > {bound})")
            }
        }
    }
}

/// Every way in which `tours` fails to be a solution: unknown vertices, terminals left uncovered,
/// and tours whose shortest closed walk from the depot is longer than `D`.
pub fn verify_solution(inst: &RoutingInstance, tours: &[Vec<VertexId>]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut covered = vec![false; inst.vertex_count()];
    for (i, tour) in tours.iter().enumerate() {
        let mut idx = Vec::with_capacity(tour.len());
        for &id in tour {
            match inst.vertex_index(id) {
                Some(v) => idx.push(v),
                None => out.push(Violation::UnknownVertex { tour: i, id }),
            }
        }
        for &v in &idx {
            covered[v] = true;
        }
        let length = inst.tree().closed_walk_length(idx);
        if length > inst.distance_bound() {
            out.push(Violation::LengthExceedsD {
                tour: i,
                length,
                bound: inst.distance_bound(),
            });
        }
    }
    for &t in inst.terminals() {
        if !covered[t] {
            out.push(Violation::UncoveredTerminal(inst.original_id(t)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::EdgeSpec;
    use crate::rational::ratio;

    fn star(bound: u64) -> RoutingInstance {
        RoutingInstance::new(bound, 0, &[EdgeSpec::new(1, 0, 3), EdgeSpec::new(2, 0, 4)], &[1, 2]).unwrap()
    }

    #[test]
    fn gamma_from_epsilon() {
        assert_eq!(gamma_for_epsilon(&ratio(1, 5)).unwrap(), 25);
        assert_eq!(gamma_for_epsilon(&ratio(2, 9)).unwrap(), 21);
        assert_eq!(gamma_for_epsilon(&ratio(1, 20)).unwrap(), 400);
        assert!(gamma_for_epsilon(&ratio(1, 4)).is_err());
        assert!(gamma_for_epsilon(&ratio(0, 1)).is_err());
        assert!(ApproxConfig::new(ratio(1, 5)).with_gamma(0).gamma().is_err());
    }

    #[test]
    fn solves_star() {
        let cfg = ApproxConfig::new(ratio(1, 5)).with_tours();
        let report = approx_solve(&star(13), &cfg).unwrap();
        assert_eq!(report.total_tours, 2);
        assert_eq!(report.gamma_used, 25);
        assert_eq!(report.summary(), "total 2\ncomponent 0 leaf 2\n");
        let tours = report.tours.unwrap();
        assert!(verify_solution(&star(13), &tours).is_empty());
    }

    #[test]
    fn budget_guard() {
        assert_eq!(state_space_estimate(3, 1, 13), BigUint::from(3u32 * 2 * 13 * 13 * 13));
        let mut cfg = ApproxConfig::new(ratio(1, 5)).with_gamma(1);
        cfg.state_budget = Some(100);
        assert!(matches!(approx_solve(&star(13), &cfg), Err(Error::BudgetExceeded { .. })));
        cfg.state_budget = Some(1 << 20);
        assert!(approx_solve(&star(13), &cfg).is_ok());
    }

    #[test]
    fn empty_terminal_set() {
        let inst = RoutingInstance::new(5, 0, &[EdgeSpec::new(1, 0, 1)], &[]).unwrap();
        let report = approx_solve(&inst, &ApproxConfig::new(ratio(1, 5))).unwrap();
        assert_eq!(report.total_tours, 0);
        assert!(report.per_component.is_empty());
    }

    #[test]
    fn verify_reports_violations() {
        let inst = star(13);
        assert_eq!(
            verify_solution(&inst, &[vec![1, 2]]),
            [Violation::LengthExceedsD {
                tour: 0,
                length: 14,
                bound: 13
            }]
        );
        let v = verify_solution(&inst, &[vec![1]]);
        assert_eq!(v, [Violation::UncoveredTerminal(2)]);
        assert_eq!(v[0].to_string(), "uncovered terminal 2");
        assert_eq!(
            verify_solution(&inst, &[vec![1], vec![2, 9]]),
            [Violation::UnknownVertex { tour: 1, id: 9 }]
        );
    }
}
