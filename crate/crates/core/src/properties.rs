//! Randomized checks of the inequalities behind the approximation guarantee, runnable from tests
//! and from the command line.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::decomposition::{decompose, random_decomposition, ComponentKind, Decomposition};
use crate::error::{Error, Result};
use crate::exact::brute_force_opt;
use crate::generators::{gen_random_from, random_feasible_tour, DistancePolicy, Stream};
use crate::instance::{normalize, NormalizedInstance, TreeInstance};
use crate::reduced::{combine_subtours, reduced_length, tour_reduced_sum, Category, Subtour};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    /// A feasible tour's reduced lengths sum to at most one.
    ReducedSum,
    /// Subtours of one component and category with reduced sum at most one merge into a tour
    /// within `D`.
    Combine,
    /// With `gamma >= 20` a decomposition has at most `15 opt / gamma` components.
    ComponentCount,
}

impl Property {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "3.2" | "reduced-sum" => Ok(Property::ReducedSum),
            "3.3" | "combine" => Ok(Property::Combine),
            "3.4" | "component-count" => Ok(Property::ComponentCount),
            other => Err(Error::InvalidArgument(format!("unknown property `{other}`, expected 3.2, 3.3 or 3.4"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Property::ReducedSum => "3.2",
            Property::Combine => "3.3",
            Property::ComponentCount => "3.4",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub property: Property,
    pub trials: usize,
    pub passed: usize,
    /// Description of each failing trial.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "OK" } else { "FAIL" };
        write!(f, "{status} {}/{}", self.passed, self.trials)
    }
}

pub fn run_suite(property: Property, trials: usize, seed: u64) -> SuiteReport {
    let mut rng = Stream::new(seed);
    let mut failures = Vec::new();
    let mut passed = 0;
    for trial in 0..trials {
        let outcome = match property {
            Property::ReducedSum => reduced_sum_trial(&mut rng),
            Property::Combine => combine_trial(&mut rng),
            Property::ComponentCount => component_count_trial(&mut rng),
        };
        match outcome {
            Ok(None) => passed += 1,
            Ok(Some(msg)) => failures.push(format!("trial {trial}: {msg}")),
            Err(e) => failures.push(format!("trial {trial}: {e}")),
        }
    }
    SuiteReport {
        property,
        trials,
        passed,
        failures,
    }
}

fn small_instance(rng: &mut Stream, max_terminals: u64) -> Result<NormalizedInstance> {
    let n = rng.between(1, max_terminals) as usize;
    let max_weight = rng.between(1, 8);
    normalize(&gen_random_from(rng, n, max_weight, DistancePolicy::default())?)
}

fn some_decomposition(inst: &NormalizedInstance, rng: &mut Stream) -> Result<Decomposition> {
    if rng.chance(1, 3) {
        decompose(inst, rng.between(1, 3) as usize)
    } else {
        random_decomposition(inst, rng)
    }
}

fn reduced_sum_trial(rng: &mut Stream) -> Result<Option<String>> {
    let inst = small_instance(rng, 8)?;
    let dec = some_decomposition(&inst, rng)?;
    let tour = random_feasible_tour(&inst, rng);
    let sum = tour_reduced_sum(&inst, &dec, &tour)?;
    Ok((sum > BigRational::one()).then(|| format!("tour {tour:?} has reduced sum {sum}")))
}

fn combine_trial(rng: &mut Stream) -> Result<Option<String>> {
    loop {
        let inst = small_instance(rng, 8)?;
        let dec = random_decomposition(&inst, rng)?;
        let candidates: Vec<usize> = (0..dec.len()).filter(|&i| !dec.components[i].terminals.is_empty()).collect();
        let ci = candidates[rng.index(candidates.len())];
        let comp = &dec.components[ci];
        let category = if comp.kind == ComponentKind::Internal && rng.chance(1, 2) {
            Category::Passing
        } else {
            Category::Ending
        };
        let mut bundle: Vec<Subtour> = Vec::new();
        let mut sum = BigRational::zero();
        let attempts = rng.between(1, 5);
        for _ in 0..attempts {
            let mut pick: Vec<usize> = comp.terminals.iter().copied().filter(|_| rng.chance(1, 2)).collect();
            if pick.is_empty() {
                pick.push(comp.terminals[rng.index(comp.terminals.len())]);
            }
            let s = Subtour::new(&inst, &dec, ci, category, pick)?;
            let Ok(r) = reduced_length(&inst, &dec, &s) else {
                continue;
            };
            if &sum + &r <= BigRational::one() {
                sum += r;
                bundle.push(s);
            }
        }
        if bundle.is_empty() {
            continue;
        }
        let combined = combine_subtours(&inst, &dec, &bundle)?;
        let walk = inst.tree().closed_walk_length(combined.terminals.iter().copied());
        if combined.length > inst.distance_bound() {
            return Ok(Some(format!(
                "combined length {} > D = {}",
                combined.length,
                inst.distance_bound()
            )));
        }
        if walk > combined.length {
            return Ok(Some(format!("closed walk {walk} longer than the construction {}", combined.length)));
        }
        return Ok(None);
    }
}

fn component_count_trial(rng: &mut Stream) -> Result<Option<String>> {
    let inst = small_instance(rng, 8)?;
    let gamma = rng.between(20, 30) as usize;
    let dec = decompose(&inst, gamma)?;
    let opt = brute_force_opt(&inst)?
        .ok_or_else(|| Error::Internal("generated instance is infeasible".into()))?
        .tour_count;
    let ok = gamma * dec.len() <= 15 * opt;
    Ok((!ok).then(|| format!("{} components, opt = {opt}, gamma = {gamma}", dec.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_names() {
        for l in [Property::ReducedSum, Property::Combine, Property::ComponentCount] {
            assert_eq!(Property::parse(l.name()).unwrap(), l);
        }
        assert!(Property::parse("2.2").is_err());
    }

    #[test]
    fn short_suites_are_deterministic() {
        let a = run_suite(Property::ReducedSum, 30, 5);
        let b = run_suite(Property::ReducedSum, 30, 5);
        assert_eq!(a, b);
        assert!(a.ok(), "{:?}", a.failures);
        assert_eq!(a.to_string(), "OK 30/30");
        assert!(run_suite(Property::Combine, 30, 5).ok());
    }
}
