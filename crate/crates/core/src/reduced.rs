//! Subtours of a tour inside the components of a decomposition, their reduced lengths, and the
//! merge of several subtours of one component into a single depot tour.
//!
//! A subtour is stored as the set of component terminals it visits. Its length is twice the
//! weight of the smallest subtree of the component that joins `r_c` to those terminals, and to
//! `e_c` as well when the subtour is passing.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::decomposition::{Component, ComponentKind, Decomposition};
use crate::error::{Error, Result};
use crate::instance::{NormalizedInstance, TreeInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Ending,
    Passing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subtour {
    pub component: usize,
    pub category: Category,
    pub length: u64,
    /// Component terminals visited, ascending.
    pub terminals: Vec<usize>,
}

impl Subtour {
    /// Builds the subtour of `component` through `terminals`, computing its length.
    pub fn new(
        inst: &NormalizedInstance,
        dec: &Decomposition,
        component: usize,
        category: Category,
        mut terminals: Vec<usize>,
    ) -> Result<Self> {
        let c = dec
            .components
            .get(component)
            .ok_or_else(|| Error::InvalidArgument(format!("no component {component}")))?;
        if category == Category::Passing && c.kind != ComponentKind::Internal {
            return Err(Error::Contract(format!("leaf component {component} has no passing subtours")));
        }
        if let Some(&t) = terminals.iter().find(|&&t| c.terminals.binary_search(&t).is_err()) {
            return Err(Error::Contract(format!("terminal {t} is not in component {component}")));
        }
        terminals.sort_unstable();
        terminals.dedup();
        let length = subtour_length(inst, c, category, &terminals);
        Ok(Subtour {
            component,
            category,
            length,
            terminals,
        })
    }
}

fn subtour_length(inst: &NormalizedInstance, c: &Component, category: Category, terminals: &[usize]) -> u64 {
    let through_exit = match category {
        Category::Passing => c.exit,
        Category::Ending => None,
    };
    2 * inst
        .tree()
        .spanning_weight(c.root, terminals.iter().copied().chain(through_exit))
}

/// The fraction of the budget left after reaching the component that a subtour uses:
/// `len / (D - 2 dist(r, r_c))` when ending, `(len - 2 dist(r_c, e_c)) / (D - 2 dist(r, e_c))`
/// when passing. `0/0` counts as zero.
pub fn reduced_length(inst: &NormalizedInstance, dec: &Decomposition, s: &Subtour) -> Result<BigRational> {
    let t = inst.tree();
    let c = &dec.components[s.component];
    let (num, anchor) = match s.category {
        Category::Ending => (s.length, c.root),
        Category::Passing => {
            let exit = c
                .exit
                .ok_or_else(|| Error::Contract("passing subtour in a leaf component".into()))?;
            let through = 2 * t.dist(c.root, exit);
            let num = s
                .length
                .checked_sub(through)
                .ok_or_else(|| Error::Contract("passing subtour shorter than the path to the exit".into()))?;
            (num, exit)
        }
    };
    let den = inst.distance_bound().saturating_sub(2 * t.depth(anchor));
    match (num, den) {
        (0, _) => Ok(BigRational::zero()),
        (_, 0) => Err(Error::Contract(format!(
            "subtour in component {} cannot be part of any tour within D",
            s.component
        ))),
        _ => Ok(BigRational::new(num.into(), den.into())),
    }
}

/// Splits a tour, given by the terminals it serves, into one subtour per component it visits
/// terminals in. A subtour is passing when the tour also serves a terminal below the exit.
pub fn split_tour(inst: &NormalizedInstance, dec: &Decomposition, tour: &[usize]) -> Result<Vec<Subtour>> {
    let t = inst.tree();
    let mut out = Vec::new();
    for (ci, c) in dec.components.iter().enumerate() {
        let mine: Vec<usize> = tour
            .iter()
            .copied()
            .filter(|v| c.terminals.binary_search(v).is_ok())
            .collect();
        if mine.is_empty() {
            continue;
        }
        let passing = c.exit.is_some_and(|x| tour.iter().any(|&v| t.is_ancestor(x, v)));
        let category = if passing { Category::Passing } else { Category::Ending };
        out.push(Subtour::new(inst, dec, ci, category, mine)?);
    }
    Ok(out)
}

/// Sum of the reduced lengths of a feasible tour's subtours; never above one.
pub fn tour_reduced_sum(inst: &NormalizedInstance, dec: &Decomposition, tour: &[usize]) -> Result<BigRational> {
    let length = inst.tree().closed_walk_length(tour.iter().copied());
    if length > inst.distance_bound() {
        return Err(Error::Contract(format!(
            "tour length {length} exceeds D = {}",
            inst.distance_bound()
        )));
    }
    let mut sum = BigRational::zero();
    for s in split_tour(inst, dec, tour)? {
        sum += reduced_length(inst, dec, &s)?;
    }
    Ok(sum)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedTour {
    pub terminals: Vec<usize>,
    /// Length of the walk that goes to `r_c` (or `e_c`), runs every subtour and returns.
    pub length: u64,
}

/// One depot tour serving all the subtours of a single component and category whose reduced
/// lengths sum to at most one.
///
/// Ending subtours are chained at `r_c`: `2 dist(r, r_c) + sum len`. Passing subtours are chained
/// at `e_c` with their detours: `2 dist(r, e_c) + sum (len - 2 dist(r_c, e_c))`.
pub fn combine_subtours(inst: &NormalizedInstance, dec: &Decomposition, subtours: &[Subtour]) -> Result<CombinedTour> {
    let first = subtours
        .first()
        .ok_or_else(|| Error::Contract("no subtours to combine".into()))?;
    if subtours
        .iter()
        .any(|s| s.component != first.component || s.category != first.category)
    {
        return Err(Error::Contract("subtours from different components or categories".into()));
    }
    let mut sum = BigRational::zero();
    for s in subtours {
        sum += reduced_length(inst, dec, s)?;
    }
    if sum > BigRational::one() {
        return Err(Error::Contract(format!("reduced lengths sum to {sum} > 1")));
    }
    let t = inst.tree();
    let c = &dec.components[first.component];
    let length = match first.category {
        Category::Ending => 2 * t.depth(c.root) + subtours.iter().map(|s| s.length).sum::<u64>(),
        Category::Passing => {
            let exit = c.exit.expect("passing implies internal");
            let through = 2 * t.dist(c.root, exit);
            2 * t.depth(exit) + subtours.iter().map(|s| s.length - through).sum::<u64>()
        }
    };
    let mut terminals: Vec<usize> = subtours.iter().flat_map(|s| s.terminals.iter().copied()).collect();
    terminals.sort_unstable();
    terminals.dedup();
    Ok(CombinedTour { terminals, length })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::decompose;
    use crate::instance::{normalize, EdgeSpec, RoutingInstance};
    use crate::rational::ratio;

    fn star(bound: u64, weights: &[u64]) -> NormalizedInstance {
        let edges: Vec<EdgeSpec> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| EdgeSpec::new(i as u64 + 1, 0, w))
            .collect();
        let terms: Vec<u64> = (1..=weights.len() as u64).collect();
        normalize(&RoutingInstance::new(bound, 0, &edges, &terms).unwrap()).unwrap()
    }

    #[test]
    fn single_component_tight_tour() {
        let inst = star(14, &[3, 4]);
        let dec = decompose(&inst, 2).unwrap();
        let tour = inst.terminals().to_vec();
        assert_eq!(tour_reduced_sum(&inst, &dec, &tour).unwrap(), ratio(1, 1));
        let parts = split_tour(&inst, &dec, &tour).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].length, 14);
        let combined = combine_subtours(&inst, &dec, &parts).unwrap();
        assert_eq!(combined.length, 14);
    }

    #[test]
    fn halves_combine_to_d() {
        let inst = star(12, &[3, 3]);
        let dec = decompose(&inst, 2).unwrap();
        let subs: Vec<Subtour> = inst
            .terminals()
            .iter()
            .map(|&t| Subtour::new(&inst, &dec, 0, Category::Ending, vec![t]).unwrap())
            .collect();
        for s in &subs {
            assert_eq!(reduced_length(&inst, &dec, s).unwrap(), ratio(1, 2));
        }
        assert_eq!(combine_subtours(&inst, &dec, &subs).unwrap().length, 12);
    }

    #[test]
    fn zero_length_subtour() {
        let inst = star(10, &[0, 5]);
        let dec = decompose(&inst, 2).unwrap();
        let t0 = inst.terminals().iter().copied().find(|&t| inst.tree().depth(t) == 0).unwrap();
        let s = Subtour::new(&inst, &dec, 0, Category::Ending, vec![t0]).unwrap();
        assert_eq!(s.length, 0);
        assert_eq!(reduced_length(&inst, &dec, &s).unwrap(), ratio(0, 1));
    }

    #[test]
    fn contract_checks() {
        let inst = star(12, &[3, 3]);
        let dec = decompose(&inst, 2).unwrap();
        assert!(combine_subtours(&inst, &dec, &[]).is_err());
        assert!(Subtour::new(&inst, &dec, 0, Category::Passing, vec![]).is_err());
        let heavy = star(12, &[5, 5, 5]);
        let dec = decompose(&heavy, 3).unwrap();
        let subs: Vec<Subtour> = heavy
            .terminals()
            .iter()
            .map(|&t| Subtour::new(&heavy, &dec, 0, Category::Ending, vec![t]).unwrap())
            .collect();
        assert!(matches!(combine_subtours(&heavy, &dec, &subs), Err(Error::Contract(_))));
        let all = heavy.terminals().to_vec();
        assert!(tour_reduced_sum(&heavy, &dec, &all).is_err());
    }
}
