use crate::error::{Error, Result};
use crate::instance::TreeInstance;

/// Largest terminal count the oracle accepts.
pub const BRUTE_FORCE_MAX_TERMINALS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceResult {
    pub tour_count: usize,
    /// Terminal sets (dense indices) of one optimal solution.
    pub tours: Vec<Vec<usize>>,
}

/// Minimum number of tours over all set partitions of the terminals, each block charged twice the
/// weight of the subtree spanning the depot and the block. `Ok(None)` when some terminal cannot be
/// reached within the bound.
pub fn brute_force_opt(inst: &impl TreeInstance) -> Result<Option<BruteForceResult>> {
    let terms = inst.terminals();
    let n = terms.len();
    if n > BRUTE_FORCE_MAX_TERMINALS {
        return Err(Error::InvalidArgument(format!(
            "brute force is limited to {BRUTE_FORCE_MAX_TERMINALS} terminals, got {n}"
        )));
    }
    let tree = inst.tree();
    let bound = inst.distance_bound();
    let full = (1usize << n) - 1;
    let feasible: Vec<bool> = (0..=full)
        .map(|mask| tree.closed_walk_length((0..n).filter(|i| mask >> i & 1 == 1).map(|i| terms[i])) <= bound)
        .collect();

    // best[mask] = fewest feasible blocks partitioning mask, with the block holding the lowest bit
    const UNREACHABLE: usize = usize::MAX;
    let mut best = vec![UNREACHABLE; full + 1];
    let mut pick = vec![0usize; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let block = sub | low;
            if feasible[block] && best[mask ^ block] != UNREACHABLE && best[mask ^ block] + 1 < best[mask] {
                best[mask] = best[mask ^ block] + 1;
                pick[mask] = block;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    if best[full] == UNREACHABLE {
        return Ok(None);
    }
    let mut tours = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let block = pick[mask];
        tours.push((0..n).filter(|i| block >> i & 1 == 1).map(|i| terms[i]).collect());
        mask ^= block;
    }
    Ok(Some(BruteForceResult {
        tour_count: best[full],
        tours,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{EdgeSpec, RoutingInstance};

    fn single(weight: u64, bound: u64) -> RoutingInstance {
        RoutingInstance::new(bound, 0, &[EdgeSpec::new(1, 0, weight)], &[1]).unwrap()
    }

    #[test]
    fn single_terminal_boundary() {
        assert_eq!(brute_force_opt(&single(5, 10)).unwrap().unwrap().tour_count, 1);
        assert_eq!(brute_force_opt(&single(5, 9)).unwrap(), None);
    }

    #[test]
    fn star_split() {
        let edges = [EdgeSpec::new(1, 0, 3), EdgeSpec::new(2, 0, 4)];
        let tight = RoutingInstance::new(14, 0, &edges, &[1, 2]).unwrap();
        assert_eq!(brute_force_opt(&tight).unwrap().unwrap().tour_count, 1);
        let split = RoutingInstance::new(13, 0, &edges, &[1, 2]).unwrap();
        let res = brute_force_opt(&split).unwrap().unwrap();
        assert_eq!(res.tour_count, 2);
        assert_eq!(res.tours.len(), 2);
    }

    #[test]
    fn no_terminals() {
        let inst = RoutingInstance::new(3, 0, &[], &[]).unwrap();
        assert_eq!(brute_force_opt(&inst).unwrap().unwrap().tour_count, 0);
    }

    #[test]
    fn refuses_large_inputs() {
        let edges: Vec<EdgeSpec> = (1..=13).map(|i| EdgeSpec::new(i, 0, 1)).collect();
        let ids: Vec<u64> = (1..=13).collect();
        let inst = RoutingInstance::new(10, 0, &edges, &ids).unwrap();
        assert!(brute_force_opt(&inst).is_err());
    }
}
