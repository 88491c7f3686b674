use std::collections::HashMap;

use super::profile::{dominates_equal_length, enumerate_merges, subsumes, Part, NONE};
use crate::instance::{NormalizedInstance, TreeInstance};

/// How aggressively dominated profiles are discarded after each merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pruning {
    /// Keep every valid profile.
    None,
    /// Drop a profile when another one of the same length is elementwise no larger.
    EqualLength,
    /// Drop a profile when a profile with no more entries maps injectively onto entries at least
    /// as large. Implies `EqualLength`.
    #[default]
    Subsumption,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DpOptions {
    pub pruning: Pruning,
    /// Keep backpointers so that tours can be reconstructed.
    pub track_origins: bool,
}

#[derive(Debug, Clone)]
pub(crate) enum Origin {
    Untracked,
    Leaf,
    Empty,
    Merge { left: u32, right: u32, parts: Box<[Part]> },
}

#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub lengths: Vec<u64>,
    pub origin: Origin,
}

/// Valid profiles at one vertex, sorted by length then lexicographically.
#[derive(Debug, Clone, Default)]
pub(crate) struct ProfileList {
    pub entries: Vec<Entry>,
}

impl ProfileList {
    /// Fewest subtours among the stored profiles.
    pub fn min_len(&self) -> Option<usize> {
        self.entries.first().map(|e| e.lengths.len())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// The single empty profile of a subtree without terminals.
    pub fn empty_subtree() -> Self {
        ProfileList {
            entries: vec![Entry {
                lengths: Vec::new(),
                origin: Origin::Empty,
            }],
        }
    }

    pub fn terminal_leaf(gamma: usize, opts: DpOptions) -> Self {
        let top = match opts.pruning {
            Pruning::Subsumption => gamma.min(1),
            _ => gamma,
        };
        ProfileList {
            entries: (1..=top)
                .map(|k| Entry {
                    lengths: vec![0; k],
                    origin: Origin::Leaf,
                })
                .collect(),
        }
    }

    pub fn merge(left: &Self, right: &Self, w1: u64, w2: u64, gamma: usize, cap: u64, opts: DpOptions) -> Self {
        let mut found: HashMap<Vec<u64>, Origin> = HashMap::new();
        for (li, a) in left.entries.iter().enumerate() {
            for (ri, b) in right.entries.iter().enumerate() {
                enumerate_merges(&a.lengths, &b.lengths, w1, w2, gamma, cap, |lengths, parts| {
                    if !found.contains_key(lengths) {
                        let origin = if opts.track_origins {
                            Origin::Merge {
                                left: li as u32,
                                right: ri as u32,
                                parts: parts.into(),
                            }
                        } else {
                            Origin::Untracked
                        };
                        found.insert(lengths.to_vec(), origin);
                    }
                });
            }
        }
        let mut entries: Vec<Entry> = found
            .into_iter()
            .map(|(lengths, origin)| Entry { lengths, origin })
            .collect();
        entries.sort_unstable_by(|x, y| (x.lengths.len(), &x.lengths).cmp(&(y.lengths.len(), &y.lengths)));
        ProfileList {
            entries: prune(entries, opts.pruning),
        }
    }
}

fn prune(entries: Vec<Entry>, mode: Pruning) -> Vec<Entry> {
    if mode == Pruning::None || entries.len() < 2 {
        return entries;
    }
    // Candidates arrive ordered by (length, lengths); a dominator always has no more entries and
    // no larger sum, so it has already been kept when the candidate is examined.
    let mut order: Vec<(usize, u64)> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| (i, e.lengths.iter().sum()))
        .collect();
    order.sort_unstable_by_key(|&(i, s)| (entries[i].lengths.len(), s, i));
    let mut kept: Vec<usize> = Vec::new();
    let mut keep = vec![false; entries.len()];
    for &(i, _) in &order {
        let cand = &entries[i].lengths;
        let dominated = kept.iter().any(|&k| {
            let other = &entries[k].lengths;
            match mode {
                Pruning::EqualLength => dominates_equal_length(other, cand),
                Pruning::Subsumption => subsumes(other, cand),
                Pruning::None => false,
            }
        });
        if !dominated {
            kept.push(i);
            keep[i] = true;
        }
    }
    entries
        .into_iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(e))
        .collect()
}

/// Profiles of every vertex `v` for the instance `(T(v), D - 2 depth(v))` restricted to at most
/// `gamma` subtours. A subtour at `v` never needs to exceed `D - 2 depth(v)`, so that is the cap
/// used at every vertex.
#[derive(Debug, Clone)]
pub(crate) struct ProfileTable {
    pub lists: Vec<ProfileList>,
    pub gamma: usize,
    pub opts: DpOptions,
}

pub(crate) fn vertex_cap(inst: &NormalizedInstance, v: usize) -> Option<u64> {
    inst.distance_bound().checked_sub(inst.tree().depth(v).checked_mul(2)?)
}

impl ProfileTable {
    pub fn build(inst: &NormalizedInstance, gamma: usize, opts: DpOptions) -> Self {
        let t = inst.tree();
        let mut lists: Vec<ProfileList> = vec![ProfileList::default(); t.len()];
        for v in t.postorder() {
            let kids = t.children(v);
            lists[v] = match kids {
                [] if inst.is_terminal(v) => ProfileList::terminal_leaf(gamma, opts),
                [] => ProfileList::empty_subtree(),
                [l, r] => match vertex_cap(inst, v) {
                    Some(cap) => ProfileList::merge(&lists[*l], &lists[*r], t.weight(*l), t.weight(*r), gamma, cap, opts),
                    None => ProfileList::default(),
                },
                _ => panic!("normalized instance has a vertex with {} children", kids.len()),
            };
        }
        ProfileTable { lists, gamma, opts }
    }

    /// Minimum tour count for the sub-instance rooted at `v`, if it is at most `gamma`.
    pub fn min_tours(&self, v: usize) -> Option<usize> {
        self.lists[v].min_len()
    }

    /// Terminal sets of an optimal solution at the root. Requires tracked origins.
    pub fn reconstruct(&self, inst: &NormalizedInstance) -> Option<Vec<Vec<usize>>> {
        let t = inst.tree();
        let root = t.root();
        let best = self.lists[root].entries.first()?;
        let mut tours: Vec<Vec<usize>> = vec![Vec::new(); best.lengths.len()];
        let mut stack: Vec<(usize, usize, Vec<usize>)> = vec![(root, 0, (0..best.lengths.len()).collect())];
        while let Some((v, idx, ids)) = stack.pop() {
            let entry = &self.lists[v].entries[idx];
            match &entry.origin {
                Origin::Leaf => {
                    for &id in &ids {
                        tours[id].push(v);
                    }
                }
                Origin::Empty => {}
                Origin::Untracked => return None,
                Origin::Merge { left, right, parts } => {
                    let (l, r) = (t.children(v)[0], t.children(v)[1]);
                    let lsize = self.lists[l].entries[*left as usize].lengths.len();
                    let rsize = self.lists[r].entries[*right as usize].lengths.len();
                    let mut lids = vec![usize::MAX; lsize];
                    let mut rids = vec![usize::MAX; rsize];
                    for (k, p) in parts.iter().enumerate() {
                        if p.left != NONE {
                            lids[p.left as usize] = ids[k];
                        }
                        if p.right != NONE {
                            rids[p.right as usize] = ids[k];
                        }
                    }
                    stack.push((l, *left as usize, lids));
                    stack.push((r, *right as usize, rids));
                }
            }
        }
        for tour in &mut tours {
            tour.sort_unstable();
            tour.dedup();
        }
        Some(tours)
    }
}

/// `min { |S| : S feasible, |S| <= gamma }`, or `None` when no such solution exists.
pub fn solve_bounded(inst: &NormalizedInstance, gamma: usize) -> Option<usize> {
    solve_bounded_with(inst, gamma, DpOptions::default())
}

pub fn solve_bounded_with(inst: &NormalizedInstance, gamma: usize, opts: DpOptions) -> Option<usize> {
    ProfileTable::build(inst, gamma, opts).min_tours(inst.tree().root())
}

/// An optimal solution with at most `gamma` tours, as terminal sets (normalized indices).
pub fn solve_with_tours(inst: &NormalizedInstance, gamma: usize) -> Option<Vec<Vec<usize>>> {
    let opts = DpOptions {
        track_origins: true,
        ..DpOptions::default()
    };
    ProfileTable::build(inst, gamma, opts).reconstruct(inst)
}

/// Number of stored profiles per vertex; used by tests to check the state-space bound.
pub fn profile_counts(inst: &NormalizedInstance, gamma: usize, opts: DpOptions) -> Vec<usize> {
    ProfileTable::build(inst, gamma, opts)
        .lists
        .iter()
        .map(ProfileList::len)
        .collect()
}

/// All stored profiles at every vertex.
pub fn stored_profiles(inst: &NormalizedInstance, gamma: usize, opts: DpOptions) -> Vec<Vec<Vec<u64>>> {
    ProfileTable::build(inst, gamma, opts)
        .lists
        .into_iter()
        .map(|l| l.entries.into_iter().map(|e| e.lengths).collect())
        .collect()
}
