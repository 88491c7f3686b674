//! Tour-length profiles and the child-merging rule of the bounded-tour dynamic program.
//!
//! A profile at vertex `v` is the multiset of lengths of subtours that start and end at `v` and
//! together cover every terminal below `v`. Profiles are kept sorted, so two lists that differ
//! only in order are the same state.

use std::collections::BTreeSet;

/// Sorted list of subtour lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TourLengthProfile(Vec<u64>);

impl TourLengthProfile {
    pub fn new(mut lengths: Vec<u64>) -> Self {
        lengths.sort_unstable();
        TourLengthProfile(lengths)
    }

    pub fn lengths(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Same length and elementwise `<=`.
    pub fn dominates(&self, other: &Self) -> bool {
        dominates_equal_length(&self.0, &other.0)
    }

    /// `self` can be injected into `other` with every entry mapped to one at least as large.
    pub fn subsumes(&self, other: &Self) -> bool {
        subsumes(&self.0, &other.0)
    }
}

impl From<Vec<u64>> for TourLengthProfile {
    fn from(v: Vec<u64>) -> Self {
        TourLengthProfile::new(v)
    }
}

pub type ProfileSet = BTreeSet<TourLengthProfile>;

pub(crate) fn dominates_equal_length(a: &[u64], b: &[u64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn subsumes(a: &[u64], b: &[u64]) -> bool {
    // match the sorted `a` against the largest `a.len()` entries of the sorted `b`
    a.len() <= b.len() && a.iter().zip(&b[b.len() - a.len()..]).all(|(x, y)| x <= y)
}

/// Profiles of a terminal leaf: every all-zero list with 1 to `gamma` entries.
pub fn leaf_profiles(gamma: usize) -> ProfileSet {
    (1..=gamma).map(|k| TourLengthProfile(vec![0; k])).collect()
}

/// Every profile at a vertex compatible with some pair of child profiles, where the children hang
/// off edges of weight `w1` and `w2`. Each parent subtour extends one subtour of one child, or
/// joins one subtour from each child. Results longer than `gamma` or with an entry above `cap` are
/// dropped.
pub fn combine_children(p1: &ProfileSet, p2: &ProfileSet, w1: u64, w2: u64, gamma: usize, cap: u64) -> ProfileSet {
    let mut out = ProfileSet::new();
    for a in p1 {
        for b in p2 {
            enumerate_merges(&a.0, &b.0, w1, w2, gamma, cap, |lengths, _| {
                out.insert(TourLengthProfile(lengths.to_vec()));
            });
        }
    }
    out
}

pub(crate) const NONE: u16 = u16::MAX;

/// One entry of a merged profile: which child entries it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Part {
    pub left: u16,
    pub right: u16,
}

/// Calls `emit(lengths, parts)` once per distinct way of pairing the entries of `a` and `b`, up to
/// permutations of equal entries. `lengths` is sorted and `parts[k]` names the child entries that
/// produced `lengths[k]`.
pub(crate) fn enumerate_merges(
    a: &[u64],
    b: &[u64],
    w1: u64,
    w2: u64,
    gamma: usize,
    cap: u64,
    mut emit: impl FnMut(&[u64], &[Part]),
) {
    if a.len() <= b.len() {
        merge_core(a, b, w1, w2, gamma, cap, &mut |l, p| emit(l, p));
    } else {
        let mut flipped = Vec::new();
        merge_core(b, a, w2, w1, gamma, cap, &mut |l, p: &[Part]| {
            flipped.clear();
            flipped.extend(p.iter().map(|x| Part {
                left: x.right,
                right: x.left,
            }));
            emit(l, &flipped);
        });
    }
}

struct Group {
    value: u64,
    start: usize,
    count: usize,
}

struct MergeCtx<'a> {
    short: Vec<u64>,
    long: Vec<u64>,
    groups: Vec<Group>,
    used: Vec<usize>,
    choice: Vec<usize>,
    short_raw: &'a [u64],
    min_pairs: usize,
    cap: u64,
    lengths: Vec<u64>,
    parts: Vec<(u64, Part)>,
}

fn extend(values: &[u64], w: u64) -> Option<Vec<u64>> {
    let add = w.checked_mul(2)?;
    values.iter().map(|&v| v.checked_add(add)).collect()
}

fn merge_core(a: &[u64], b: &[u64], w1: u64, w2: u64, gamma: usize, cap: u64, emit: &mut dyn FnMut(&[u64], &[Part])) {
    let (Some(short), Some(long)) = (extend(a, w1), extend(b, w2)) else {
        return;
    };
    if short.last().is_some_and(|&x| x > cap) || long.last().is_some_and(|&x| x > cap) {
        return;
    }
    let min_pairs = (a.len() + b.len()).saturating_sub(gamma);
    if min_pairs > a.len().min(b.len()) {
        return;
    }
    let mut groups: Vec<Group> = Vec::new();
    for (j, &v) in long.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if g.value == v => g.count += 1,
            _ => groups.push(Group {
                value: v,
                start: j,
                count: 1,
            }),
        }
    }
    let mut ctx = MergeCtx {
        used: vec![0; groups.len()],
        choice: vec![0; short.len()],
        short,
        long,
        groups,
        short_raw: a,
        min_pairs,
        cap,
        lengths: Vec::new(),
        parts: Vec::new(),
    };
    assign(&mut ctx, 0, 0, emit);
}

// choice code 0 = unpaired, g + 1 = paired with an entry of group g
fn assign(ctx: &mut MergeCtx, i: usize, pairs: usize, emit: &mut dyn FnMut(&[u64], &[Part])) {
    let n = ctx.short.len();
    if pairs + (n - i) < ctx.min_pairs {
        return;
    }
    if i == n {
        finish(ctx, emit);
        return;
    }
    let lower = if i > 0 && ctx.short_raw[i] == ctx.short_raw[i - 1] {
        ctx.choice[i - 1]
    } else {
        0
    };
    if lower == 0 {
        ctx.choice[i] = 0;
        assign(ctx, i + 1, pairs, emit);
    }
    for g in lower.max(1) - 1..ctx.groups.len() {
        if ctx.used[g] == ctx.groups[g].count {
            continue;
        }
        if ctx.short[i].saturating_add(ctx.groups[g].value) > ctx.cap {
            // groups ascend, so later ones are too large as well
            break;
        }
        ctx.used[g] += 1;
        ctx.choice[i] = g + 1;
        assign(ctx, i + 1, pairs + 1, emit);
        ctx.used[g] -= 1;
    }
}

fn finish(ctx: &mut MergeCtx, emit: &mut dyn FnMut(&[u64], &[Part])) {
    ctx.parts.clear();
    let mut taken = vec![0usize; ctx.groups.len()];
    for i in 0..ctx.short.len() {
        match ctx.choice[i] {
            0 => ctx.parts.push((
                ctx.short[i],
                Part {
                    left: i as u16,
                    right: NONE,
                },
            )),
            code => {
                let g = &ctx.groups[code - 1];
                let j = g.start + taken[code - 1];
                taken[code - 1] += 1;
                ctx.parts.push((
                    ctx.short[i] + g.value,
                    Part {
                        left: i as u16,
                        right: j as u16,
                    },
                ));
            }
        }
    }
    for (g, grp) in ctx.groups.iter().enumerate() {
        for j in grp.start + taken[g]..grp.start + grp.count {
            ctx.parts.push((
                ctx.long[j],
                Part {
                    left: NONE,
                    right: j as u16,
                },
            ));
        }
    }
    ctx.parts.sort_unstable_by_key(|&(v, p)| (v, p.left, p.right));
    ctx.lengths.clear();
    ctx.lengths.extend(ctx.parts.iter().map(|&(v, _)| v));
    let parts: Vec<Part> = ctx.parts.iter().map(|&(_, p)| p).collect();
    emit(&ctx.lengths, &parts);
}

/// Distinct merged length lists of a single pair of child profiles, keyed to one witness each.
#[cfg(test)]
pub(crate) fn merge_pair(a: &[u64], b: &[u64], w1: u64, w2: u64, gamma: usize, cap: u64) -> std::collections::HashMap<Vec<u64>, Vec<Part>> {
    let mut out = std::collections::HashMap::new();
    enumerate_merges(a, b, w1, w2, gamma, cap, |l, p| {
        out.entry(l.to_vec()).or_insert_with(|| p.to_vec());
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(lists: &[&[u64]]) -> ProfileSet {
        lists.iter().map(|l| TourLengthProfile::new(l.to_vec())).collect()
    }

    /// Independent oracle: try every injective partial pairing of `a` into `b`.
    fn brute_pairings(a: &[u64], b: &[u64], w1: u64, w2: u64, gamma: usize, cap: u64) -> ProfileSet {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            i: usize,
            a: &[u64],
            b: &[u64],
            w1: u64,
            w2: u64,
            used: &mut Vec<bool>,
            cur: &mut Vec<u64>,
            out: &mut Vec<Vec<u64>>,
        ) {
            if i == a.len() {
                let mut all = cur.clone();
                for (j, &x) in b.iter().enumerate() {
                    if !used[j] {
                        all.push(x + 2 * w2);
                    }
                }
                out.push(all);
                return;
            }
            cur.push(a[i] + 2 * w1);
            rec(i + 1, a, b, w1, w2, used, cur, out);
            cur.pop();
            for j in 0..b.len() {
                if !used[j] {
                    used[j] = true;
                    cur.push(a[i] + 2 * w1 + b[j] + 2 * w2);
                    rec(i + 1, a, b, w1, w2, used, cur, out);
                    cur.pop();
                    used[j] = false;
                }
            }
        }
        let mut raw = Vec::new();
        rec(0, a, b, w1, w2, &mut vec![false; b.len()], &mut Vec::new(), &mut raw);
        raw.into_iter()
            .filter(|l| l.len() <= gamma && l.iter().all(|&x| x <= cap))
            .map(TourLengthProfile::new)
            .collect()
    }

    #[test]
    fn leaf_sets() {
        assert_eq!(leaf_profiles(1), set(&[&[0]]));
        assert_eq!(leaf_profiles(3), set(&[&[0], &[0, 0], &[0, 0, 0]]));
        assert!(leaf_profiles(0).is_empty());
    }

    #[test]
    fn combine_single_pair() {
        let out = combine_children(&set(&[&[4]]), &set(&[&[0]]), 2, 3, 5, 100);
        assert_eq!(out, set(&[&[14], &[6, 8]]));
    }

    #[test]
    fn combine_with_empty_child_set() {
        assert!(combine_children(&set(&[&[0]]), &ProfileSet::new(), 1, 1, 3, 10).is_empty());
    }

    #[test]
    fn combine_respects_gamma_and_cap() {
        let out = combine_children(&set(&[&[4]]), &set(&[&[0]]), 2, 3, 1, 100);
        assert_eq!(out, set(&[&[14]]));
        let out = combine_children(&set(&[&[4]]), &set(&[&[0]]), 2, 3, 5, 13);
        assert_eq!(out, set(&[&[6, 8]]));
    }

    #[test]
    fn witnesses_are_consistent() {
        let a = [0, 2, 2, 5];
        let b = [1, 1, 3];
        for (lengths, parts) in merge_pair(&a, &b, 1, 2, 6, 30) {
            assert_eq!(lengths.len(), parts.len());
            let mut seen_l = vec![false; a.len()];
            let mut seen_r = vec![false; b.len()];
            for (len, p) in lengths.iter().zip(&parts) {
                let mut v = 0;
                if p.left != NONE {
                    assert!(!seen_l[p.left as usize]);
                    seen_l[p.left as usize] = true;
                    v += a[p.left as usize] + 2;
                }
                if p.right != NONE {
                    assert!(!seen_r[p.right as usize]);
                    seen_r[p.right as usize] = true;
                    v += b[p.right as usize] + 4;
                }
                assert_eq!(v, *len);
            }
            assert!(seen_l.iter().all(|&x| x) && seen_r.iter().all(|&x| x));
        }
    }

    #[test]
    fn dominance_relations() {
        let a = TourLengthProfile::new(vec![3, 5]);
        let b = TourLengthProfile::new(vec![4, 5]);
        let c = TourLengthProfile::new(vec![1, 4, 6]);
        assert!(a.dominates(&b));
        assert!(!b.dominates(&a));
        assert!(!a.dominates(&c));
        assert!(a.subsumes(&c));
        assert!(!c.subsumes(&a));
        assert!(TourLengthProfile::new(vec![]).subsumes(&a));
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_brute_pairing(
            a in proptest::collection::vec(0u64..6, 1..=4),
            b in proptest::collection::vec(0u64..6, 1..=4),
            w1 in 0u64..3,
            w2 in 0u64..3,
            gamma in 1usize..=8,
            cap in 0u64..30,
        ) {
            let pa = set(&[&a]);
            let pb = set(&[&b]);
            let fast = combine_children(&pa, &pb, w1, w2, gamma, cap);
            let mut sa = a.clone();
            sa.sort();
            let mut sb = b.clone();
            sb.sort();
            prop_assert_eq!(fast, brute_pairings(&sa, &sb, w1, w2, gamma, cap));
        }
    }
}
