use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::BinPackState;
use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::instance::{NormalizedInstance, TreeInstance};
use crate::reduced::{reduced_length, split_tour, Category, Subtour};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedItem {
    pub value: BigRational,
    pub component: usize,
    pub category: Category,
    pub subtour: Subtour,
}

/// Reduced lengths of all subtours of a tour set, grouped by component (ascending) and, within a
/// component, ending subtours before passing ones.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReducedLengthSequence {
    pub items: Vec<ReducedItem>,
}

impl ReducedLengthSequence {
    pub fn values(&self) -> Vec<BigRational> {
        self.items.iter().map(|i| i.value.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Items sharing a component and category form one contiguous run.
    pub fn is_grouped(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        let mut prev = None;
        for item in &self.items {
            let key = (item.component, item.category);
            if prev != Some(key) && !seen.insert(key) {
                return false;
            }
            prev = Some(key);
        }
        true
    }
}

pub fn build_reduction_sequence(
    inst: &NormalizedInstance,
    dec: &Decomposition,
    tours: &[Vec<usize>],
) -> Result<ReducedLengthSequence> {
    let mut groups: BTreeMap<(usize, Category), Vec<ReducedItem>> = BTreeMap::new();
    for (i, tour) in tours.iter().enumerate() {
        let length = inst.tree().closed_walk_length(tour.iter().copied());
        if length > inst.distance_bound() {
            return Err(Error::Contract(format!(
                "tour {i} has length {length} > D = {}",
                inst.distance_bound()
            )));
        }
        for s in split_tour(inst, dec, tour)? {
            let value = reduced_length(inst, dec, &s)?;
            groups.entry((s.component, s.category)).or_default().push(ReducedItem {
                value,
                component: s.component,
                category: s.category,
                subtour: s,
            });
        }
    }
    Ok(ReducedLengthSequence {
        items: groups.into_values().flatten().collect(),
    })
}

/// A part of a packed bin holding items of one component and category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedBin {
    pub component: usize,
    pub category: Category,
    /// Indices into the sequence.
    pub items: Vec<usize>,
    pub load: BigRational,
}

/// Splits every bin of a packing of `seq` by component and category. Bins are visited in the
/// order they were opened and parts within a bin in order of their key.
pub fn refine_bins(packing: &BinPackState, seq: &ReducedLengthSequence) -> Result<Vec<RefinedBin>> {
    let mut seen = vec![false; seq.len()];
    let mut out = Vec::new();
    for bin in packing.all_bins() {
        let mut parts: BTreeMap<(usize, Category), Vec<usize>> = BTreeMap::new();
        for &i in &bin.contents {
            let item = seq
                .items
                .get(i)
                .ok_or_else(|| Error::Contract(format!("packing refers to item {i} outside the sequence")))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Contract(format!("item {i} packed twice")));
            }
            parts.entry((item.component, item.category)).or_default().push(i);
        }
        for ((component, category), items) in parts {
            let load = items
                .iter()
                .fold(BigRational::zero(), |acc, &i| acc + &seq.items[i].value);
            out.push(RefinedBin {
                component,
                category,
                items,
                load,
            });
        }
    }
    if let Some(i) = seen.iter().position(|&s| !s) {
        return Err(Error::Contract(format!("item {i} is not packed")));
    }
    Ok(out)
}

/// One tour per refined bin, each built by chaining the bin's subtours.
pub fn tours_from_bins(
    inst: &NormalizedInstance,
    dec: &Decomposition,
    seq: &ReducedLengthSequence,
    bins: &[RefinedBin],
) -> Result<Vec<crate::reduced::CombinedTour>> {
    bins.iter()
        .map(|b| {
            let subs: Vec<Subtour> = b.items.iter().map(|&i| seq.items[i].subtour.clone()).collect();
            crate::reduced::combine_subtours(inst, dec, &subs)
        })
        .collect()
}
