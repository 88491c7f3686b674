use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// Largest instance the exact offline packer accepts.
pub const OFFLINE_MAX_ITEMS: usize = 12;

/// Fewest unit bins holding all items, by exhaustive search.
pub fn opt_bin_packing(items: &[BigRational]) -> Result<usize> {
    if items.len() > OFFLINE_MAX_ITEMS {
        return Err(Error::InvalidArgument(format!(
            "exact bin packing is limited to {OFFLINE_MAX_ITEMS} items, got {}",
            items.len()
        )));
    }
    if items.iter().any(|s| s.is_negative() || *s > BigRational::one()) {
        return Err(Error::InvalidArgument("item outside [0, 1]".into()));
    }
    let lcm = items.iter().fold(num_bigint::BigInt::one(), |acc, s| acc.lcm(s.denom()));
    let mut sizes: Vec<u128> = items
        .iter()
        .map(|s| {
            u128::try_from(s.numer() * (&lcm / s.denom()))
                .map_err(|_| Error::Overflow("common denominator of bin packing items".into()))
        })
        .collect::<Result<_>>()?;
    let capacity = u128::try_from(lcm).map_err(|_| Error::Overflow("common denominator".into()))?;
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let total: u128 = sizes.iter().sum();
    let lower = total.div_ceil(capacity).max(if sizes.is_empty() { 0 } else { 1 }) as usize;

    let mut best = first_fit(&sizes, capacity);
    let mut loads = Vec::with_capacity(sizes.len());
    search(&sizes, 0, capacity, &mut loads, &mut best, lower);
    Ok(best)
}

fn first_fit(sizes: &[u128], capacity: u128) -> usize {
    let mut loads: Vec<u128> = Vec::new();
    for &s in sizes {
        match loads.iter_mut().find(|l| **l + s <= capacity) {
            Some(l) => *l += s,
            None => loads.push(s),
        }
    }
    loads.len()
}

fn search(sizes: &[u128], i: usize, capacity: u128, loads: &mut Vec<u128>, best: &mut usize, lower: usize) {
    if *best == lower || loads.len() >= *best {
        return;
    }
    if i == sizes.len() {
        *best = loads.len();
        return;
    }
    let s = sizes[i];
    for b in 0..loads.len() {
        // bins with equal load are interchangeable
        if loads[b] + s <= capacity && !loads[..b].contains(&loads[b]) {
            loads[b] += s;
            search(sizes, i + 1, capacity, loads, best, lower);
            loads[b] -= s;
        }
    }
    loads.push(s);
    search(sizes, i + 1, capacity, loads, best, lower);
    loads.pop();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn small_cases() {
        assert_eq!(opt_bin_packing(&[]).unwrap(), 0);
        assert_eq!(opt_bin_packing(&[ratio(0, 1)]).unwrap(), 1);
        assert_eq!(opt_bin_packing(&vec![ratio(1, 2); 3]).unwrap(), 2);
        let xs = [ratio(3, 5), ratio(3, 5), ratio(2, 5), ratio(2, 5)];
        assert_eq!(opt_bin_packing(&xs).unwrap(), 2);
        // first fit decreasing needs 3 bins here, the optimum is 2
        let xs: Vec<_> = [5, 4, 3, 3, 3, 2].iter().map(|&x| ratio(x, 10)).collect();
        assert_eq!(first_fit(&[5, 4, 3, 3, 3, 2], 10), 3);
        assert_eq!(opt_bin_packing(&xs).unwrap(), 2);
    }

    #[test]
    fn limits() {
        assert!(opt_bin_packing(&vec![ratio(1, 2); 13]).is_err());
        assert!(opt_bin_packing(&[ratio(3, 2)]).is_err());
    }
}
