use num_rational::BigRational;
use num_traits::{One, Zero};

use dvrp_core::binpack::{harmonic_bound, harmonic_pack, harmonic_parameter, opt_bin_packing, u};
use dvrp_core::generators::Stream;
use dvrp_core::rational::ratio;

fn items(rng: &mut Stream, count: usize) -> Vec<BigRational> {
    (0..count)
        .map(|_| {
            let den = rng.between(1, 10);
            ratio(rng.between(0, den), den)
        })
        .collect()
}

/// Fewest bins by dynamic programming over subsets of items.
fn partition_oracle(xs: &[BigRational]) -> usize {
    let n = xs.len();
    let full = (1usize << n) - 1;
    let fits: Vec<bool> = (0..=full)
        .map(|m| {
            let load = (0..n).filter(|i| m >> i & 1 == 1).fold(BigRational::zero(), |a, i| a + &xs[i]);
            load <= BigRational::one()
        })
        .collect();
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for m in 1..=full {
        let low = m & m.wrapping_neg();
        let mut s = m;
        while s > 0 {
            if s & low != 0 && fits[s] && best[m ^ s] != usize::MAX {
                best[m] = best[m].min(best[m ^ s] + 1);
            }
            s = (s - 1) & m;
        }
    }
    best[full]
}

#[test]
fn offline_optimum_matches_partition_oracle() {
    let mut rng = Stream::new(41);
    for _ in 0..300 {
        let count = rng.between(1, 9) as usize;
        let xs = items(&mut rng, count);
        assert_eq!(opt_bin_packing(&xs).unwrap(), partition_oracle(&xs), "{xs:?}");
    }
    assert_eq!(opt_bin_packing(&[]).unwrap(), 0);
}

#[test]
fn bins_hold_one_class() {
    let mut rng = Stream::new(42);
    for _ in 0..300 {
        let space = rng.between(2, 8) as usize;
        let count = rng.between(0, 40) as usize;
        let xs = items(&mut rng, count);
        let out = harmonic_pack(&xs, space).unwrap();
        let bins = out.state.all_bins();
        assert_eq!(bins.iter().map(|b| b.contents.len()).sum::<usize>(), xs.len());
        for b in bins {
            assert!(b.load <= BigRational::one());
            for &i in &b.contents {
                assert_eq!(out.assignment[i], b.id);
                let x = &xs[i];
                if b.class < space {
                    assert!(*x <= ratio(1, b.class as u64) && *x > ratio(1, b.class as u64 + 1));
                } else {
                    assert!(*x <= ratio(1, space as u64));
                }
            }
            if b.class < space {
                assert!(b.contents.len() <= b.class);
            }
        }
        assert!(out.max_open() <= space);
    }
}

#[test]
fn parameter_brackets_space() {
    for space in 2..200usize {
        let k = harmonic_parameter(space).unwrap();
        assert!(u(k).unwrap() < space as u128 && space as u128 <= u(k + 1).unwrap());
    }
    assert!(harmonic_pack(&[], 1).is_err());
    assert!(harmonic_pack(&[ratio(3, 2)], 3).is_err());
}

#[test]
fn bound_grows_with_optimum() {
    for space in [2, 3, 7, 43] {
        let mut prev = harmonic_bound(space, 0).unwrap();
        for opt in 1..20 {
            let b = harmonic_bound(space, opt).unwrap();
            assert!(b > prev);
            assert!(b >= BigRational::from_integer(opt.into()));
            prev = b;
        }
    }
}
