//! The sequence `u_k`, the constant `alpha`, bounded-space online bin packing, and the reduction
//! from tour sets to packing instances.

mod harmonic;
mod offline;
mod reduction;

pub use harmonic::{harmonic_bound, harmonic_pack, harmonic_parameter, Bin, BinPackState, PackOutcome};
pub use offline::{opt_bin_packing, OFFLINE_MAX_ITEMS};
pub use reduction::{
    build_reduction_sequence, refine_bins, tours_from_bins, ReducedItem, ReducedLengthSequence, RefinedBin,
};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

/// The k-th term of `1, 2, 6, 42, 1806, ...`. Exact up to `k = 8`; larger terms overflow `u128`.
pub fn u(k: u32) -> Result<u128> {
    if k == 0 {
        return Err(Error::InvalidArgument("u(k) is defined for k >= 1".into()));
    }
    let mut x: u128 = 1;
    for _ in 1..k {
        x = x
            .checked_add(1)
            .and_then(|y| x.checked_mul(y))
            .ok_or_else(|| Error::Overflow(format!("u({k}) exceeds 128 bits")))?;
    }
    Ok(x)
}

/// Arbitrary-precision `u(k)`.
pub fn u_big(k: u32) -> BigUint {
    let mut x = BigUint::one();
    for _ in 1..k.max(1) {
        x = &x * (&x + 1u32);
    }
    x
}

/// `1/u_1 + ... + 1/u_k` exactly; zero for `k = 0`.
pub fn alpha_partial(k: u32) -> BigRational {
    let mut sum = BigRational::from_integer(0.into());
    let mut x = BigUint::one();
    for _ in 0..k {
        sum += BigRational::new(1.into(), x.clone().into());
        x = &x * (&x + 1u32);
    }
    sum
}

/// `alpha` truncated to `digits` decimal places.
///
/// The tail after `k` terms lies in `(0, 2/u_{k+1})`, so terms are added until both ends of that
/// interval truncate to the same string.
pub fn alpha_approx(digits: usize) -> String {
    let mut k = 1;
    loop {
        let lo = alpha_partial(k);
        let hi = &lo + BigRational::new(2.into(), u_big(k + 1).into());
        let a = crate::rational::truncate_decimal(&lo, digits);
        if a == crate::rational::truncate_decimal(&hi, digits) {
            return a;
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn sequence_terms() {
        let got: Vec<u128> = (1..=6).map(|k| u(k).unwrap()).collect();
        assert_eq!(got, [1, 2, 6, 42, 1806, 3263442]);
        assert_eq!(u(7).unwrap(), 10650056950806);
        assert_eq!(u(8).unwrap(), 113423713055421844361000442);
        assert!(matches!(u(9), Err(Error::Overflow(_))));
        assert!(u(0).is_err());
        assert_eq!(u_big(9).to_string(), {
            let x: BigUint = u(8).unwrap().into();
            (&x * (&x + 1u32)).to_string()
        });
    }

    #[test]
    fn partial_sums() {
        assert_eq!(alpha_partial(2), ratio(3, 2));
        assert_eq!(alpha_partial(3), ratio(5, 3));
        assert_eq!(alpha_partial(4), ratio(71, 42));
        for k in 1..8 {
            assert!(alpha_partial(k) < alpha_partial(k + 1));
        }
    }

    #[test]
    fn alpha_digits() {
        assert_eq!(alpha_approx(5), "1.69103");
        assert_eq!(alpha_approx(0), "1");
        assert_eq!(alpha_approx(12), "1.691030206757");
    }
}
