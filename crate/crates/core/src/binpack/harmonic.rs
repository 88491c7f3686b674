use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{alpha_partial, u};
use crate::error::{Error, Result};

/// A unit-capacity bin of the online packer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bin {
    /// Order in which the bin was opened.
    pub id: usize,
    /// Size class: items in `(1/(class+1), 1/class]`, or at most `1/M` for the last class.
    pub class: usize,
    pub load: BigRational,
    /// Item indices in arrival order.
    pub contents: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinPackState {
    pub open_bins: Vec<Bin>,
    pub closed_bins: Vec<Bin>,
    pub space_bound: usize,
}

impl BinPackState {
    pub fn bins_used(&self) -> usize {
        self.open_bins.len() + self.closed_bins.len()
    }

    /// Every bin, in the order it was opened.
    pub fn all_bins(&self) -> Vec<&Bin> {
        let mut bins: Vec<&Bin> = self.open_bins.iter().chain(&self.closed_bins).collect();
        bins.sort_by_key(|b| b.id);
        bins
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackOutcome {
    pub state: BinPackState,
    /// Bin id of every item.
    pub assignment: Vec<usize>,
    /// Number of open bins after each item.
    pub open_trace: Vec<usize>,
}

impl PackOutcome {
    pub fn max_open(&self) -> usize {
        self.open_trace.iter().copied().max().unwrap_or(0)
    }
}

fn size_class(size: &BigRational, space: usize) -> usize {
    // largest j < space with size <= 1/j, i.e. j = floor(1/size), else the small-item class
    if size.is_zero() {
        return space;
    }
    let j = size.recip().floor().to_integer();
    match usize::try_from(j) {
        Ok(j) if j < space => j,
        _ => space,
    }
}

/// Bounded-space Harmonic packing with `space` classes.
///
/// An item in `(1/(j+1), 1/j]` with `j < space` joins the open class-`j` bin, which closes once it
/// holds `j` items. Items no larger than `1/space` go to the open class-`space` bin by next fit. At
/// most one bin per class is open, so never more than `space` bins are open at once.
pub fn harmonic_pack(items: &[BigRational], space: usize) -> Result<PackOutcome> {
    if space < 2 {
        return Err(Error::InvalidArgument(format!("space bound must be at least 2, got {space}")));
    }
    let one = BigRational::one();
    if let Some(i) = items.iter().position(|s| *s < BigRational::zero() || *s > one) {
        return Err(Error::InvalidArgument(format!("item {i} is outside [0, 1]")));
    }
    let mut open: Vec<Option<Bin>> = vec![None; space + 1];
    let mut closed: Vec<Bin> = Vec::new();
    let mut next_id = 0;
    let mut assignment = Vec::with_capacity(items.len());
    let mut open_trace = Vec::with_capacity(items.len());

    for (idx, size) in items.iter().enumerate() {
        let class = size_class(size, space);
        let fits = open[class]
            .as_ref()
            .is_some_and(|b| class < space || &b.load + size <= one);
        if !fits {
            if let Some(full) = open[class].take() {
                closed.push(full);
            }
            open[class] = Some(Bin {
                id: next_id,
                class,
                load: BigRational::zero(),
                contents: Vec::new(),
            });
            next_id += 1;
        }
        let bin = open[class].as_mut().expect("bin was just ensured");
        bin.load += size;
        bin.contents.push(idx);
        assignment.push(bin.id);
        if class < space && bin.contents.len() == class {
            closed.push(open[class].take().expect("present"));
        }
        open_trace.push(open.iter().flatten().count());
    }

    let mut open_bins: Vec<Bin> = open.into_iter().flatten().collect();
    open_bins.sort_by_key(|b| b.id);
    closed.sort_by_key(|b| b.id);
    Ok(PackOutcome {
        state: BinPackState {
            open_bins,
            closed_bins: closed,
            space_bound: space,
        },
        assignment,
        open_trace,
    })
}

/// The `k` with `u_k < space <= u_{k+1}`.
pub fn harmonic_parameter(space: usize) -> Result<u32> {
    let m = space as u128;
    let mut k = 1;
    while u(k + 1)? < m {
        k += 1;
    }
    Ok(k)
}

/// `(sum_{i<=k} 1/u_i + M/((M-1) u_{k+1})) * opt + (M - 1)` with `u_k < M <= u_{k+1}`.
pub fn harmonic_bound(space: usize, opt: usize) -> Result<BigRational> {
    if space < 2 {
        return Err(Error::InvalidArgument(format!("space bound must be at least 2, got {space}")));
    }
    let k = harmonic_parameter(space)?;
    let m = BigRational::from_integer(space.into());
    let next = BigRational::from_integer(u(k + 1)?.into());
    let factor = alpha_partial(k) + &m / ((&m - BigRational::one()) * next);
    Ok(factor * BigRational::from_integer(opt.into()) + m - BigRational::one())
}
