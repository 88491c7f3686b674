//! Instance generators: the tight family for the approximation algorithm, reproducible random
//! trees, and the star encoding of bin packing.
//!
//! # Random stream
//!
//! All randomness comes from [`Stream`], the reference SplitMix64 generator (state initialised to
//! the seed, outputs as in `splitmix64.c`). Derived draws are specified so that other
//! implementations can reproduce them bit for bit:
//!
//! * `below(n)`: draw `x`; reject while `x >= 2^64 - (2^64 mod n)`; return `x mod n`.
//! * `shuffle(xs)`: Fisher-Yates from the back, swapping `xs[i]` with `xs[below(i + 1)]`.
//!
//! # `gen_random`
//!
//! With `n` terminals, draw `extra = below(n)` and create `V = n + extra` non-root vertices
//! `1..=V` (the depot is `0`). Vertex `i` takes parent `below(i)` and weight
//! `below(max_weight + 1)`, in increasing order of `i`. Terminals: shuffle the leaves, shuffle the
//! remaining non-root vertices, concatenate and keep the first `n`. Finally
//! `D = max(1, ceil(halves * h / 2))` where `h` is the largest terminal depth and `halves` comes
//! from the [`DistancePolicy`].

use num_rational::BigRational;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::binpack::{alpha_partial, u};
use crate::error::{Error, Result};
use crate::instance::{EdgeSpec, RoutingInstance, TreeInstance, VertexId};

/// Seeded SplitMix64 stream with the derived draws described in the module documentation.
#[derive(Debug, Clone)]
pub struct Stream(SplitMix64);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`. Panics when `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - (u64::MAX - n + 1) % n;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % n;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.below(n as u64) as usize
    }

    /// Uniform in `lo..=hi`.
    pub fn between(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    /// True with probability `num / den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.index(i + 1);
            xs.swap(i, j);
        }
    }
}

/// How `gen_random` picks the distance bound, in halves of the deepest terminal's depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistancePolicy {
    /// `D = ceil(halves * h / 2)`; `halves >= 4` keeps every terminal reachable.
    Multiple { halves: u64 },
    /// `halves` drawn uniformly from `lo..=hi` after the tree is built.
    Range { lo: u64, hi: u64 },
}

impl Default for DistancePolicy {
    fn default() -> Self {
        DistancePolicy::Range { lo: 4, hi: 8 }
    }
}

pub fn gen_random(seed: u64, n: usize, max_weight: u64, policy: DistancePolicy) -> Result<RoutingInstance> {
    gen_random_from(&mut Stream::new(seed), n, max_weight, policy)
}

/// Same as [`gen_random`], drawing from an existing stream.
pub fn gen_random_from(rng: &mut Stream, n: usize, max_weight: u64, policy: DistancePolicy) -> Result<RoutingInstance> {
    if n == 0 {
        return Err(Error::InvalidArgument("at least one terminal is required".into()));
    }
    let (lo, hi) = match policy {
        DistancePolicy::Multiple { halves } => (halves, halves),
        DistancePolicy::Range { lo, hi } => (lo, hi),
    };
    if lo < 4 || hi < lo {
        return Err(Error::InvalidArgument(format!(
            "distance policy must use at least 4 halves, got {lo}..={hi}"
        )));
    }
    let extra = rng.index(n);
    let count = n + extra;
    let mut edges = Vec::with_capacity(count);
    let mut depth = vec![0u64; count + 1];
    let mut has_child = vec![false; count + 1];
    for i in 1..=count {
        let parent = rng.index(i);
        let weight = rng.below(max_weight + 1);
        depth[i] = depth[parent] + weight;
        has_child[parent] = true;
        edges.push(EdgeSpec::new(i as VertexId, parent as VertexId, weight));
    }
    let mut leaves: Vec<usize> = (1..=count).filter(|&v| !has_child[v]).collect();
    let mut inner: Vec<usize> = (1..=count).filter(|&v| has_child[v]).collect();
    rng.shuffle(&mut leaves);
    rng.shuffle(&mut inner);
    let terminals: Vec<usize> = leaves.into_iter().chain(inner).take(n).collect();
    let halves = rng.between(lo, hi);
    let deepest = terminals.iter().map(|&t| depth[t]).max().unwrap_or(0);
    let bound = (halves * deepest).div_ceil(2).max(1);
    let ids: Vec<VertexId> = terminals.iter().map(|&t| t as VertexId).collect();
    RoutingInstance::new(bound, 0, &edges, &ids)
}

/// Parameters of the tight family: `k` component types and the solver's `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowerBoundParams {
    pub k: u32,
    pub gamma: u64,
}

/// Largest number of vertices `gen_lower_bound` will build.
pub const LOWER_BOUND_MAX_VERTICES: u128 = 5_000_000;

impl LowerBoundParams {
    pub fn new(k: u32, gamma: u64) -> Result<Self> {
        if k == 0 || gamma == 0 {
            return Err(Error::InvalidArgument("k and gamma must be positive".into()));
        }
        Ok(LowerBoundParams { k, gamma })
    }

    /// `D = 2 k u_{k+1}`.
    pub fn distance_bound(&self) -> Result<u64> {
        let d = u(self.k + 1)?
            .checked_mul(2 * self.k as u128)
            .ok_or_else(|| Error::Overflow("distance bound".into()))?;
        u64::try_from(d).map_err(|_| Error::Overflow("distance bound exceeds 64 bits".into()))
    }

    /// Edge weight of a type-`i` terminal: `k u_{k+1} / (u_i + 1) + 1`.
    pub fn terminal_weight(&self, i: u32) -> Result<u64> {
        let x = (self.k as u128 * u(self.k + 1)?) / (u(i)? + 1) + 1;
        u64::try_from(x).map_err(|_| Error::Overflow("terminal weight".into()))
    }

    /// Number of type-`i` components, `u_k / u_i`.
    pub fn component_count(&self, i: u32) -> Result<u128> {
        Ok(u(self.k)? / u(i)?)
    }

    /// Terminals in one type-`i` component, `gamma u_i`.
    pub fn terminals_per_component(&self, i: u32) -> Result<u128> {
        u(i)?
            .checked_mul(self.gamma as u128)
            .ok_or_else(|| Error::Overflow("terminal count".into()))
    }

    /// `k gamma u_k` terminals plus one root per component plus the depot.
    pub fn vertex_count(&self) -> Result<u128> {
        let mut total: u128 = 1;
        for i in 1..=self.k {
            let per = self.terminals_per_component(i)? + 1;
            total = self
                .component_count(i)?
                .checked_mul(per)
                .and_then(|x| x.checked_add(total))
                .ok_or_else(|| Error::Overflow("vertex count".into()))?;
        }
        Ok(total)
    }
}

/// The tight instance: for each type `i`, `u_k / u_i` stars hang off the depot by weight-0 edges,
/// each with `gamma u_i` terminals at distance `x_i`.
///
/// Vertex ids are assigned in order: the depot is `0`, then every star root followed by its
/// terminals, types ascending.
pub fn gen_lower_bound(params: LowerBoundParams) -> Result<RoutingInstance> {
    let vertices = params.vertex_count()?;
    if vertices > LOWER_BOUND_MAX_VERTICES {
        return Err(Error::InvalidArgument(format!(
            "instance would have {vertices} vertices, above the limit of {LOWER_BOUND_MAX_VERTICES}"
        )));
    }
    let bound = params.distance_bound()?;
    let mut edges = Vec::with_capacity(vertices as usize);
    let mut terminals = Vec::new();
    let mut next: VertexId = 1;
    for i in 1..=params.k {
        let x = params.terminal_weight(i)?;
        for _ in 0..params.component_count(i)? {
            let star = next;
            next += 1;
            edges.push(EdgeSpec::new(star, 0, 0));
            for _ in 0..params.terminals_per_component(i)? {
                edges.push(EdgeSpec::new(next, star, x));
                terminals.push(next);
                next += 1;
            }
        }
    }
    RoutingInstance::new(bound, 0, &edges, &terminals)
}

/// The solution with `gamma u_k` tours, tour `j` taking the `j`-th terminal of every type.
pub fn lower_bound_solution(params: LowerBoundParams, inst: &RoutingInstance) -> Result<Vec<Vec<VertexId>>> {
    let per_type = (params.gamma as u128 * u(params.k)?) as usize;
    let ids = inst.terminal_ids();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    if sorted.len() != per_type * params.k as usize {
        return Err(Error::InvalidArgument("instance does not match the parameters".into()));
    }
    Ok((0..per_type)
        .map(|j| (0..params.k as usize).map(|i| sorted[i * per_type + j]).collect())
        .collect())
}

/// `(gamma u_k sum_{i<=k} 1/u_i, gamma u_k)`: the tour count the approximation algorithm reaches
/// on the tight instance and the size of the explicit solution.
pub fn expected_lb_behavior(params: LowerBoundParams) -> Result<(u128, u128)> {
    let uk = u(params.k)?;
    let opt = uk
        .checked_mul(params.gamma as u128)
        .ok_or_else(|| Error::Overflow("opt bound".into()))?;
    let scaled = alpha_partial(params.k) * BigRational::from_integer(opt.into());
    debug_assert!(scaled.is_integer());
    let alg = u128::try_from(scaled.to_integer()).map_err(|_| Error::Overflow("tour count".into()))?;
    Ok((alg, opt))
}

/// Star with one terminal per item at distance `a_i` and `D = 2M`: packing the items into bins of
/// capacity `M` is the same as covering the terminals with tours.
pub fn binpack_to_dvrp(capacity: u64, sizes: &[u64]) -> Result<RoutingInstance> {
    if capacity == 0 {
        return Err(Error::InvalidArgument("bin capacity must be positive".into()));
    }
    if let Some(i) = sizes.iter().position(|&a| a > capacity) {
        return Err(Error::InvalidArgument(format!(
            "item {i} has size {} above the capacity {capacity}",
            sizes[i]
        )));
    }
    let bound = capacity
        .checked_mul(2)
        .ok_or_else(|| Error::Overflow("distance bound".into()))?;
    let edges: Vec<EdgeSpec> = sizes
        .iter()
        .enumerate()
        .map(|(i, &a)| EdgeSpec::new(i as VertexId + 1, 0, a))
        .collect();
    let terminals: Vec<VertexId> = (1..=sizes.len() as VertexId).collect();
    RoutingInstance::new(bound, 0, &edges, &terminals)
}

/// A random set of terminals that one tour can serve: terminals are taken in random order and
/// kept while the closed walk stays within the bound. Empty only without terminals.
pub fn random_feasible_tour(inst: &impl TreeInstance, rng: &mut Stream) -> Vec<usize> {
    let mut order = inst.terminals().to_vec();
    rng.shuffle(&mut order);
    let limit = 1 + rng.index(order.len().max(1));
    let mut tour: Vec<usize> = Vec::new();
    for t in order {
        if tour.len() == limit {
            break;
        }
        tour.push(t);
        if inst.tree().closed_walk_length(tour.iter().copied()) > inst.distance_bound() {
            tour.pop();
        }
    }
    tour.sort_unstable();
    tour
}
