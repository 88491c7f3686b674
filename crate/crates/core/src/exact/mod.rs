//! Exact minimum tour counts: the bounded-tour dynamic program and a brute-force oracle.

mod brute;
mod profile;
mod table;

pub use brute::{brute_force_opt, BruteForceResult, BRUTE_FORCE_MAX_TERMINALS};
pub use profile::{combine_children, leaf_profiles, ProfileSet, TourLengthProfile};
pub use table::{
    profile_counts, solve_bounded, solve_bounded_with, solve_with_tours, stored_profiles, DpOptions, Pruning,
};
pub(crate) use table::{vertex_cap, ProfileList, ProfileTable};
