//! Seeded inputs shared by the benchmarks.

use polyrigid::generate::{random_convex_surface, trial_rng};
use polyrigid::suspension::{random_suspension, SuspensionProfile};
use polyrigid::{Decomposition, PolyhedralSurface, Suspension, Tolerance};

/// Hull of `n` random sphere points; retries seeds until the hull is clean.
pub fn hull(n: usize, seed: u64) -> PolyhedralSurface {
    (0..).find_map(|t| random_convex_surface(&mut trial_rng(seed, t), n, 1e-6).ok()).expect("some seed gives a hull")
}

pub fn suspension(n: usize, profile: SuspensionProfile, seed: u64) -> Suspension {
    random_suspension(&mut trial_rng(seed, 0), n, profile, &Tolerance::default()).expect("valid suspension")
}

pub fn axial_decomposition(n: usize, seed: u64) -> Decomposition {
    Decomposition::of_suspension(&suspension(n, SuspensionProfile::Star, seed), &Tolerance::default())
        .expect("star suspensions decompose")
}
