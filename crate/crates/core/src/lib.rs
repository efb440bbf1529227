//! Core library for `distnav`: finite-support probability measures with exact
//! Wasserstein-1 verification, rotation-path navigation planners on spheres and
//! lens spaces, finite and normal-form group calculators (Frobenius maps,
//! centralizers, double actions), simplicial complexes with integer homology,
//! and a Borsuk-Ulam coincidence harness for free cyclic sphere actions.

pub mod bounds;
pub mod coincidence;
pub mod geometry;
pub mod groups;
pub mod lp;
pub mod measure;
pub mod planner;
pub mod simplicial;

/// Default tolerance for merging atoms that should coincide but drifted apart
/// in floating point.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

/// Crate version, exposed for reproducibility manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
