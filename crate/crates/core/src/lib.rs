//! Cascaded time-space Doppler ambiguity in multichannel SAR: the folding
//! model, system classification, radial-velocity retrieval, determinable
//! velocity enumeration and a slow-time phase simulator.
//!
//! The folding operators are generic over [`Scalar`]; the aliases below
//! name the float and exact-rational instantiations.

pub mod enumerator;
pub mod error;
pub mod folding;
pub mod number;
pub mod scalar;
pub mod sim;
pub mod solvers;
pub mod system;

pub use enumerator::{determinable_size, determinable_size_of, size_sweep, EnumerationReport, SweepRow};
pub use error::{Error, IntegerSet, Result};
pub use folding::{blind_speeds, bracket_fold, centered_remainder, doppler_of, forward_fold};
pub use scalar::Scalar;
pub use solvers::{
    brute_force_oracle, robust_crt, search_retrieve, solve_case1, solve_case2, theorem1_solve, AmbiguityIntegers,
    FoldedObservation, Method, RetrievalResult, WavelengthIntegers,
};
pub use system::{
    azimuth_shift, classify_case, classify_target_type, max_azimuth_shift, sweep_determinable_size, unambiguous_range,
    velocity_resolution, CaseId, Interval, RadarConfig, SystemCase, TargetMotion, TargetType,
};

pub use folding::{FoldResult, ModulusPair};

/// Default real scalar.
pub type Real = f64;
/// Exact scalar for commensurability-sensitive work.
pub type Exact = num_rational::Rational64;

pub type FoldResult64 = FoldResult<Real>;
pub type ExactFoldResult = FoldResult<Exact>;
pub type ModulusPair64 = ModulusPair<Real>;
pub type ExactModulusPair = ModulusPair<Exact>;
