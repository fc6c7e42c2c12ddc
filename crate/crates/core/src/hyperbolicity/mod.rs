//! Hyperbolicity of periodic orbits: monodromy and multipliers, the
//! stable/unstable splitting along the orbit, expansion certificates along
//! unstable vectors, uniform constants, and exact enumeration of periodic
//! points of toral automorphisms.

mod constants;
mod enumerate;
mod expansion;
mod orbit;
mod report;

use thiserror::Error;

use crate::systems::SystemError;

pub use constants::{extract_uniform_constants, HyperbolicityConstants, VECTOR_SAMPLES};
pub use enumerate::{enumerate_periodic_points_toral, periodic_point_count, RationalPoint};
pub use expansion::{
    expansion_sequences, verify_growth_bound, ExpansionCertificate, ExpansionData,
    TELESCOPING_TOLERANCE,
};
pub use orbit::{
    analyze_periodic_orbit, subspace_angle, PeriodicOrbitRecord, SplittingAngles,
    PERIODICITY_TOLERANCE, UNIT_MODULUS_BAND,
};
pub use report::{report_csv, report_text, OrbitReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperbolicityError {
    #[error("not-periodic: dist(f^{period}(p), p) = {gap:e}")]
    NotPeriodic { period: usize, gap: f64 },
    #[error("nonhyperbolic-orbit: monodromy has a multiplier on the unit circle")]
    Nonhyperbolic,
    #[error("vector-not-unstable: relative distance {residual:e} from the unstable subspace")]
    VectorNotUnstable { residual: f64 },
    #[error("telescoping check failed: a_m = {a_m:e}")]
    Telescoping { a_m: f64 },
    #[error("empty-input: {0}")]
    EmptyInput(&'static str),
    #[error("fitted contraction rate {lambda} is not below 1")]
    NotContracting { lambda: f64 },
    #[error("degenerate: det(M^m - I) = 0")]
    Degenerate,
    #[error("integer overflow computing M^{0}")]
    Overflow(usize),
    #[error("invariant subspace computation failed")]
    Splitting,
    #[error(transparent)]
    System(#[from] SystemError),
}
