//! A numerical laboratory for periodic shadowing in discrete dynamical systems.
//!
//! The crate builds periodic pseudotrajectories (including the staircase
//! witnesses that defeat Lipschitz shadowing at non-hyperbolic fixed points),
//! finds exact periodic orbits that shadow them, measures Lipschitz shadowing
//! constants, and analyses the hyperbolicity of periodic orbits.
//!
//! Modules:
//!
//! - [`systems`]: invertible maps on flat phase spaces (toral automorphisms,
//!   perturbed toral maps, Jordan-block local models, linear maps).
//! - [`pseudo`]: periodic pseudotrajectories and every witness construction.
//! - [`shadow`]: the cyclic Newton shadowing solver, linear oracles and
//!   Lipschitz scans.
//! - [`hyperbolicity`]: monodromy, multipliers, stable/unstable splittings,
//!   expansion certificates and exact periodic-point enumeration.

// `!(x < limit)` is used on purpose so that NaN fails every check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod hyperbolicity;
pub mod lattice;
pub mod linalg;
pub mod pseudo;
pub mod shadow;
pub mod systems;

pub use hyperbolicity::{
    analyze_periodic_orbit, enumerate_periodic_points_toral, expansion_sequences,
    extract_uniform_constants, subspace_angle, verify_growth_bound, ExpansionCertificate,
    ExpansionData, HyperbolicityConstants, HyperbolicityError, PeriodicOrbitRecord, RationalPoint,
    SplittingAngles,
};
pub use pseudo::{
    defect, expansion_witness, splice_cycle, witness_eigenvalue_one, witness_jordan,
    witness_jordan_general, witness_rotation, PeriodicPseudotrajectory, PseudoError, Witness,
    WitnessKind, WitnessMeta,
};
pub use shadow::{
    closed_form_linear_shadow, direct_shadow_lower_bound, find_periodic_shadow, lipschitz_scan,
    theoretical_linear_lipschitz_bound, verify_periodicity_by_expansivity, LipschitzScan,
    ShadowError, ShadowOptions, ShadowSolution,
};
pub use systems::{
    evaluate, orbit_segment, DiscreteSystem, JordanBlock, JordanModel, LinearMap, PerturbedToral,
    PhaseSpace, Point, SystemError, ToralAutomorphism,
};
