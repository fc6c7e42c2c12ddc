//! Exact periodic orbits near periodic pseudotrajectories, linear oracles
//! and Lipschitz scans.

mod bounds;
mod linear;
mod newton;
mod scan;

use thiserror::Error;

use crate::pseudo::PseudoError;
use crate::systems::SystemError;

pub use bounds::{direct_shadow_lower_bound, verify_periodicity_by_expansivity};
pub use linear::{
    closed_form_linear_shadow, theoretical_linear_lipschitz_bound, MAX_RESOLVENT_NORM,
};
pub use newton::{find_periodic_shadow, ShadowOptions, ShadowSolution, MINIMAL_PERIOD_TOLERANCE};
pub use scan::{
    lipschitz_scan, ExactOrbitFamily, JordanWitnessFamily, LipschitzScan, NoiseMode,
    PerturbedOrbitFamily, PseudoFamily, ScanRow,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShadowError {
    #[error("no-convergence after {} iterations (residual {:e})", best.iterations, best.residual)]
    NoConvergence { best: Box<ShadowSolution> },
    #[error("singular-jacobian: cyclic linearisation is numerically singular at block {block} (rcond {rcond:e})")]
    SingularJacobian { block: usize, rcond: f64 },
    #[error("nonhyperbolic-monodromy: resolvent norm {norm:e} exceeds the limit")]
    NonhyperbolicMonodromy { norm: f64 },
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("invalid scan: {0}")]
    InvalidScan(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Pseudo(#[from] PseudoError),
    #[error(transparent)]
    System(#[from] SystemError),
}
