//! Invertible maps on flat phase spaces and the built-in example systems.
//!
//! Every consumer in the crate works against the [`DiscreteSystem`] trait:
//! a diffeomorphism `f` with its inverse and both Jacobians. Systems are
//! immutable after construction and evaluation is pure, so a single system
//! can be shared freely between threads.

mod jordan;
mod linear;
mod sampling;
mod space;
mod toral;

use nalgebra::DMatrix;
use thiserror::Error;

pub use jordan::{JordanBlock, JordanModel};
pub use linear::LinearMap;
pub use sampling::{halton, halton_points};
pub use space::{PhaseSpace, Point};
pub use toral::{PerturbedToral, ToralAutomorphism};

/// Default number of low-discrepancy samples used to estimate `sup ||Df||`.
pub const DEFAULT_NORM_SAMPLES: usize = 10_000;

/// Largest `|k|` accepted by [`evaluate`].
pub const MAX_ITERATES: i64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("orbit-escape: point left the bounding box at step {step}")]
    OrbitEscape { step: i64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("iterate count {k} exceeds the limit of {MAX_ITERATES}")]
    TooManyIterates { k: i64 },
    #[error("invalid system: {0}")]
    Invalid(String),
}

/// An invertible map on a flat phase space.
pub trait DiscreteSystem: Send + Sync + std::fmt::Debug {
    fn space(&self) -> &PhaseSpace;

    /// `f(x)`, wrapped into the fundamental domain on the torus.
    fn forward(&self, x: &Point) -> Point;

    /// `f^{-1}(x)`.
    fn inverse(&self, x: &Point) -> Point;

    /// `Df(x)`.
    fn jacobian(&self, x: &Point) -> DMatrix<f64>;

    /// `D(f^{-1})(x) = Df(f^{-1}(x))^{-1}`.
    fn jacobian_inverse(&self, x: &Point) -> DMatrix<f64> {
        let n = self.space().dim();
        self.jacobian(&self.inverse(x))
            .try_inverse()
            .unwrap_or_else(|| DMatrix::from_element(n, n, f64::NAN))
    }

    /// `sup_x ||Df(x)||`, exact for linear systems and sampled otherwise.
    fn norm_bound(&self) -> f64 {
        estimate_norm_bound(self, DEFAULT_NORM_SAMPLES)
    }

    /// The constant Jacobian when the map is globally linear (`x -> Ax`,
    /// reduced mod 1 on the torus).
    fn linear_part(&self) -> Option<DMatrix<f64>> {
        None
    }

    fn dim(&self) -> usize {
        self.space().dim()
    }
}

/// `f^k(x)`; negative `k` iterates the inverse.
pub fn evaluate<S: DiscreteSystem + ?Sized>(
    sys: &S,
    x: &Point,
    k: i64,
) -> Result<Point, SystemError> {
    check_dim(sys, x)?;
    if k.abs() > MAX_ITERATES {
        return Err(SystemError::TooManyIterates { k });
    }
    let space = sys.space();
    let mut y = x.clone();
    let sign = k.signum();
    for step in 1..=k.abs() {
        y = if sign > 0 {
            sys.forward(&y)
        } else {
            sys.inverse(&y)
        };
        if !space.is_torus() && !space.contains(&y) {
            return Err(SystemError::OrbitEscape { step: sign * step });
        }
    }
    Ok(y)
}

/// `(f^i(x))` for `i = from..=to`.
///
/// Negative indices are produced by iterating the inverse from `x`, so each
/// entry agrees bit-for-bit with `evaluate(sys, x, i)`.
pub fn orbit_segment<S: DiscreteSystem + ?Sized>(
    sys: &S,
    x: &Point,
    from: i64,
    to: i64,
) -> Result<Vec<Point>, SystemError> {
    check_dim(sys, x)?;
    if from > to {
        return Err(SystemError::Invalid(format!(
            "orbit segment bounds reversed: {from} > {to}"
        )));
    }
    if from.abs() > MAX_ITERATES || to.abs() > MAX_ITERATES {
        return Err(SystemError::TooManyIterates {
            k: from.abs().max(to.abs()),
        });
    }
    let space = sys.space();
    let escaped = |y: &Point| !space.is_torus() && !space.contains(y);

    let mut backward = Vec::new();
    if from < 0 {
        let mut y = x.clone();
        for step in 1..=(-from) {
            y = sys.inverse(&y);
            if escaped(&y) {
                return Err(SystemError::OrbitEscape { step: -step });
            }
            if -step <= to {
                backward.push(y.clone());
            }
        }
        backward.reverse();
    }

    let mut out = backward;
    if to >= 0 {
        let mut y = x.clone();
        if from <= 0 {
            out.push(y.clone());
        }
        for step in 1..=to {
            y = sys.forward(&y);
            if escaped(&y) {
                return Err(SystemError::OrbitEscape { step });
            }
            if step >= from {
                out.push(y.clone());
            }
        }
    }
    Ok(out)
}

/// Largest spectral norm of `Df` over a deterministic Halton sample of the space.
pub fn estimate_norm_bound<S: DiscreteSystem + ?Sized>(sys: &S, samples: usize) -> f64 {
    if let Some(a) = sys.linear_part() {
        return spectral_norm(&a);
    }
    let space = sys.space();
    halton_points(space.dim(), samples.max(1))
        .map(|u| spectral_norm(&sys.jacobian(&space.point_in_unit_cube(&u))))
        .fold(0.0, f64::max)
}

pub(crate) fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().max()
}

fn check_dim<S: DiscreteSystem + ?Sized>(sys: &S, x: &Point) -> Result<(), SystemError> {
    if x.len() != sys.dim() {
        return Err(SystemError::DimensionMismatch {
            expected: sys.dim(),
            found: x.len(),
        });
    }
    Ok(())
}
