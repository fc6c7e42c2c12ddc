//! Periodic corrections along an unstable vector of a hyperbolic orbit.
//!
//! Given the expansion data `lambda_i, tau, a_i, e_i` of a period-`m` orbit
//! `p_i`, the correction sequence is
//!
//! - `w_i = a_i e_i` for `i < m`,
//! - `w_m = B^-n tau e_0`,
//! - `w_{m+1+i} = A_{i mod m} w_{m+i}`,
//!
//! which is `m(n+1)`-periodic because `B^n w_m = tau e_0 = w_0`. Every step
//! satisfies `|w_{i+1} - A_i w_i| < 2`, so `x_i = p_i + d w_i` is a periodic
//! pseudotrajectory with defect about `2d` that is shadowed by `p_i` itself.

use nalgebra::DMatrix;

use super::{PeriodicPseudotrajectory, PseudoError, Witness, WitnessKind, WitnessMeta};
use crate::hyperbolicity::{analyze_periodic_orbit, expansion_sequences, ExpansionData};
use crate::systems::{DiscreteSystem, Point};

/// Largest number of monodromy pullbacks tried.
pub const MAX_PULLBACK: usize = 1000;

#[derive(Debug, Clone)]
pub struct ExpansionWitness {
    pub witness: Witness,
    pub data: ExpansionData,
    /// The underlying orbit `p_0..p_{m-1}`.
    pub orbit: Vec<Point>,
    /// `w_0..w_{Q-1}`.
    pub corrections: Vec<Point>,
    pub n_pullback: usize,
    /// `max_i |w_{(i+1) mod Q} - A_i w_i|`.
    pub max_step_gap: f64,
}

/// Builds the correction pseudotrajectory for the period-`m` orbit of `p`.
///
/// `n` is the smallest pullback count (starting from `n_start`, default 1)
/// with `|B^-n tau e_0| < 1`.
pub fn expansion_witness<S: DiscreteSystem + ?Sized>(
    sys: &S,
    p: &Point,
    m: usize,
    v_u: &Point,
    d: f64,
    n_start: Option<usize>,
) -> Result<ExpansionWitness, PseudoError> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(PseudoError::ConstraintViolated(format!(
            "step d must be positive, got {d}"
        )));
    }
    let record = analyze_periodic_orbit(sys, p, m)?;
    if !record.hyperbolic {
        return Err(PseudoError::NonhyperbolicOrbit);
    }
    let data = expansion_sequences(&record, v_u)?;
    let binv: DMatrix<f64> = record
        .monodromy
        .clone()
        .try_inverse()
        .ok_or(PseudoError::NonhyperbolicOrbit)?;

    let start = n_start.unwrap_or(1).max(1);
    let mut pulled = data.directions[0].clone() * data.tau;
    for _ in 0..start {
        pulled = &binv * pulled;
    }
    let mut n = start;
    while !(pulled.norm() < 1.0) {
        if n >= MAX_PULLBACK {
            return Err(PseudoError::PullbackFailed {
                tries: MAX_PULLBACK,
            });
        }
        pulled = &binv * pulled;
        n += 1;
    }

    let q = m * (n + 1);
    let mut w: Vec<Point> = (0..m).map(|i| &data.directions[i] * data.a[i]).collect();
    w.push(pulled);
    for i in 0..q - m - 1 {
        let next = &record.jacobians[i % m] * &w[m + i];
        w.push(next);
    }
    let max_step_gap = (0..q)
        .map(|i| (&w[(i + 1) % q] - &record.jacobians[i % m] * &w[i]).norm())
        .fold(0.0, f64::max);
    if !(max_step_gap < 2.0) {
        return Err(PseudoError::ConstraintViolated(format!(
            "correction step gap {max_step_gap} is not below 2"
        )));
    }

    let space = sys.space();
    let points: Vec<Point> = (0..q)
        .map(|i| space.translate(&record.orbit[i % m], &(&w[i] * d)))
        .collect();
    let pseudo = PeriodicPseudotrajectory::measure(sys, points)?;
    let mut meta = WitnessMeta::new(WitnessKind::UnstableCorrection, q);
    meta.d = Some(d);
    meta.m = Some(m);
    meta.n_pullback = Some(n);
    let closure = pseudo.points()[0].clone();
    Ok(ExpansionWitness {
        witness: Witness {
            pseudo,
            meta,
            closure,
        },
        data,
        orbit: record.orbit,
        corrections: w,
        n_pullback: n,
        max_step_gap,
    })
}
