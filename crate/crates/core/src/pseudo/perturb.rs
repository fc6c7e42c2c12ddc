//! Random periodic pseudotrajectories near a true periodic orbit.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{PeriodicPseudotrajectory, PseudoError};
use crate::linalg::solve_cyclic;
use crate::systems::{DiscreteSystem, Point};

/// A uniform sample from the closed ball of radius `radius` in `R^n`.
fn ball_sample(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Point {
    loop {
        let v = Point::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 0.0 {
            let r = radius * rng.random::<f64>().powf(1.0 / n as f64);
            return v * (r / norm);
        }
    }
}

/// `x_i = p_i + eta_i` with `eta_i` uniform in the ball of radius `d`.
///
/// The points are generated as `d` times a seed-determined unit pattern, so
/// the same seed at different `d` gives geometrically similar sequences.
pub fn perturb_orbit<S: DiscreteSystem + ?Sized>(
    sys: &S,
    orbit: &[Point],
    d: f64,
    seed: u64,
) -> Result<PeriodicPseudotrajectory, PseudoError> {
    check(orbit, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = sys.dim();
    let space = sys.space();
    let points = orbit
        .iter()
        .map(|p| space.translate(p, &(ball_sample(&mut rng, n, 1.0) * d)))
        .collect();
    PeriodicPseudotrajectory::measure(sys, points)
}

/// A pseudotrajectory whose linearised gaps are prescribed: random gaps
/// `g_i` uniform in the ball of radius `d` are fed through the cyclic
/// linearisation `z_{i+1} = Df(p_i) z_i + g_i` around the orbit and
/// `x_i = p_i + z_i`. On a linear system the measured gaps are exactly `g_i`
/// up to rounding, so the defect is `max |g_i| <= d`.
pub fn perturb_orbit_along_gaps<S: DiscreteSystem + ?Sized>(
    sys: &S,
    orbit: &[Point],
    d: f64,
    seed: u64,
) -> Result<PeriodicPseudotrajectory, PseudoError> {
    check(orbit, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = sys.dim();
    let gaps: Vec<Point> = (0..orbit.len())
        .map(|_| ball_sample(&mut rng, n, 1.0))
        .collect();
    let jacobians: Vec<DMatrix<f64>> = orbit.iter().map(|p| sys.jacobian(p)).collect();
    let z = solve_cyclic(&jacobians, &gaps).map_err(|_| PseudoError::NonhyperbolicOrbit)?;
    let space = sys.space();
    let points = orbit
        .iter()
        .zip(&z)
        .map(|(p, zi)| space.translate(p, &(zi * d)))
        .collect();
    PeriodicPseudotrajectory::measure(sys, points)
}

fn check(orbit: &[Point], d: f64) -> Result<(), PseudoError> {
    if orbit.is_empty() {
        return Err(PseudoError::Empty("orbit"));
    }
    if !(d >= 0.0 && d.is_finite()) {
        return Err(PseudoError::ConstraintViolated(format!(
            "noise level must be finite and nonnegative, got {d}"
        )));
    }
    Ok(())
}
