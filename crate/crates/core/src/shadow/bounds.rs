use super::ShadowError;
use crate::pseudo::PeriodicPseudotrajectory;
use crate::systems::{orbit_segment, DiscreteSystem, JordanBlock, JordanModel, Point};

/// Distance below which `f^mu(p)` is taken to equal `p`.
const RETURN_TOLERANCE: f64 = 1e-8;

/// A lower bound on the shadowing distance of `xi` by any periodic orbit of
/// a linear real Jordan model.
///
/// On a real Jordan chain with eigenvalue `s = +-1` the top coordinate obeys
/// `w_{k+1} = s w_k` and the one below it `u_{k+1} = s u_k + w_k`, so
/// `u_k = s^k (u_0 + k s w_0)`. Periodicity forces `w = 0`. Every periodic
/// orbit therefore has zero top chain coordinate, and any shadow is at
/// least `max_k |x_k^(top)|` away.
pub fn direct_shadow_lower_bound(
    model: &JordanModel,
    xi: &PeriodicPseudotrajectory,
) -> Result<f64, ShadowError> {
    let size = match model.block() {
        JordanBlock::Real { size, .. } if size >= 2 => size,
        other => {
            return Err(ShadowError::Inapplicable(format!(
                "lower bound needs a real Jordan block of size at least 2, got {other:?}"
            )))
        }
    };
    if !model.is_linear() {
        return Err(ShadowError::Inapplicable(
            "lower bound is only proven for the linear model (c = 0)".into(),
        ));
    }
    Ok(xi
        .points()
        .iter()
        .map(|p| p[size - 1].abs())
        .fold(0.0, f64::max))
}

/// Finite-window surrogate for the expansivity argument: true iff
/// `dist(f^mu(p), p) <= 1e-8` and the orbits of `p` and `q = f^mu(p)` stay
/// within `a` of each other for `|i| <= window`.
///
/// This is a numerical check over a finite window, not a proof.
pub fn verify_periodicity_by_expansivity<S: DiscreteSystem + ?Sized>(
    sys: &S,
    p: &Point,
    mu: usize,
    a: f64,
    window: usize,
) -> bool {
    let w = window as i64;
    let mu_i = mu as i64;
    let Ok(seg) = orbit_segment(sys, p, -w, w + mu_i) else {
        return false;
    };
    let space = sys.space();
    let at = |i: i64| &seg[(i + w) as usize];
    if !(space.dist(at(mu_i), p) <= RETURN_TOLERANCE) {
        return false;
    }
    (-w..=w).all(|i| space.dist(at(i + mu_i), at(i)) <= a)
}
