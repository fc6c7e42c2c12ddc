use nalgebra::DMatrix;

use super::ShadowError;
use crate::linalg::{solve_cyclic, CyclicSolveError};
use crate::pseudo::PeriodicPseudotrajectory;
use crate::systems::{DiscreteSystem, Point};

/// Two orbit points closer than this are treated as equal when detecting
/// the minimal period.
pub const MINIMAL_PERIOD_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowOptions {
    pub max_iterations: usize,
    /// Step-length factor applied when a full Newton step does not reduce
    /// the residual.
    pub step_damping: f64,
    /// Convergence threshold on `max_i |z_{i+1} - f(z_i)|`.
    pub tolerance: f64,
    /// Step-length reductions tried per iteration.
    pub max_halvings: usize,
}

impl Default for ShadowOptions {
    fn default() -> Self {
        ShadowOptions {
            max_iterations: 100,
            step_damping: 0.5,
            tolerance: 1e-10,
            max_halvings: 40,
        }
    }
}

/// A period-`Q` orbit found near a pseudotrajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowSolution {
    pub orbit_point: Point,
    pub period: usize,
    pub orbit: Vec<Point>,
    /// `max_i dist(orbit[i], x_i)`.
    pub sup_distance: f64,
    /// `sup_distance / defect`; zero when both vanish.
    pub ratio: f64,
    pub converged: bool,
    /// `max_i dist(f(orbit[i]), orbit[(i+1) mod Q])`.
    pub residual: f64,
    pub iterations: usize,
    /// Smallest divisor `mu` of `Q` with `orbit[i + mu] = orbit[i]`.
    pub minimal_period: usize,
}

fn residuals<S: DiscreteSystem + ?Sized>(sys: &S, z: &[Point]) -> (Vec<Point>, f64) {
    let q = z.len();
    let space = sys.space();
    let g: Vec<Point> = (0..q)
        .map(|i| space.displacement(&sys.forward(&z[i]), &z[(i + 1) % q]))
        .collect();
    let worst = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
    (g, worst)
}

/// Damped Newton iteration on `G_i(z) = z_{(i+1) mod Q} - f(z_i)`, started
/// at the pseudotrajectory itself.
///
/// Each step solves the cyclic linearisation
/// `dz_{i+1} - Df(z_i) dz_i = -G_i` exactly and backtracks by
/// `step_damping` until the sup residual decreases.
pub fn find_periodic_shadow<S: DiscreteSystem + ?Sized>(
    sys: &S,
    xi: &PeriodicPseudotrajectory,
    opts: &ShadowOptions,
) -> Result<ShadowSolution, ShadowError> {
    if !(opts.step_damping > 0.0 && opts.step_damping < 1.0) {
        return Err(ShadowError::Shape("step damping must lie in (0, 1)".into()));
    }
    let space = sys.space();
    let mut z: Vec<Point> = xi.points().to_vec();
    let (mut g, mut res) = residuals(sys, &z);
    let mut iterations = 0;

    while res > opts.tolerance && iterations < opts.max_iterations {
        iterations += 1;
        let jac: Vec<DMatrix<f64>> = z.iter().map(|p| sys.jacobian(p)).collect();
        let rhs: Vec<Point> = g.iter().map(|v| -v).collect();
        let step = solve_cyclic(&jac, &rhs).map_err(|e| match e {
            CyclicSolveError::Singular { block, rcond } => {
                ShadowError::SingularJacobian { block, rcond }
            }
            CyclicSolveError::Shape => ShadowError::Shape("inconsistent block sizes".into()),
        })?;

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<Point> = z
                .iter()
                .zip(&step)
                .map(|(p, s)| space.translate(p, &(s * t)))
                .collect();
            let in_space = space.is_torus() || trial.iter().all(|p| space.contains(p));
            if in_space {
                let (tg, tres) = residuals(sys, &trial);
                if tres < res {
                    accepted = Some((trial, tg, tres));
                    break;
                }
            }
            t *= opts.step_damping;
        }
        match accepted {
            Some((trial, tg, tres)) => {
                z = trial;
                g = tg;
                res = tres;
            }
            None => break,
        }
    }

    let solution = finish(sys, xi, z, res, iterations, res <= opts.tolerance);
    if solution.converged {
        Ok(solution)
    } else {
        Err(ShadowError::NoConvergence {
            best: Box::new(solution),
        })
    }
}

fn finish<S: DiscreteSystem + ?Sized>(
    sys: &S,
    xi: &PeriodicPseudotrajectory,
    z: Vec<Point>,
    residual: f64,
    iterations: usize,
    converged: bool,
) -> ShadowSolution {
    let space = sys.space();
    let q = z.len();
    let sup_distance = z
        .iter()
        .zip(xi.points())
        .map(|(a, b)| space.dist(a, b))
        .fold(0.0, f64::max);
    let defect = xi.defect();
    let ratio = if sup_distance == 0.0 {
        0.0
    } else {
        sup_distance / defect
    };
    let minimal_period = (1..=q)
        .filter(|mu| q.is_multiple_of(*mu))
        .find(|&mu| (0..q).all(|i| space.dist(&z[(i + mu) % q], &z[i]) <= MINIMAL_PERIOD_TOLERANCE))
        .unwrap_or(q);
    ShadowSolution {
        orbit_point: z[0].clone(),
        period: q,
        orbit: z,
        sup_distance,
        ratio,
        converged,
        residual,
        iterations,
        minimal_period,
    }
}
