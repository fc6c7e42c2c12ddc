//! Staircase pseudotrajectories at a non-hyperbolic fixed point.
//!
//! All constructions share one integer skeleton. For a unipotent chain
//! `n_{k+1}[i] = n_k[i] + n_k[i+1]` (last coordinate unchanged) we push the
//! top coordinate up by `+1` for `K` steps, then retire the coordinates one
//! at a time from the top down: while coordinate `j` is retired every
//! coordinate above it is already zero, so it only moves by the applied
//! `+-1` steps and reaches zero after exactly `|n[j]|` of them. The sequence
//! therefore closes up exactly at zero.
//!
//! The skeleton is mapped to phase-space points per block type:
//!
//! - real block with eigenvalue `s = +-1`: coordinate `j` of `y_k` is
//!   `s^(k+j) n_k[j] step`;
//! - rotation block: block `j` of `y_k` is `n_k[j] step R^(k - (l - j)) w`.
//!
//! In both cases `y_{k+1} - A y_k` is a single `+-step` impulse of norm
//! `step`, and `y_Q = 0 = y_0` bit-for-bit because the skeleton is integer.

use nalgebra::{DVector, Vector2};

use super::{PeriodicPseudotrajectory, PseudoError, Witness, WitnessKind, WitnessMeta};
use crate::systems::{JordanBlock, JordanModel, Point};

/// Longest staircase period accepted.
const MAX_PERIOD: usize = 10_000_000;

/// Integer skeleton of a staircase: `Q + 1` coefficient vectors, first and last zero.
#[derive(Debug, Clone, PartialEq)]
pub struct StaircaseCoefficients {
    pub coefficients: Vec<Vec<i64>>,
    /// Driving phase length followed by the retirement length of each
    /// coordinate, top coordinate first.
    pub phases: Vec<usize>,
}

impl StaircaseCoefficients {
    pub fn build(chain: usize, k: usize) -> Result<Self, PseudoError> {
        assert!(chain >= 1);
        let mut current = vec![0i64; chain];
        let mut coefficients = vec![current.clone()];
        let overflow = || PseudoError::ConstraintViolated("staircase coefficients overflow".into());

        let push = |coeffs: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>, j: usize, s: i64| {
            let mut next = cur.clone();
            for i in 0..chain - 1 {
                next[i] = cur[i].checked_add(cur[i + 1]).ok_or_else(overflow)?;
            }
            next[j] = next[j].checked_add(s).ok_or_else(overflow)?;
            *cur = next;
            coeffs.push(cur.clone());
            if coeffs.len() > MAX_PERIOD + 1 {
                return Err(PseudoError::ConstraintViolated(format!(
                    "staircase period exceeds {MAX_PERIOD}"
                )));
            }
            Ok(())
        };

        let mut phases = vec![k];
        for _ in 0..k {
            push(&mut coefficients, &mut current, chain - 1, 1)?;
        }
        for j in (0..chain).rev() {
            let count = current[j].unsigned_abs() as usize;
            let sign = -current[j].signum();
            phases.push(count);
            for _ in 0..count {
                push(&mut coefficients, &mut current, j, sign)?;
            }
        }
        debug_assert!(current.iter().all(|&c| c == 0));
        Ok(StaircaseCoefficients {
            coefficients,
            phases,
        })
    }

    pub fn period(&self) -> usize {
        self.coefficients.len() - 1
    }
}

/// Eigenvalue-one witness: `+d/2` steps along the neutral coordinate for `K`
/// steps, then `-d/2` steps for `K` more; period `2K`, peak `Kd/2`.
///
/// Requires a real Jordan block of size 1 and `K d < 2 a_ball`.
pub fn witness_eigenvalue_one(
    model: &JordanModel,
    d: f64,
    k: usize,
) -> Result<Witness, PseudoError> {
    check_step(d, k)?;
    match model.block() {
        JordanBlock::Real { size: 1, .. } => {}
        other => {
            return Err(PseudoError::WrongModel(format!(
                "eigenvalue-one witness needs a real block of size 1, got {other:?}"
            )))
        }
    }
    if k as f64 * d >= 2.0 * model.core_radius() {
        return Err(PseudoError::ConstraintViolated(format!(
            "K d = {} must stay below 2 a_ball = {}",
            k as f64 * d,
            2.0 * model.core_radius()
        )));
    }
    let mut w = real_staircase(model, d / 2.0, k, WitnessKind::EigenvalueOneStaircase)?;
    w.meta.d = Some(d);
    w.meta.y_max = w.meta.y_max.map(|y| y / 2.0);
    Ok(w)
}

/// Staircase on a real Jordan block of size 2: `K` steps of `+d e_2`, `K`
/// steps of `-d e_2`, then `Z_2(K)` steps of `-d e_1`.
///
/// The meta records `Z_1(K) = K(K-1)/2`, `Z_2(K) = K^2` and `Y`.
pub fn witness_jordan(model: &JordanModel, d: f64, k: usize) -> Result<Witness, PseudoError> {
    match model.block() {
        JordanBlock::Real { size: 2, .. } => witness_jordan_general(model, d, k),
        other => Err(PseudoError::WrongModel(format!(
            "Jordan witness needs a real block of size 2, got {other:?}"
        ))),
    }
}

/// Staircase on a real Jordan block of any size `l`: drive coordinate `l` to
/// `Kd`, then zero coordinates `l, l-1, ..., 1` in turn.
pub fn witness_jordan_general(
    model: &JordanModel,
    d: f64,
    k: usize,
) -> Result<Witness, PseudoError> {
    check_step(d, k)?;
    match model.block() {
        JordanBlock::Real { size, .. } => {
            real_staircase(model, d, k, WitnessKind::JordanStaircase(size))
        }
        other => Err(PseudoError::WrongModel(format!(
            "real Jordan witness needs a real block, got {other:?}"
        ))),
    }
}

/// Staircase on a rotation Jordan block: the top 2-plane is driven by
/// `d R^k w` for `K` steps (reaching norm `Kd`), unwound by `-d R^k w`, and
/// the lower planes are retired in the same top-down order. Every step has
/// norm exactly `d` because `R` is an isometry.
///
/// `w` defaults to `(1, 0)` and is normalised.
pub fn witness_rotation(
    model: &JordanModel,
    d: f64,
    k: usize,
    w: Option<[f64; 2]>,
) -> Result<Witness, PseudoError> {
    check_step(d, k)?;
    let JordanBlock::Rotation { size, angle } = model.block() else {
        return Err(PseudoError::WrongModel(format!(
            "rotation witness needs a rotation block, got {:?}",
            model.block()
        )));
    };
    let w = Vector2::from(w.unwrap_or([1.0, 0.0]));
    let norm = w.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(PseudoError::ConstraintViolated(
            "driving vector w must be nonzero".into(),
        ));
    }
    let w = w / norm;
    let skeleton = StaircaseCoefficients::build(size, k)?;
    let dim = model.matrix().nrows();
    let to_point = |index: usize, coeffs: &[i64]| -> Point {
        let mut y = DVector::zeros(dim);
        for (j, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let exponent = index as f64 - (size - j) as f64;
            let (s, co) = (exponent * angle).sin_cos();
            let scale = c as f64 * d;
            y[2 * j] = scale * (co * w[0] - s * w[1]) + 0.0;
            y[2 * j + 1] = scale * (s * w[0] + co * w[1]) + 0.0;
        }
        y
    };
    finish(
        model,
        d,
        k,
        skeleton,
        WitnessKind::RotationStaircase(size),
        to_point,
    )
}

fn real_staircase(
    model: &JordanModel,
    step: f64,
    k: usize,
    kind: WitnessKind,
) -> Result<Witness, PseudoError> {
    let JordanBlock::Real { size, eigenvalue } = model.block() else {
        unreachable!("caller checked the block type");
    };
    let skeleton = StaircaseCoefficients::build(size, k)?;
    let dim = model.matrix().nrows();
    let negative = eigenvalue < 0.0;
    // for s = -1 the chain is conjugated by diag((-1)^j) as well
    let to_point = |index: usize, coeffs: &[i64]| -> Point {
        let mut y = DVector::zeros(dim);
        for (j, &c) in coeffs.iter().enumerate() {
            let c = if negative && (index + j) % 2 == 1 {
                -c
            } else {
                c
            };
            y[j] = c as f64 * step + 0.0;
        }
        y
    };
    finish(model, step, k, skeleton, kind, to_point)
}

fn finish(
    model: &JordanModel,
    step: f64,
    k: usize,
    skeleton: StaircaseCoefficients,
    kind: WitnessKind,
    to_point: impl Fn(usize, &[i64]) -> Point,
) -> Result<Witness, PseudoError> {
    let q = skeleton.period();
    let points: Vec<Point> = skeleton.coefficients[..q]
        .iter()
        .enumerate()
        .map(|(i, c)| to_point(i, c))
        .collect();
    let closure = to_point(q, &skeleton.coefficients[q]);

    let radius = model.core_radius();
    let mut peak: f64 = 0.0;
    for (i, y) in points.iter().enumerate() {
        let r = y.norm();
        peak = peak.max(r);
        if r > radius {
            return Err(PseudoError::ConstraintViolated(format!(
                "point {i} has norm {r} outside the linear core ball of radius {radius}"
            )));
        }
        if model.nonlinear_term(y).norm() >= step {
            return Err(PseudoError::ConstraintViolated(format!(
                "nonlinear term at point {i} is not below the step size"
            )));
        }
    }

    let mut meta = WitnessMeta::new(kind, q);
    meta.d = Some(step);
    meta.k = Some(k);
    meta.y_max = Some(peak / step);
    meta.phases = skeleton.phases.clone();
    if skeleton.coefficients[0].len() == 2 {
        meta.z1 = Some(skeleton.coefficients[k][0]);
        meta.z2 = Some(skeleton.coefficients[2 * k][0]);
    }
    let pseudo = PeriodicPseudotrajectory::measure(model, points)?;
    Ok(Witness {
        pseudo,
        meta,
        closure,
    })
}

fn check_step(d: f64, k: usize) -> Result<(), PseudoError> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(PseudoError::ConstraintViolated(format!(
            "step d must be positive, got {d}"
        )));
    }
    if k == 0 {
        return Err(PseudoError::ConstraintViolated(
            "K must be at least 1".into(),
        ));
    }
    Ok(())
}
