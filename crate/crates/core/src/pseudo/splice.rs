//! Periodic pseudotrajectories made by concatenating exact orbit segments.

use nalgebra::{DMatrix, Matrix2, Vector2};

use super::{PeriodicPseudotrajectory, PseudoError, WitnessKind, WitnessMeta};
use crate::systems::{orbit_segment, DiscreteSystem, Point, ToralAutomorphism};

/// Largest interior gap accepted inside a segment.
pub const ORBIT_GAP_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Splice {
    pub pseudo: PeriodicPseudotrajectory,
    pub meta: WitnessMeta,
    /// `dist(f(last of segment k), first of segment k+1)`, cyclically.
    pub junction_gaps: Vec<f64>,
}

/// Concatenates orbit segments into one period. The defect is then the
/// largest junction gap, since interior gaps vanish up to iteration error.
pub fn splice_cycle<S: DiscreteSystem + ?Sized>(
    sys: &S,
    segments: &[Vec<Point>],
) -> Result<Splice, PseudoError> {
    if segments.is_empty() {
        return Err(PseudoError::Empty("splice needs at least one segment"));
    }
    if segments.iter().any(|s| s.is_empty()) {
        return Err(PseudoError::Empty("splice segments must be nonempty"));
    }
    let space = sys.space();
    for (k, seg) in segments.iter().enumerate() {
        for (i, pair) in seg.windows(2).enumerate() {
            let gap = space.dist(&sys.forward(&pair[0]), &pair[1]);
            if !(gap <= ORBIT_GAP_TOLERANCE) {
                return Err(PseudoError::NotAnOrbit {
                    segment: k,
                    index: i,
                    gap,
                });
            }
        }
    }
    let count = segments.len();
    let junction_gaps = (0..count)
        .map(|k| {
            let last = segments[k].last().expect("nonempty");
            let next = &segments[(k + 1) % count][0];
            space.dist(&sys.forward(last), next)
        })
        .collect();
    let points: Vec<Point> = segments.iter().flatten().cloned().collect();
    let pseudo = PeriodicPseudotrajectory::measure(sys, points)?;
    let mut meta = WitnessMeta::new(WitnessKind::Splice, pseudo.period());
    meta.segment_lengths = segments.iter().map(Vec::len).collect();
    Ok(Splice {
        pseudo,
        meta,
        junction_gaps,
    })
}

/// Unit eigenvectors `(e_u, e_s)` of a hyperbolic 2x2 matrix with real
/// eigenvalues, unstable first.
fn eigenlines(a: &DMatrix<f64>) -> Option<(Vector2<f64>, Vector2<f64>)> {
    let (p, q, r, s) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let tr = p + s;
    let disc = tr * tr / 4.0 - (p * s - q * r);
    if disc <= 0.0 {
        return None;
    }
    let root = disc.sqrt();
    let (lu, ls) = if tr >= 0.0 {
        (tr / 2.0 + root, tr / 2.0 - root)
    } else {
        (tr / 2.0 - root, tr / 2.0 + root)
    };
    if !(lu.abs() > 1.0 && ls.abs() < 1.0) {
        return None;
    }
    let vec = |l: f64| -> Vector2<f64> {
        let v = if q.abs() >= r.abs() && q != 0.0 {
            Vector2::new(q, l - p)
        } else {
            Vector2::new(l - s, r)
        };
        v.normalize()
    };
    Some((vec(lu), vec(ls)))
}

/// A transverse homoclinic point of the fixed point `0` of a hyperbolic 2x2
/// toral automorphism: `h = t e_u mod 1` where `t e_u - s e_s = (1, 0)`, so
/// `h` lies on the unstable line of `0` and, one lattice translate away, on
/// its stable line.
pub fn homoclinic_point(sys: &ToralAutomorphism) -> Result<Point, PseudoError> {
    if sys.dim() != 2 {
        return Err(PseudoError::WrongModel(
            "homoclinic point needs a 2x2 automorphism".into(),
        ));
    }
    let (eu, es) = eigenlines(sys.real_matrix()).ok_or_else(|| {
        PseudoError::WrongModel("automorphism needs real eigenvalues off the unit circle".into())
    })?;
    let m = Matrix2::from_columns(&[eu, -es]);
    let ts = m
        .lu()
        .solve(&Vector2::new(1.0, 0.0))
        .ok_or_else(|| PseudoError::WrongModel("eigenlines are parallel".into()))?;
    Ok(sys
        .space()
        .wrap(Point::from_column_slice((eu * ts[0]).as_slice())))
}

/// One-cycle splice at the fixed point `0`: `dwell` copies of the fixed
/// point followed by the homoclinic orbit segment `f^-j(h)..f^(k-1)(h)`.
/// Both junction gaps shrink geometrically as `j` and `k` grow.
pub fn homoclinic_splice(
    sys: &ToralAutomorphism,
    dwell: usize,
    j: usize,
    k: usize,
) -> Result<Splice, PseudoError> {
    if dwell == 0 || k == 0 {
        return Err(PseudoError::ConstraintViolated(
            "dwell and k must be positive".into(),
        ));
    }
    let h = homoclinic_point(sys)?;
    let fixed = vec![Point::zeros(2); dwell];
    let excursion = orbit_segment(sys, &h, -(j as i64), k as i64 - 1)?;
    splice_cycle(sys, &[fixed, excursion])
}
