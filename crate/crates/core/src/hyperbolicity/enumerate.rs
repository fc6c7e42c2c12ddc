use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::HyperbolicityError;
use crate::lattice::{self, IntMatrix};
use crate::systems::Point;

/// A point of `[0, 1)^n` with rational coordinates `numerators / denominator`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint {
    pub numerators: Vec<i128>,
    pub denominator: i128,
}

impl RationalPoint {
    pub fn to_point(&self) -> Point {
        Point::from_iterator(
            self.numerators.len(),
            self.numerators
                .iter()
                .map(|&a| a as f64 / self.denominator as f64),
        )
    }

    /// Same point with every coordinate in lowest terms over a shared
    /// denominator.
    pub fn reduced(&self) -> RationalPoint {
        let g = self
            .numerators
            .iter()
            .fold(self.denominator, |g, &a| gcd(g, a));
        RationalPoint {
            numerators: self.numerators.iter().map(|a| a / g).collect(),
            denominator: self.denominator / g,
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        write!(f, "(")?;
        for (i, a) in r.numerators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if *a == 0 || r.denominator == 1 {
                write!(f, "{a}")?;
            } else {
                let g = gcd(*a, r.denominator);
                write!(f, "{}/{}", a / g, r.denominator / g)?;
            }
        }
        write!(f, ")")
    }
}

/// `|det(M^m - I)|`, the number of points fixed by `M^m` on the torus.
pub fn periodic_point_count(matrix: &DMatrix<i64>, m: usize) -> Result<i128, HyperbolicityError> {
    let a = power_minus_identity(matrix, m)?;
    Ok(lattice::determinant(&a).abs())
}

/// Every solution of `(M^m - I) x = 0 (mod 1)` in `[0, 1)^n`, in
/// lexicographic order, over the common denominator `s_n` (the largest
/// Smith invariant of `M^m - I`).
///
/// With `L (M^m - I) R = diag(s_1..s_n)` the solutions are exactly
/// `x = R y mod 1` with `y_i` in `{0, 1/s_i, .., (s_i - 1)/s_i}`. Every
/// returned point is re-verified in integer arithmetic.
pub fn enumerate_periodic_points_toral(
    matrix: &DMatrix<i64>,
    m: usize,
) -> Result<Vec<RationalPoint>, HyperbolicityError> {
    let a = power_minus_identity(matrix, m)?;
    if lattice::determinant(&a) == 0 {
        return Err(HyperbolicityError::Degenerate);
    }
    let n = a.nrows();
    let smith = lattice::smith_normal_form(&a);
    let s = &smith.diagonal;
    let denom = *s.last().expect("nonempty matrix");
    let count: i128 = s.iter().product();

    let count = u64::try_from(count).map_err(|_| HyperbolicityError::Overflow(m))?;
    let mut points: Vec<RationalPoint> = (0..count)
        .into_par_iter()
        .map(|index| {
            let mut index = i128::from(index);
            // mixed-radix digits t_i in 0..s_i, scaled to the common denominator
            let mut y = vec![0i128; n];
            for (i, si) in s.iter().enumerate() {
                y[i] = (index % si) * (denom / si);
                index /= si;
            }
            let numerators: Vec<i128> = (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| smith.right[(r, c)] * y[c])
                        .sum::<i128>()
                        .rem_euclid(denom)
                })
                .collect();
            RationalPoint {
                numerators,
                denominator: denom,
            }
        })
        .collect();
    points.par_sort_unstable();

    for p in &points {
        for r in 0..n {
            let v: i128 = (0..n).map(|c| a[(r, c)] * p.numerators[c]).sum();
            assert_eq!(
                v.rem_euclid(denom),
                0,
                "enumerated point {p} is not periodic"
            );
        }
    }
    Ok(points)
}

fn power_minus_identity(matrix: &DMatrix<i64>, m: usize) -> Result<IntMatrix, HyperbolicityError> {
    if m == 0 {
        return Err(HyperbolicityError::EmptyInput("period must be positive"));
    }
    let n = matrix.nrows();
    let power = lattice::checked_pow(&lattice::widen(matrix), m as u32)
        .ok_or(HyperbolicityError::Overflow(m))?;
    Ok(power - IntMatrix::identity(n, n))
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn cat() -> DMatrix<i64> {
        DMatrix::from_row_slice(2, 2, &[2, 1, 1, 1])
    }

    /// Scans the grid `k / D`, `D = |det(M^m - I)|`, which contains every
    /// solution because `adj(A) A = det(A) I`.
    fn brute_force(matrix: &DMatrix<i64>, m: usize) -> BTreeSet<Vec<i128>> {
        let a = power_minus_identity(matrix, m).unwrap();
        let d = lattice::determinant(&a).abs();
        let mut out = BTreeSet::new();
        for i in 0..d {
            for j in 0..d {
                let ok = (0..2).all(|r| (a[(r, 0)] * i + a[(r, 1)] * j).rem_euclid(d) == 0);
                if ok {
                    out.insert(vec![i, j]);
                }
            }
        }
        out
    }

    #[test]
    fn cat_fixed_point() {
        let pts = enumerate_periodic_points_toral(&cat(), 1).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].to_point(), Point::zeros(2));
    }

    #[test]
    fn cat_counts_follow_lucas_numbers() {
        let expected = [1, 5, 16, 45, 121, 320, 841, 2205];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(periodic_point_count(&cat(), i + 1).unwrap(), e);
            assert_eq!(
                enumerate_periodic_points_toral(&cat(), i + 1)
                    .unwrap()
                    .len(),
                e as usize
            );
        }
    }

    #[test]
    fn smith_solutions_match_brute_force() {
        for m in 1..=4 {
            let pts = enumerate_periodic_points_toral(&cat(), m).unwrap();
            let d = periodic_point_count(&cat(), m).unwrap();
            let scaled: BTreeSet<Vec<i128>> = pts
                .iter()
                .map(|p| {
                    assert_eq!(d % p.denominator, 0);
                    p.numerators
                        .iter()
                        .map(|a| a * (d / p.denominator))
                        .collect()
                })
                .collect();
            assert_eq!(scaled, brute_force(&cat(), m));
        }
    }

    #[test]
    fn period_two_orbit_is_listed() {
        let pts = enumerate_periodic_points_toral(&cat(), 2).unwrap();
        let names: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
        assert!(names.contains(&"(1/5, 2/5)".to_string()));
        assert!(names.contains(&"(4/5, 3/5)".to_string()));
    }

    #[test]
    fn degenerate_matrix() {
        let shear = DMatrix::from_row_slice(2, 2, &[1, 1, 0, 1]);
        assert!(matches!(
            enumerate_periodic_points_toral(&shear, 1),
            Err(HyperbolicityError::Degenerate)
        ));
    }
}
