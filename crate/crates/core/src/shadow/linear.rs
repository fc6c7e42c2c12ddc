use std::f64::consts::TAU;

use nalgebra::{Complex, DMatrix, DVector};

use super::ShadowError;
use crate::linalg::resolvent_norm;
use crate::systems::Point;

/// Resolvent norms above this are treated as a multiplier on the unit circle.
pub const MAX_RESOLVENT_NORM: f64 = 1e12;

fn root_of_unity(k: usize, q: usize) -> Complex<f64> {
    let angle = TAU * k as f64 / q as f64;
    Complex::new(angle.cos(), angle.sin())
}

/// The unique `Q`-periodic solution of `z_{i+1} = A z_i + e_i`.
///
/// The shift is diagonalised by the discrete Fourier transform: with
/// `Z(w) = sum_i z_i w^-i` the system becomes `(wI - A) Z(w) = E(w)` at each
/// `Q`-th root of unity `w`. Unlike eliminating through `(I - A^Q)^-1`, this
/// never forms powers of `A`, so it stays accurate when `A` mixes strong
/// expansion and contraction.
pub fn closed_form_linear_shadow(
    a: &DMatrix<f64>,
    gaps: &[Point],
) -> Result<Vec<Point>, ShadowError> {
    let q = gaps.len();
    if q == 0 {
        return Err(ShadowError::Shape("no gaps".into()));
    }
    let n = a.nrows();
    if !a.is_square() || gaps.iter().any(|e| e.len() != n) {
        return Err(ShadowError::Shape(
            "gap dimension does not match the matrix".into(),
        ));
    }
    let ac = a.map(|v| Complex::new(v, 0.0));
    let mut spectra = Vec::with_capacity(q);
    for k in 0..q {
        let w = root_of_unity(k, q);
        let norm = resolvent_norm(a, w);
        if !(norm <= MAX_RESOLVENT_NORM) {
            return Err(ShadowError::NonhyperbolicMonodromy { norm });
        }
        let mut e_hat = DVector::<Complex<f64>>::zeros(n);
        for (i, e) in gaps.iter().enumerate() {
            let phase = root_of_unity((k * i) % q, q).conj();
            for r in 0..n {
                e_hat[r] += phase * e[r];
            }
        }
        let m = DMatrix::<Complex<f64>>::identity(n, n) * w - &ac;
        let z_hat = m
            .lu()
            .solve(&e_hat)
            .ok_or(ShadowError::NonhyperbolicMonodromy {
                norm: f64::INFINITY,
            })?;
        spectra.push(z_hat);
    }
    Ok((0..q)
        .map(|i| {
            Point::from_fn(n, |r, _| {
                let sum: Complex<f64> = spectra
                    .iter()
                    .enumerate()
                    .map(|(k, z)| root_of_unity((k * i) % q, q) * z[r])
                    .sum();
                sum.re / q as f64
            })
        })
        .collect())
}

/// `max ||(wI - A)^-1||` over the `Q`-th roots of unity `w`: the operator
/// norm of the cyclic solution map in the Euclidean norm on sequences.
pub fn theoretical_linear_lipschitz_bound(a: &DMatrix<f64>, q: usize) -> f64 {
    (0..q.max(1))
        .map(|k| resolvent_norm(a, root_of_unity(k, q.max(1))))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    #[test]
    fn zero_gaps_give_zero() {
        let z = closed_form_linear_shadow(&scalar(2.0), &vec![Point::zeros(1); 4]).unwrap();
        assert!(z.iter().all(|v| v[0] == 0.0));
    }

    #[test]
    fn scalar_single_period() {
        let z = closed_form_linear_shadow(&scalar(2.0), &[Point::from_element(1, 0.3)]).unwrap();
        assert!((z[0][0] + 0.3).abs() < 1e-15);
    }

    #[test]
    fn cat_map_two_periodic_substitution() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let delta = 1e-3;
        let gaps = vec![Point::from_row_slice(&[delta, 0.0]), Point::zeros(2)];
        let z = closed_form_linear_shadow(&a, &gaps).unwrap();
        for i in 0..2 {
            let r = &z[(i + 1) % 2] - &a * &z[i] - &gaps[i];
            assert!(r.norm() < 1e-12);
        }
    }

    #[test]
    fn identity_is_nonhyperbolic() {
        let gaps = vec![Point::zeros(2); 3];
        assert!(matches!(
            closed_form_linear_shadow(&DMatrix::identity(2, 2), &gaps),
            Err(ShadowError::NonhyperbolicMonodromy { .. })
        ));
    }

    #[test]
    fn scalar_bounds() {
        for q in [1, 2, 7] {
            assert!((theoretical_linear_lipschitz_bound(&scalar(2.0), q) - 1.0).abs() < 1e-12);
            assert!((theoretical_linear_lipschitz_bound(&scalar(0.5), q) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cat_map_bound_matches_enumeration() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        // independent enumeration: explicit complex inverse of a 2x2 matrix
        let mut best: f64 = 0.0;
        for k in 0..8 {
            let t = TAU * k as f64 / 8.0;
            let w = Complex::new(t.cos(), t.sin());
            let (p, q, r, s) = (
                w - 2.0,
                Complex::new(-1.0, 0.0),
                Complex::new(-1.0, 0.0),
                w - 1.0,
            );
            let det = p * s - q * r;
            let inv = nalgebra::Matrix2::new(s / det, -q / det, -r / det, p / det);
            best = best.max(inv.singular_values().max());
        }
        let bound = theoretical_linear_lipschitz_bound(&a, 8);
        assert!((bound - best).abs() < 1e-12);
        assert!((bound - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }
}
