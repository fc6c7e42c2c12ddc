use std::f64::consts::TAU;

use nalgebra::DMatrix;

use super::{spectral_norm, DiscreteSystem, PhaseSpace, Point, SystemError};
use crate::lattice;

/// Modulus band around 1 treated as "on the unit circle" when classifying a
/// toral automorphism.
const UNIT_CIRCLE_BAND: f64 = 1e-9;

/// `x -> Mx mod 1` for an integer matrix with `|det M| = 1`.
#[derive(Debug, Clone)]
pub struct ToralAutomorphism {
    matrix: DMatrix<i64>,
    real: DMatrix<f64>,
    real_inverse: DMatrix<f64>,
    space: PhaseSpace,
    hyperbolic: bool,
}

impl ToralAutomorphism {
    pub fn new(matrix: DMatrix<i64>) -> Result<Self, SystemError> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(SystemError::Invalid(
                "matrix must be square and nonempty".into(),
            ));
        }
        let n = matrix.nrows();
        let wide = lattice::widen(&matrix);
        let det = lattice::determinant(&wide);
        if det.abs() != 1 {
            return Err(SystemError::Invalid(format!(
                "toral automorphism needs |det| = 1, got {det}"
            )));
        }
        let real = matrix.map(|v| v as f64);
        let inverse = real
            .clone()
            .try_inverse()
            .ok_or_else(|| SystemError::Invalid("matrix is singular".into()))?
            .map(|v| v.round() as i64);
        let check = lattice::checked_mul(&wide, &lattice::widen(&inverse))
            .ok_or_else(|| SystemError::Invalid("integer overflow inverting matrix".into()))?;
        if check != lattice::IntMatrix::identity(n, n) {
            return Err(SystemError::Invalid(
                "integer inverse could not be recovered".into(),
            ));
        }
        let hyperbolic = real
            .complex_eigenvalues()
            .iter()
            .all(|z| (z.norm() - 1.0).abs() > UNIT_CIRCLE_BAND);
        Ok(ToralAutomorphism {
            matrix,
            real,
            real_inverse: inverse.map(|v| v as f64),
            space: PhaseSpace::torus(n),
            hyperbolic,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, SystemError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(SystemError::Invalid(
                "matrix rows must form a square".into(),
            ));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Arnold's cat map `[[2, 1], [1, 1]]`.
    pub fn cat_map() -> Self {
        Self::from_rows(&[vec![2, 1], vec![1, 1]]).expect("cat map is unimodular")
    }

    pub fn matrix(&self) -> &DMatrix<i64> {
        &self.matrix
    }

    pub fn real_matrix(&self) -> &DMatrix<f64> {
        &self.real
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.hyperbolic
    }
}

impl DiscreteSystem for ToralAutomorphism {
    fn space(&self) -> &PhaseSpace {
        &self.space
    }

    fn forward(&self, x: &Point) -> Point {
        self.space.wrap(&self.real * x)
    }

    fn inverse(&self, x: &Point) -> Point {
        self.space.wrap(&self.real_inverse * x)
    }

    fn jacobian(&self, _x: &Point) -> DMatrix<f64> {
        self.real.clone()
    }

    fn jacobian_inverse(&self, _x: &Point) -> DMatrix<f64> {
        self.real_inverse.clone()
    }

    fn norm_bound(&self) -> f64 {
        spectral_norm(&self.real)
    }

    fn linear_part(&self) -> Option<DMatrix<f64>> {
        Some(self.real.clone())
    }
}

/// A toral automorphism composed with a cyclic chain of sine shears:
/// `f(x) = M S(x) mod 1`, where `S` applies, for `j = 0..n`,
/// `x_j += amplitude / (2 pi) * sin(2 pi x_{j+1 mod n})` in order.
///
/// Each shear is a torus diffeomorphism with an explicit inverse, so `f` is
/// exactly invertible. For small amplitudes a hyperbolic base stays hyperbolic.
#[derive(Debug, Clone)]
pub struct PerturbedToral {
    base: ToralAutomorphism,
    amplitude: f64,
}

impl PerturbedToral {
    pub fn new(base: ToralAutomorphism, amplitude: f64) -> Result<Self, SystemError> {
        if base.space.dim() < 2 {
            return Err(SystemError::Invalid(
                "perturbed toral maps need dimension at least 2".into(),
            ));
        }
        if !amplitude.is_finite() {
            return Err(SystemError::Invalid(
                "perturbation amplitude must be finite".into(),
            ));
        }
        Ok(PerturbedToral { base, amplitude })
    }

    pub fn base(&self) -> &ToralAutomorphism {
        &self.base
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    fn shear(&self, x: &Point) -> Point {
        let n = x.len();
        let mut y = x.clone();
        for j in 0..n {
            y[j] += self.amplitude / TAU * (TAU * y[(j + 1) % n]).sin();
        }
        y
    }

    fn unshear(&self, x: &Point) -> Point {
        let n = x.len();
        let mut y = x.clone();
        for j in (0..n).rev() {
            y[j] -= self.amplitude / TAU * (TAU * y[(j + 1) % n]).sin();
        }
        y
    }

    fn shear_jacobian(&self, x: &Point) -> DMatrix<f64> {
        let n = x.len();
        let mut y = x.clone();
        let mut jac = DMatrix::identity(n, n);
        for j in 0..n {
            let k = (j + 1) % n;
            let mut step = DMatrix::<f64>::identity(n, n);
            step[(j, k)] += self.amplitude * (TAU * y[k]).cos();
            jac = step * jac;
            y[j] += self.amplitude / TAU * (TAU * y[k]).sin();
        }
        jac
    }
}

impl DiscreteSystem for PerturbedToral {
    fn space(&self) -> &PhaseSpace {
        &self.base.space
    }

    fn forward(&self, x: &Point) -> Point {
        self.base.space.wrap(&self.base.real * self.shear(x))
    }

    fn inverse(&self, x: &Point) -> Point {
        let y = self.base.space.wrap(&self.base.real_inverse * x);
        self.base.space.wrap(self.unshear(&y))
    }

    fn jacobian(&self, x: &Point) -> DMatrix<f64> {
        &self.base.real * self.shear_jacobian(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unimodular() {
        assert!(ToralAutomorphism::from_rows(&[vec![2, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn classifies_hyperbolicity() {
        assert!(ToralAutomorphism::cat_map().is_hyperbolic());
        let rot = ToralAutomorphism::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        assert!(!rot.is_hyperbolic());
        let shear = ToralAutomorphism::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(!shear.is_hyperbolic());
    }

    #[test]
    fn inverse_is_integer() {
        let cat = ToralAutomorphism::cat_map();
        assert_eq!(
            cat.real_inverse,
            DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 2.0])
        );
    }

    #[test]
    fn perturbed_round_trip() {
        let sys = PerturbedToral::new(ToralAutomorphism::cat_map(), 0.05).unwrap();
        let x = Point::from_row_slice(&[0.31, 0.77]);
        let back = sys.inverse(&sys.forward(&x));
        assert!(sys.space().dist(&back, &x) < 1e-13);
    }
}
