use nalgebra::DMatrix;

use super::{spectral_norm, DiscreteSystem, PhaseSpace, Point, SystemError};

/// `x -> Ax` on a Euclidean box.
#[derive(Debug, Clone)]
pub struct LinearMap {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    space: PhaseSpace,
}

impl LinearMap {
    pub fn new(matrix: DMatrix<f64>, half_width: f64) -> Result<Self, SystemError> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(SystemError::Invalid(
                "matrix must be square and nonempty".into(),
            ));
        }
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| SystemError::Invalid("matrix is singular".into()))?;
        let space = PhaseSpace::euclidean_box(matrix.nrows(), half_width);
        Ok(LinearMap {
            matrix,
            inverse,
            space,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

impl DiscreteSystem for LinearMap {
    fn space(&self) -> &PhaseSpace {
        &self.space
    }

    fn forward(&self, x: &Point) -> Point {
        &self.matrix * x
    }

    fn inverse(&self, x: &Point) -> Point {
        &self.inverse * x
    }

    fn jacobian(&self, _x: &Point) -> DMatrix<f64> {
        self.matrix.clone()
    }

    fn jacobian_inverse(&self, _x: &Point) -> DMatrix<f64> {
        self.inverse.clone()
    }

    fn norm_bound(&self) -> f64 {
        spectral_norm(&self.matrix)
    }

    fn linear_part(&self) -> Option<DMatrix<f64>> {
        Some(self.matrix.clone())
    }
}
