//! Building a concrete system from its config section.

use nalgebra::DMatrix;
use shadowlab_core::systems::estimate_norm_bound;
use shadowlab_core::{
    DiscreteSystem, JordanBlock, JordanModel, LinearMap, PerturbedToral, Point, ToralAutomorphism,
};

use crate::config::{BlockKind, SystemConfig};
use crate::CliError;

/// Every system kind the runner knows. Commands that need a particular
/// kind match on it; everything else goes through [`System::dynamic`].
#[derive(Debug)]
pub enum System {
    Toral(ToralAutomorphism),
    PerturbedToral {
        map: PerturbedToral,
        norm_samples: usize,
    },
    Jordan {
        model: JordanModel,
        norm_samples: usize,
    },
    Linear(LinearMap),
}

impl System {
    pub fn build(cfg: &SystemConfig) -> Result<Self, CliError> {
        Ok(match cfg {
            SystemConfig::Toral { matrix } => System::Toral(ToralAutomorphism::from_rows(matrix)?),
            SystemConfig::PerturbedToral {
                matrix,
                amplitude,
                norm_samples,
            } => System::PerturbedToral {
                map: PerturbedToral::new(ToralAutomorphism::from_rows(matrix)?, *amplitude)?,
                norm_samples: *norm_samples,
            },
            SystemConfig::Jordan {
                block,
                l,
                eigenvalue,
                theta,
                tail,
                c,
                a_ball,
                half_width,
                norm_samples,
            } => {
                let block = match block {
                    BlockKind::Real => JordanBlock::Real {
                        size: *l,
                        eigenvalue: *eigenvalue,
                    },
                    BlockKind::Rotation => JordanBlock::Rotation {
                        size: *l,
                        angle: *theta,
                    },
                };
                let model = JordanModel::new(block, tail.clone())?
                    .with_nonlinearity(*c)
                    .with_core_radius(*a_ball)
                    .with_half_width(*half_width);
                System::Jordan {
                    model,
                    norm_samples: *norm_samples,
                }
            }
            SystemConfig::Linear { matrix, half_width } => {
                let n = matrix.len();
                if n == 0 || matrix.iter().any(|r| r.len() != n) {
                    return Err(CliError::Config {
                        path: "system.matrix".into(),
                        message: "matrix must be square and nonempty".into(),
                    });
                }
                let a = DMatrix::from_fn(n, n, |r, c| matrix[r][c]);
                System::Linear(LinearMap::new(a, *half_width)?)
            }
        })
    }

    pub fn dynamic(&self) -> &dyn DiscreteSystem {
        match self {
            System::Toral(s) => s,
            System::PerturbedToral { map, .. } => map,
            System::Jordan { model, .. } => model,
            System::Linear(s) => s,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            System::Toral(_) => "toral",
            System::PerturbedToral { .. } => "perturbed-toral",
            System::Jordan { .. } => "jordan",
            System::Linear(_) => "linear",
        }
    }

    pub fn norm_bound(&self) -> f64 {
        match self {
            System::PerturbedToral { map, norm_samples } => estimate_norm_bound(map, *norm_samples),
            System::Jordan {
                model,
                norm_samples,
            } => estimate_norm_bound(model, *norm_samples),
            other => other.dynamic().norm_bound(),
        }
    }

    /// The integer matrix behind a toral system, for exact enumeration.
    pub fn integer_matrix(&self) -> Option<&DMatrix<i64>> {
        match self {
            System::Toral(s) => Some(s.matrix()),
            System::PerturbedToral { map, .. } => Some(map.base().matrix()),
            _ => None,
        }
    }

    pub fn jordan(&self) -> Option<&JordanModel> {
        match self {
            System::Jordan { model, .. } => Some(model),
            _ => None,
        }
    }

    pub fn toral(&self) -> Option<&ToralAutomorphism> {
        match self {
            System::Toral(s) => Some(s),
            _ => None,
        }
    }

    /// A user-supplied point, or the origin, which is fixed by every kind.
    pub fn point(&self, given: &Option<Vec<f64>>) -> Result<Point, CliError> {
        let n = self.dynamic().dim();
        match given {
            None => Ok(Point::zeros(n)),
            Some(v) if v.len() == n => Ok(self.dynamic().space().wrap(Point::from_column_slice(v))),
            Some(v) => Err(CliError::Config {
                path: "command.point".into(),
                message: format!("expected {n} coordinates, got {}", v.len()),
            }),
        }
    }
}
