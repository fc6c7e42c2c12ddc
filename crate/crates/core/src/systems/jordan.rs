use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::{estimate_norm_bound, spectral_norm, DiscreteSystem, PhaseSpace, Point, SystemError};

/// The non-hyperbolic block placed at the origin of a [`JordanModel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JordanBlock {
    /// `size x size` Jordan block with eigenvalue `+1` or `-1`: the eigenvalue
    /// on the diagonal and ones on the superdiagonal.
    Real { size: usize, eigenvalue: f64 },
    /// Real `2 size x 2 size` Jordan block for the eigenvalue pair
    /// `exp(+-i angle)`: rotations `R = [[cos, -sin], [sin, cos]]` on the
    /// diagonal and 2x2 identities on the block superdiagonal.
    Rotation { size: usize, angle: f64 },
}

impl JordanBlock {
    /// Number of phase-space coordinates the block occupies.
    pub fn dim(&self) -> usize {
        match *self {
            JordanBlock::Real { size, .. } => size,
            JordanBlock::Rotation { size, .. } => 2 * size,
        }
    }

    /// Length of the Jordan chain (`l`).
    pub fn chain_length(&self) -> usize {
        match *self {
            JordanBlock::Real { size, .. } | JordanBlock::Rotation { size, .. } => size,
        }
    }

    fn matrix(&self) -> DMatrix<f64> {
        match *self {
            JordanBlock::Real { size, eigenvalue } => DMatrix::from_fn(size, size, |i, j| {
                if i == j {
                    eigenvalue
                } else if j == i + 1 {
                    1.0
                } else {
                    0.0
                }
            }),
            JordanBlock::Rotation { size, angle } => {
                let (s, c) = angle.sin_cos();
                let mut b = DMatrix::zeros(2 * size, 2 * size);
                for k in 0..size {
                    let o = 2 * k;
                    b[(o, o)] = c;
                    b[(o, o + 1)] = -s;
                    b[(o + 1, o)] = s;
                    b[(o + 1, o + 1)] = c;
                    if k + 1 < size {
                        b[(o, o + 2)] = 1.0;
                        b[(o + 1, o + 3)] = 1.0;
                    }
                }
                b
            }
        }
    }
}

/// A local model `F(v) = Av + phi(v)` around a non-hyperbolic fixed point at
/// the origin, with `A = diag(B, P)`.
///
/// `B` is a [`JordanBlock`] and `P` a diagonal hyperbolic tail. The
/// nonlinearity is the cubic `phi(v) = (c / |A|) h(|v|) |v|^2 Av`, where `h`
/// is a smootherstep that vanishes on the core ball `|v| <= a_ball` and
/// equals 1 for `|v| >= 2 a_ball`. Inside the core ball the map is exactly
/// `v -> Av`, and `|phi(v)| <= c |v|^3` everywhere.
///
/// Writing `F(v) = A (1 + g(|v|)) v` with `g` nondecreasing makes `F` a
/// diffeomorphism for every block, including eigenvalue `-1` where the
/// plain radial term `c h |v|^2 v` would cancel `A` and fold the map.
#[derive(Debug, Clone)]
pub struct JordanModel {
    block: JordanBlock,
    tail: Vec<f64>,
    nonlinearity: f64,
    core_radius: f64,
    half_width: f64,
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    /// Spectral norm of `matrix`.
    matrix_norm: f64,
    space: PhaseSpace,
    norm_bound: OnceLock<f64>,
}

impl JordanModel {
    pub const DEFAULT_NONLINEARITY: f64 = 1.0;
    pub const DEFAULT_CORE_RADIUS: f64 = 0.5;
    pub const DEFAULT_HALF_WIDTH: f64 = 10.0;

    pub fn new(block: JordanBlock, tail: Vec<f64>) -> Result<Self, SystemError> {
        match block {
            JordanBlock::Real { size, eigenvalue } => {
                if size == 0 {
                    return Err(SystemError::Invalid(
                        "Jordan block size must be positive".into(),
                    ));
                }
                if eigenvalue != 1.0 && eigenvalue != -1.0 {
                    return Err(SystemError::Invalid(format!(
                        "real Jordan block eigenvalue must be +1 or -1, got {eigenvalue}"
                    )));
                }
            }
            JordanBlock::Rotation { size, angle } => {
                if size == 0 {
                    return Err(SystemError::Invalid(
                        "Jordan block size must be positive".into(),
                    ));
                }
                if !angle.is_finite() {
                    return Err(SystemError::Invalid("rotation angle must be finite".into()));
                }
            }
        }
        if let Some(bad) = tail
            .iter()
            .find(|p| !p.is_finite() || **p == 0.0 || (p.abs() - 1.0).abs() < 1e-12)
        {
            return Err(SystemError::Invalid(format!(
                "hyperbolic tail entries must satisfy |p| not in {{0, 1}}, got {bad}"
            )));
        }
        let n = block.dim() + tail.len();
        let mut matrix = DMatrix::zeros(n, n);
        let b = block.dim();
        matrix.view_mut((0, 0), (b, b)).copy_from(&block.matrix());
        for (k, p) in tail.iter().enumerate() {
            matrix[(b + k, b + k)] = *p;
        }
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| SystemError::Invalid("linear part is singular".into()))?;
        let matrix_norm = spectral_norm(&matrix);
        Ok(JordanModel {
            block,
            tail,
            nonlinearity: Self::DEFAULT_NONLINEARITY,
            core_radius: Self::DEFAULT_CORE_RADIUS,
            half_width: Self::DEFAULT_HALF_WIDTH,
            matrix,
            inverse,
            matrix_norm,
            space: PhaseSpace::euclidean_box(n, Self::DEFAULT_HALF_WIDTH),
            norm_bound: OnceLock::new(),
        })
    }

    /// Scale `c >= 0` of the cubic term.
    pub fn with_nonlinearity(mut self, c: f64) -> Self {
        assert!(
            c >= 0.0 && c.is_finite(),
            "nonlinearity scale must be finite and nonnegative"
        );
        self.nonlinearity = c;
        self.norm_bound = OnceLock::new();
        self
    }

    /// Radius of the ball on which the map is exactly linear.
    pub fn with_core_radius(mut self, radius: f64) -> Self {
        assert!(
            radius > 0.0 && radius.is_finite(),
            "core radius must be positive"
        );
        self.core_radius = radius;
        if self.half_width < radius {
            self.half_width = radius;
            self.space = PhaseSpace::euclidean_box(self.matrix.nrows(), radius);
        }
        self.norm_bound = OnceLock::new();
        self
    }

    /// Half width of the bounding box; clamped to at least the core radius.
    pub fn with_half_width(mut self, half_width: f64) -> Self {
        assert!(
            half_width > 0.0 && half_width.is_finite(),
            "box half width must be positive"
        );
        self.half_width = half_width.max(self.core_radius);
        self.space = PhaseSpace::euclidean_box(self.matrix.nrows(), self.half_width);
        self.norm_bound = OnceLock::new();
        self
    }

    pub fn block(&self) -> JordanBlock {
        self.block
    }

    pub fn tail(&self) -> &[f64] {
        &self.tail
    }

    pub fn nonlinearity_scale(&self) -> f64 {
        self.nonlinearity
    }

    pub fn core_radius(&self) -> f64 {
        self.core_radius
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// The linear part `A = diag(B, P)`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn is_linear(&self) -> bool {
        self.nonlinearity == 0.0
    }

    /// `phi(v)`, zero on the core ball.
    pub fn nonlinear_term(&self, v: &Point) -> Point {
        let r = v.norm();
        if self.nonlinearity == 0.0 || r <= self.core_radius {
            return Point::zeros(v.len());
        }
        (&self.matrix * v) * self.radial_gain(r).0
    }

    /// `g(r) = (c / |A|) h(r) r^2` and `g'(r)`.
    fn radial_gain(&self, r: f64) -> (f64, f64) {
        let a = self.core_radius;
        let t = ((r - a) / a).clamp(0.0, 1.0);
        let h = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
        let dh = if t > 0.0 && t < 1.0 {
            30.0 * t * t * (1.0 - t) * (1.0 - t) / a
        } else {
            0.0
        };
        let c = self.nonlinearity / self.matrix_norm;
        (c * h * r * r, c * (dh * r * r + 2.0 * r * h))
    }

    /// The radius `r` with `r (1 + g(r)) = rho`, for `rho > a_ball`.
    fn radial_preimage(&self, rho: f64) -> f64 {
        // psi(r) = r (1 + g(r)) - rho is increasing; Newton kept inside a bracket
        let (mut lo, mut hi) = (self.core_radius, rho);
        let mut r = rho;
        for _ in 0..200 {
            let (g, dg) = self.radial_gain(r);
            let psi = r * (1.0 + g) - rho;
            if psi.abs() <= 1e-16 * rho {
                break;
            }
            if psi > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            let next = r - psi / (1.0 + g + r * dg);
            r = if next > lo && next < hi {
                next
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= 1e-16 * rho {
                break;
            }
        }
        r
    }
}

impl DiscreteSystem for JordanModel {
    fn space(&self) -> &PhaseSpace {
        &self.space
    }

    fn forward(&self, v: &Point) -> Point {
        let r = v.norm();
        if self.nonlinearity == 0.0 || r <= self.core_radius {
            return &self.matrix * v;
        }
        (&self.matrix * v) * (1.0 + self.radial_gain(r).0)
    }

    fn inverse(&self, y: &Point) -> Point {
        let u = &self.inverse * y;
        let rho = u.norm();
        if self.nonlinearity == 0.0 || rho <= self.core_radius {
            return u;
        }
        let r = self.radial_preimage(rho);
        u * (r / rho)
    }

    fn jacobian(&self, v: &Point) -> DMatrix<f64> {
        let r = v.norm();
        if self.nonlinearity == 0.0 || r <= self.core_radius {
            return self.matrix.clone();
        }
        let (g, dg) = self.radial_gain(r);
        let n = v.len();
        &self.matrix * (DMatrix::identity(n, n) * (1.0 + g) + (v * v.transpose()) * (dg / r))
    }

    fn norm_bound(&self) -> f64 {
        *self.norm_bound.get_or_init(|| {
            if self.nonlinearity == 0.0 {
                self.matrix_norm
            } else {
                estimate_norm_bound_sampled(self)
            }
        })
    }

    fn linear_part(&self) -> Option<DMatrix<f64>> {
        self.is_linear().then(|| self.matrix.clone())
    }
}

fn estimate_norm_bound_sampled(model: &JordanModel) -> f64 {
    // the sampled estimate plus the exact linear part, which the box corners can miss
    estimate_norm_bound(model, super::DEFAULT_NORM_SAMPLES).max(spectral_norm(&model.matrix))
}
