//! Flat phase spaces: a Euclidean box or the unit-periodic torus.

use nalgebra::DVector;

/// A point (or tangent vector) in a flat phase space.
pub type Point = DVector<f64>;

/// The phase space a [`DiscreteSystem`](super::DiscreteSystem) lives on.
///
/// On the torus every stored point is kept in the fundamental domain
/// `[0, 1)^n` and distances use the wrap-around metric, so the largest
/// possible distance is `sqrt(n) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseSpace {
    /// `R^n` restricted to the axis-aligned box `[lower, upper]`.
    Euclidean { lower: Vec<f64>, upper: Vec<f64> },
    /// `R^n / Z^n`.
    Torus { dim: usize },
}

impl PhaseSpace {
    /// Symmetric box `[-half_width, half_width]^dim`.
    pub fn euclidean_box(dim: usize, half_width: f64) -> Self {
        assert!(dim >= 1, "phase space dimension must be positive");
        assert!(half_width > 0.0, "box half width must be positive");
        PhaseSpace::Euclidean {
            lower: vec![-half_width; dim],
            upper: vec![half_width; dim],
        }
    }

    pub fn torus(dim: usize) -> Self {
        assert!(dim >= 1, "phase space dimension must be positive");
        PhaseSpace::Torus { dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            PhaseSpace::Euclidean { lower, .. } => lower.len(),
            PhaseSpace::Torus { dim } => *dim,
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, PhaseSpace::Torus { .. })
    }

    /// Reduces a point into the fundamental domain. Identity on Euclidean spaces.
    pub fn wrap(&self, mut x: Point) -> Point {
        if self.is_torus() {
            for c in x.iter_mut() {
                *c = wrap_unit(*c);
            }
        }
        x
    }

    /// The shortest vector `v` with `from + v == to` (modulo the lattice on the torus).
    pub fn displacement(&self, from: &Point, to: &Point) -> Point {
        let mut v = to - from;
        if self.is_torus() {
            for c in v.iter_mut() {
                *c -= c.round();
            }
        }
        v
    }

    pub fn dist(&self, a: &Point, b: &Point) -> f64 {
        self.displacement(a, b).norm()
    }

    /// `x + v`, wrapped back into the fundamental domain.
    pub fn translate(&self, x: &Point, v: &Point) -> Point {
        self.wrap(x + v)
    }

    pub fn contains(&self, x: &Point) -> bool {
        if x.len() != self.dim() || x.iter().any(|c| !c.is_finite()) {
            return false;
        }
        match self {
            PhaseSpace::Euclidean { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(c, (lo, hi))| *c >= *lo && *c <= *hi),
            PhaseSpace::Torus { .. } => x.iter().all(|c| (0.0..1.0).contains(c)),
        }
    }

    /// Maps a point of the unit cube `[0, 1)^n` onto the space.
    pub(crate) fn point_in_unit_cube(&self, u: &[f64]) -> Point {
        match self {
            PhaseSpace::Torus { .. } => Point::from_iterator(u.len(), u.iter().copied()),
            PhaseSpace::Euclidean { lower, upper } => Point::from_iterator(
                u.len(),
                u.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(t, (lo, hi))| lo + t * (hi - lo)),
            ),
        }
    }
}

fn wrap_unit(c: f64) -> f64 {
    let r = c.rem_euclid(1.0);
    // rem_euclid rounds tiny negative inputs up to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}
