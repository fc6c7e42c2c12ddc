use nalgebra::{Complex, DMatrix};

use super::HyperbolicityError;
use crate::linalg::{max_principal_cosine, orthonormalize, projector_range, unstable_projector};
use crate::systems::{orbit_segment, DiscreteSystem, Point};

/// Multipliers with modulus in `(1 - band, 1 + band)` count as neutral.
pub const UNIT_MODULUS_BAND: f64 = 1e-6;

/// Largest `dist(f^m(p), p)` accepted as periodic.
pub const PERIODICITY_TOLERANCE: f64 = 1e-8;

/// Linearisation of a periodic orbit.
#[derive(Debug, Clone)]
pub struct PeriodicOrbitRecord {
    pub point: Point,
    pub period: usize,
    /// `p_i = f^i(p)` for `i = 0..m`.
    pub orbit: Vec<Point>,
    /// `A_i = Df(p_i)`.
    pub jacobians: Vec<DMatrix<f64>>,
    /// `B = A_{m-1} ... A_0`.
    pub monodromy: DMatrix<f64>,
    /// Eigenvalues of `B`, largest modulus first.
    pub multipliers: Vec<Complex<f64>>,
    /// Number of multipliers outside the unit circle.
    pub index: usize,
    pub hyperbolic: bool,
    /// Orthonormal stable basis at each `p_i`; empty when not hyperbolic.
    pub stable_bases: Vec<DMatrix<f64>>,
    /// Orthonormal unstable basis at each `p_i`; empty when not hyperbolic.
    pub unstable_bases: Vec<DMatrix<f64>>,
    /// `max ||B X - X X^T B X|| / ||B||` over the two bases at `p`.
    pub invariance_residual: f64,
}

impl PeriodicOrbitRecord {
    pub fn dim(&self) -> usize {
        self.point.len()
    }

    pub fn stable_basis(&self) -> Option<&DMatrix<f64>> {
        self.stable_bases.first()
    }

    pub fn unstable_basis(&self) -> Option<&DMatrix<f64>> {
        self.unstable_bases.first()
    }

    /// Relative distance of `v` from the unstable subspace at `p`.
    pub fn unstable_residual(&self, v: &Point) -> f64 {
        let norm = v.norm();
        match self.unstable_basis() {
            Some(u) if norm > 0.0 => (v - u * (u.transpose() * v)).norm() / norm,
            _ => f64::INFINITY,
        }
    }

    /// `Df^j(p_i)` for any `j >= 0`, following the orbit cyclically.
    pub fn forward_derivative(&self, start: usize, j: usize) -> DMatrix<f64> {
        let n = self.dim();
        let mut d = DMatrix::identity(n, n);
        for s in 0..j {
            d = &self.jacobians[(start + s) % self.period] * d;
        }
        d
    }
}

/// Monodromy, multipliers and the stable/unstable splitting along the orbit
/// of `p`, assumed periodic with period `m`.
pub fn analyze_periodic_orbit<S: DiscreteSystem + ?Sized>(
    sys: &S,
    p: &Point,
    m: usize,
) -> Result<PeriodicOrbitRecord, HyperbolicityError> {
    if m == 0 {
        return Err(HyperbolicityError::EmptyInput("period must be positive"));
    }
    let mut orbit = orbit_segment(sys, p, 0, m as i64)?;
    let gap = sys.space().dist(&orbit[m], p);
    if !(gap <= PERIODICITY_TOLERANCE) {
        return Err(HyperbolicityError::NotPeriodic { period: m, gap });
    }
    orbit.truncate(m);
    let n = sys.dim();
    let jacobians: Vec<DMatrix<f64>> = orbit.iter().map(|x| sys.jacobian(x)).collect();
    let mut monodromy = DMatrix::identity(n, n);
    for a in &jacobians {
        monodromy = a * monodromy;
    }

    let mut multipliers: Vec<Complex<f64>> =
        monodromy.complex_eigenvalues().iter().copied().collect();
    multipliers.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
    let hyperbolic = multipliers
        .iter()
        .all(|z| (z.norm() - 1.0).abs() >= UNIT_MODULUS_BAND);
    let index = multipliers
        .iter()
        .filter(|z| z.norm() >= 1.0 + UNIT_MODULUS_BAND)
        .count();

    let mut record = PeriodicOrbitRecord {
        point: orbit[0].clone(),
        period: m,
        orbit,
        jacobians,
        monodromy,
        multipliers,
        index,
        hyperbolic,
        stable_bases: Vec::new(),
        unstable_bases: Vec::new(),
        invariance_residual: 0.0,
    };
    if hyperbolic {
        split_along_orbit(&mut record)?;
    }
    Ok(record)
}

/// Unstable bases are pushed forward and stable bases pulled back, so
/// rounding errors are damped in both directions.
fn split_along_orbit(record: &mut PeriodicOrbitRecord) -> Result<(), HyperbolicityError> {
    let n = record.dim();
    let m = record.period;
    let b = &record.monodromy;
    let p = unstable_projector(b).ok_or(HyperbolicityError::Splitting)?;
    let u0 = projector_range(&p, record.index);
    let s0 = projector_range(&(DMatrix::identity(n, n) - &p), n - record.index);

    let mut unstable = vec![u0];
    for i in 0..m - 1 {
        let next = orthonormalize(&(&record.jacobians[i] * &unstable[i]));
        unstable.push(next);
    }
    let inverses: Vec<DMatrix<f64>> = record
        .jacobians
        .iter()
        .map(|a| a.clone().try_inverse().ok_or(HyperbolicityError::Splitting))
        .collect::<Result<_, _>>()?;
    let mut stable = vec![DMatrix::zeros(n, 0); m];
    stable[0] = s0.clone();
    let mut current = s0;
    for i in (1..m).rev() {
        current = orthonormalize(&(&inverses[i] * &current));
        stable[i] = current.clone();
    }

    let scale = b.norm().max(f64::MIN_POSITIVE);
    let residual = |x: &DMatrix<f64>| -> f64 {
        if x.ncols() == 0 {
            return 0.0;
        }
        let bx = b * x;
        (&bx - x * (x.transpose() * &bx)).norm() / scale
    };
    record.invariance_residual = residual(&stable[0]).max(residual(&unstable[0]));
    record.stable_bases = stable;
    record.unstable_bases = unstable;
    Ok(())
}

/// `beta = min |v_s - v_u|` over unit stable and unstable vectors at each
/// orbit point.
#[derive(Debug, Clone, PartialEq)]
pub struct SplittingAngles {
    pub per_point: Vec<f64>,
    pub minimum: f64,
}

/// `beta = sqrt(2 - 2 sigma_max(S^T U))` at every orbit point. A trivial
/// stable or unstable subspace has no competing direction and gives
/// `sqrt(2)`.
pub fn subspace_angle(record: &PeriodicOrbitRecord) -> Result<SplittingAngles, HyperbolicityError> {
    if !record.hyperbolic {
        return Err(HyperbolicityError::Nonhyperbolic);
    }
    let per_point: Vec<f64> = record
        .stable_bases
        .iter()
        .zip(&record.unstable_bases)
        .map(|(s, u)| (2.0 - 2.0 * max_principal_cosine(s, u)).max(0.0).sqrt())
        .collect();
    let minimum = per_point.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SplittingAngles { per_point, minimum })
}
