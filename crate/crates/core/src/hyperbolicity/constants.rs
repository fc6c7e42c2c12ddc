use nalgebra::DMatrix;

use super::{HyperbolicityError, PeriodicOrbitRecord};
use crate::systems::{halton, Point};

/// Unit vectors sampled per subspace and orbit point.
pub const VECTOR_SAMPLES: usize = 100;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Empirical constants with `|Df^j v| <= C lambda^j |v|` on stable vectors
/// and `|Df^-j v| <= C lambda^j |v|` on unstable vectors, `j <= horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicityConstants {
    pub c: f64,
    pub lambda: f64,
    pub horizon: usize,
    /// `g(j)` for `j = 0..=horizon`, maximised over both subspaces.
    pub growth: Vec<f64>,
}

impl HyperbolicityConstants {
    /// Replays the bounds on a fresh vector sample (disjoint from the one
    /// used for fitting), with relative slack `rel_tol`.
    pub fn holds_on(&self, records: &[PeriodicOrbitRecord], rel_tol: f64) -> bool {
        let g = growth(records, self.horizon, VECTOR_SAMPLES + 1);
        g.iter()
            .enumerate()
            .all(|(j, gj)| *gj <= self.c * self.lambda.powi(j as i32) * (1.0 + rel_tol))
    }
}

/// Fits `lambda = max_j g(j)^(1/j)` and `C = max_j g(j) / lambda^j`, where
/// `g(j)` is the largest growth of a sampled unit vector under `Df^j` on
/// stable subspaces and under `Df^-j` on unstable subspaces, over every
/// orbit point of every record.
pub fn extract_uniform_constants(
    records: &[PeriodicOrbitRecord],
    horizon: usize,
) -> Result<HyperbolicityConstants, HyperbolicityError> {
    if records.is_empty() {
        return Err(HyperbolicityError::EmptyInput("no orbit records"));
    }
    if horizon == 0 {
        return Err(HyperbolicityError::EmptyInput("horizon must be positive"));
    }
    if records.iter().any(|r| !r.hyperbolic) {
        return Err(HyperbolicityError::Nonhyperbolic);
    }
    let g = growth(records, horizon, 1);
    let lambda = (1..=horizon)
        .map(|j| g[j].powf(1.0 / j as f64))
        .fold(0.0, f64::max);
    if !(lambda < 1.0) {
        return Err(HyperbolicityError::NotContracting { lambda });
    }
    let c = g
        .iter()
        .enumerate()
        .map(|(j, gj)| gj / lambda.powi(j as i32))
        .fold(0.0, f64::max);
    Ok(HyperbolicityConstants {
        c,
        lambda,
        horizon,
        growth: g,
    })
}

fn growth(records: &[PeriodicOrbitRecord], horizon: usize, first_sample: usize) -> Vec<f64> {
    let mut g = vec![0.0f64; horizon + 1];
    g[0] = 1.0;
    for r in records {
        let m = r.period;
        let inverses: Vec<DMatrix<f64>> = r
            .jacobians
            .iter()
            .map(|a| {
                a.clone()
                    .try_inverse()
                    .expect("hyperbolic orbit has invertible Jacobians")
            })
            .collect();
        for i in 0..m {
            for v in unit_samples(&r.stable_bases[i], first_sample) {
                let mut x = v;
                for (j, slot) in g.iter_mut().enumerate().skip(1) {
                    x = &r.jacobians[(i + j - 1) % m] * x;
                    *slot = slot.max(x.norm());
                }
            }
            for v in unit_samples(&r.unstable_bases[i], first_sample) {
                let mut x = v;
                for (j, slot) in g.iter_mut().enumerate().skip(1) {
                    // Df^-1 at p_{i-j+1} is A_{i-j}^{-1}
                    let k = (i + m * j - j) % m;
                    x = &inverses[k] * x;
                    *slot = slot.max(x.norm());
                }
            }
        }
    }
    g
}

fn unit_samples(basis: &DMatrix<f64>, first: usize) -> Vec<Point> {
    let k = basis.ncols();
    if k == 0 {
        return Vec::new();
    }
    (first..first + VECTOR_SAMPLES)
        .filter_map(|idx| {
            let coeffs = Point::from_fn(k, |c, _| {
                2.0 * halton(idx as u64, PRIMES[c % PRIMES.len()]) - 1.0
            });
            let norm = coeffs.norm();
            (norm > 1e-12).then(|| basis * (coeffs / norm))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolicity::analyze_periodic_orbit;
    use crate::systems::{LinearMap, ToralAutomorphism};
    use nalgebra::DVector;

    #[test]
    fn cat_map_constants() {
        let cat = ToralAutomorphism::cat_map();
        let r = analyze_periodic_orbit(&cat, &Point::zeros(2), 1).unwrap();
        let k = extract_uniform_constants(std::slice::from_ref(&r), 10).unwrap();
        let lmin = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((k.lambda - lmin).abs() < 1e-9);
        assert!((k.c - 1.0).abs() < 1e-9);
        assert!(k.holds_on(&[r], 1e-9));
    }

    #[test]
    fn diagonal_constants() {
        let lin = LinearMap::new(
            DMatrix::from_diagonal(&DVector::from_row_slice(&[2.0, 0.5])),
            4.0,
        )
        .unwrap();
        let r = analyze_periodic_orbit(&lin, &Point::zeros(2), 1).unwrap();
        let k = extract_uniform_constants(&[r], 1).unwrap();
        assert!((k.lambda - 0.5).abs() < 1e-12);
        assert!((k.c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn self_consistent_at_horizon_one() {
        let cat = ToralAutomorphism::cat_map();
        let p = Point::from_row_slice(&[0.2, 0.4]);
        let r = analyze_periodic_orbit(&cat, &p, 2).unwrap();
        let k = extract_uniform_constants(std::slice::from_ref(&r), 1).unwrap();
        assert!(k.c >= k.growth[1] / k.lambda - 1e-15);
        assert!(k.holds_on(&[r], 1e-9));
    }

    #[test]
    fn empty_input() {
        assert!(matches!(
            extract_uniform_constants(&[], 3),
            Err(HyperbolicityError::EmptyInput(_))
        ));
    }
}
