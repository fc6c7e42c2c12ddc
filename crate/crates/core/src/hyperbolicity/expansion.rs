use super::{HyperbolicityError, PeriodicOrbitRecord};
use crate::systems::Point;

/// Largest `|a_m|` accepted by the telescoping check.
pub const TELESCOPING_TOLERANCE: f64 = 1e-9;

/// Largest relative distance of `v_u` from the unstable subspace.
const UNSTABLE_RESIDUAL: f64 = 1e-8;

/// Expansion rates of an unstable vector along a periodic orbit.
///
/// With `e_0 = v_u / |v_u|` and `lambda_i = |A_i e_i|`,
/// `e_{i+1} = A_i e_i / lambda_i`, the correction coefficients are
/// `a_0 = tau`, `a_{i+1} = lambda_i a_i - 1`, and
/// `tau = sum_{k=1..m} 1 / (lambda_0 ... lambda_{k-1})` is the unique start
/// value for which `a_m = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionData {
    pub lambdas: Vec<f64>,
    pub tau: f64,
    /// `a_0..=a_m`.
    pub a: Vec<f64>,
    /// `Pi_i = lambda_0 ... lambda_{i-1}` for `i = 0..m` (`Pi_0 = 1`).
    pub products: Vec<f64>,
    /// Unit vectors `e_0..e_{m-1}`; empty when built from rates alone.
    pub directions: Vec<Point>,
}

impl ExpansionData {
    pub fn from_multipliers(lambdas: Vec<f64>) -> Result<Self, HyperbolicityError> {
        if lambdas.is_empty() {
            return Err(HyperbolicityError::EmptyInput("no expansion rates"));
        }
        let m = lambdas.len();
        let mut products = Vec::with_capacity(m + 1);
        products.push(1.0);
        for (i, l) in lambdas.iter().enumerate() {
            products.push(products[i] * l);
        }
        let tau: f64 = products[1..].iter().map(|p| 1.0 / p).sum();
        let mut a = Vec::with_capacity(m + 1);
        a.push(tau);
        for (i, l) in lambdas.iter().enumerate() {
            a.push(l * a[i] - 1.0);
        }
        if !(a[m].abs() <= TELESCOPING_TOLERANCE) {
            return Err(HyperbolicityError::Telescoping { a_m: a[m] });
        }
        products.truncate(m);
        Ok(ExpansionData {
            lambdas,
            tau,
            a,
            products,
            directions: Vec::new(),
        })
    }

    pub fn period(&self) -> usize {
        self.lambdas.len()
    }

    /// `(1 / (16 L)) (1 + 1 / (8 L))^i` for `i = 0..m`.
    pub fn bound_curve(&self, lipschitz: f64) -> Vec<f64> {
        let base = 1.0 + 1.0 / (8.0 * lipschitz);
        (0..self.period())
            .map(|i| base.powi(i as i32) / (16.0 * lipschitz))
            .collect()
    }

    pub fn certify(&self, lipschitz: f64) -> ExpansionCertificate {
        ExpansionCertificate {
            data: self.clone(),
            lipschitz,
            bound_curve: self.bound_curve(lipschitz),
            growth_ok: verify_growth_bound(self, lipschitz),
        }
    }
}

/// Expansion data checked against the growth curve for a Lipschitz constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCertificate {
    pub data: ExpansionData,
    pub lipschitz: f64,
    pub bound_curve: Vec<f64>,
    pub growth_ok: bool,
}

/// Rates `lambda_i` of the unit unstable vector `v_u / |v_u|` along the orbit.
pub fn expansion_sequences(
    record: &PeriodicOrbitRecord,
    v_u: &Point,
) -> Result<ExpansionData, HyperbolicityError> {
    if !record.hyperbolic {
        return Err(HyperbolicityError::Nonhyperbolic);
    }
    let residual = record.unstable_residual(v_u);
    if !(residual < UNSTABLE_RESIDUAL) {
        return Err(HyperbolicityError::VectorNotUnstable { residual });
    }
    let mut e = v_u.normalize();
    let mut lambdas = Vec::with_capacity(record.period);
    let mut directions = Vec::with_capacity(record.period);
    for a in &record.jacobians {
        let image = a * &e;
        let lambda = image.norm();
        lambdas.push(lambda);
        directions.push(e);
        e = image / lambda;
    }
    let mut data = ExpansionData::from_multipliers(lambdas)?;
    data.directions = directions;
    Ok(data)
}

/// `Pi_i > (1 / (16 L)) (1 + 1 / (8 L))^i` for every `i = 0..m`.
pub fn verify_growth_bound(data: &ExpansionData, lipschitz: f64) -> bool {
    data.products
        .iter()
        .zip(data.bound_curve(lipschitz))
        .all(|(p, b)| *p > b)
}
