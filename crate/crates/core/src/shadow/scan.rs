use std::fmt::Write as _;

use rayon::prelude::*;

use super::{direct_shadow_lower_bound, find_periodic_shadow, ShadowError, ShadowOptions};
use crate::pseudo::{
    perturb_orbit, perturb_orbit_along_gaps, witness_jordan_general, PeriodicPseudotrajectory,
    PseudoError,
};
use crate::systems::{DiscreteSystem, JordanModel, Point};

/// Relative slack when testing that `lower_bound / d` does not decrease.
const MONOTONE_SLACK: f64 = 1e-9;

/// A one-parameter family of periodic pseudotrajectories indexed by a step
/// size `d`.
pub trait PseudoFamily: Sync {
    fn generate(&self, d: f64, sample: usize) -> Result<PeriodicPseudotrajectory, PseudoError>;

    /// Number of pseudotrajectories generated per `d`; the scan keeps the
    /// worst ratio.
    fn samples(&self) -> usize {
        1
    }

    /// A proven lower bound on the shadowing distance, when one is known.
    fn lower_bound(&self, _pseudo: &PeriodicPseudotrajectory) -> Option<f64> {
        None
    }
}

/// How a [`PerturbedOrbitFamily`] perturbs its orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseMode {
    /// Points moved uniformly within distance `d`.
    Points,
    /// Gaps prescribed uniformly within `d` and propagated through the
    /// linearisation, see [`perturb_orbit_along_gaps`].
    Gaps,
}

/// A true periodic orbit perturbed by seeded noise of size `d`.
#[derive(Debug)]
pub struct PerturbedOrbitFamily<'a, S: ?Sized> {
    pub system: &'a S,
    pub orbit: Vec<Point>,
    pub seed: u64,
    pub mode: NoiseMode,
    pub samples: usize,
}

impl<'a, S: DiscreteSystem + ?Sized> PerturbedOrbitFamily<'a, S> {
    pub fn new(system: &'a S, orbit: Vec<Point>, seed: u64) -> Self {
        PerturbedOrbitFamily {
            system,
            orbit,
            seed,
            mode: NoiseMode::Gaps,
            samples: 1,
        }
    }
}

impl<S: DiscreteSystem + ?Sized> PseudoFamily for PerturbedOrbitFamily<'_, S> {
    fn generate(&self, d: f64, sample: usize) -> Result<PeriodicPseudotrajectory, PseudoError> {
        let seed = self.seed.wrapping_add(sample as u64);
        match self.mode {
            NoiseMode::Points => perturb_orbit(self.system, &self.orbit, d, seed),
            NoiseMode::Gaps => perturb_orbit_along_gaps(self.system, &self.orbit, d, seed),
        }
    }

    fn samples(&self) -> usize {
        self.samples.max(1)
    }
}

/// Jordan staircases with a fixed `K`.
#[derive(Debug, Clone)]
pub struct JordanWitnessFamily<'a> {
    pub model: &'a JordanModel,
    pub k: usize,
}

impl PseudoFamily for JordanWitnessFamily<'_> {
    fn generate(&self, d: f64, _sample: usize) -> Result<PeriodicPseudotrajectory, PseudoError> {
        Ok(witness_jordan_general(self.model, d, self.k)?.pseudo)
    }

    fn lower_bound(&self, pseudo: &PeriodicPseudotrajectory) -> Option<f64> {
        direct_shadow_lower_bound(self.model, pseudo).ok()
    }
}

/// The same exact orbit for every `d`.
#[derive(Debug, Clone)]
pub struct ExactOrbitFamily {
    pub pseudo: PeriodicPseudotrajectory,
}

impl PseudoFamily for ExactOrbitFamily {
    fn generate(&self, _d: f64, _sample: usize) -> Result<PeriodicPseudotrajectory, PseudoError> {
        Ok(self.pseudo.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    /// Nominal step size.
    pub d: f64,
    /// Measured defect of the generated pseudotrajectory.
    pub defect: f64,
    pub epsilon_star: f64,
    pub ratio: f64,
    pub converged: bool,
    pub lower_bound: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzScan {
    /// One row per `d`, in the order given (decreasing `d`).
    pub rows: Vec<ScanRow>,
    /// Largest converged ratio; zero when nothing converged.
    pub estimated_l: f64,
    pub diverging: bool,
}

impl LipschitzScan {
    /// Header `d,defect,epsilon_star,ratio,converged,lower_bound`; missing
    /// values are empty fields.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = "writing to memory";
        w.write_record([
            "d",
            "defect",
            "epsilon_star",
            "ratio",
            "converged",
            "lower_bound",
        ])
        .expect(fail);
        for r in &self.rows {
            w.write_record([
                r.d.to_string(),
                r.defect.to_string(),
                r.epsilon_star.to_string(),
                r.ratio.to_string(),
                r.converged.to_string(),
                r.lower_bound.map_or(String::new(), |v| v.to_string()),
            ])
            .expect(fail);
        }
        String::from_utf8(w.into_inner().expect(fail)).expect("csv output is utf-8")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>12} {:>12} {:>14} {:>12} {:>9} {:>12}",
            "d", "defect", "epsilon_star", "ratio", "converged", "lower_bound"
        );
        for r in &self.rows {
            let lb = r
                .lower_bound
                .map_or("-".to_string(), |v| format!("{v:.6e}"));
            let _ = writeln!(
                out,
                "{:>12.4e} {:>12.4e} {:>14.6e} {:>12.6} {:>9} {:>12}",
                r.d, r.defect, r.epsilon_star, r.ratio, r.converged, lb
            );
        }
        let _ = writeln!(out, "estimated L = {}", self.estimated_l);
        let _ = writeln!(out, "diverging   = {}", self.diverging);
        out
    }
}

/// Shadows the family member at each `d` and estimates the Lipschitz
/// constant as the largest converged ratio.
///
/// The scan is flagged diverging when a converged ratio at least doubles
/// relative to an earlier (larger `d`) row, or when some row fails to
/// converge while every row carries a positive proven lower bound whose
/// ratio to `d` does not decrease.
pub fn lipschitz_scan<S: DiscreteSystem + ?Sized, F: PseudoFamily + ?Sized>(
    sys: &S,
    family: &F,
    d_values: &[f64],
    opts: &ShadowOptions,
) -> Result<LipschitzScan, ShadowError> {
    if d_values.len() < 3 {
        return Err(ShadowError::InvalidScan(
            "at least three d values are required".into(),
        ));
    }
    if d_values.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(ShadowError::InvalidScan(
            "d values must be positive and finite".into(),
        ));
    }
    if d_values.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(ShadowError::InvalidScan(
            "d values must be strictly decreasing".into(),
        ));
    }

    let rows: Vec<ScanRow> = d_values
        .par_iter()
        .map(|&d| scan_row(sys, family, d, opts))
        .collect();

    let estimated_l = rows
        .iter()
        .filter(|r| r.converged)
        .map(|r| r.ratio)
        .fold(0.0, f64::max);

    let converged: Vec<f64> = rows
        .iter()
        .filter(|r| r.converged)
        .map(|r| r.ratio)
        .collect();
    let doubling = converged
        .iter()
        .enumerate()
        .any(|(i, &a)| a > 0.0 && converged[i + 1..].iter().any(|&b| b >= 2.0 * a));
    let bound_ratios: Option<Vec<f64>> = rows
        .iter()
        .map(|r| r.lower_bound.filter(|b| *b > 0.0).map(|b| b / r.d))
        .collect();
    let growing_bound =
        bound_ratios.is_some_and(|v| v.windows(2).all(|w| w[1] >= w[0] * (1.0 - MONOTONE_SLACK)));
    let failing = rows.iter().any(|r| !r.converged);
    Ok(LipschitzScan {
        rows,
        estimated_l,
        diverging: doubling || (failing && growing_bound),
    })
}

fn scan_row<S: DiscreteSystem + ?Sized, F: PseudoFamily + ?Sized>(
    sys: &S,
    family: &F,
    d: f64,
    opts: &ShadowOptions,
) -> ScanRow {
    let mut worst: Option<ScanRow> = None;
    for sample in 0..family.samples() {
        let row = match family.generate(d, sample) {
            Err(e) => ScanRow {
                d,
                defect: f64::NAN,
                epsilon_star: f64::NAN,
                ratio: f64::NAN,
                converged: false,
                lower_bound: None,
                error: Some(e.to_string()),
            },
            Ok(pseudo) => {
                let lower_bound = family.lower_bound(&pseudo);
                let (epsilon_star, ratio, converged, error) =
                    match find_periodic_shadow(sys, &pseudo, opts) {
                        Ok(s) => (s.sup_distance, s.ratio, true, None),
                        Err(ShadowError::NoConvergence { best }) => (
                            best.sup_distance,
                            best.ratio,
                            false,
                            Some(ShadowError::NoConvergence { best }.to_string()),
                        ),
                        Err(e) => (f64::NAN, f64::NAN, false, Some(e.to_string())),
                    };
                ScanRow {
                    d,
                    defect: pseudo.defect(),
                    epsilon_star,
                    ratio,
                    converged,
                    lower_bound,
                    error,
                }
            }
        };
        // a failed sample dominates; otherwise keep the largest ratio
        let replace = match &worst {
            None => true,
            Some(w) => w.converged && (!row.converged || row.ratio > w.ratio),
        };
        if replace {
            worst = Some(row);
        }
    }
    worst.expect("at least one sample")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadow::theoretical_linear_lipschitz_bound;
    use crate::systems::{JordanBlock, ToralAutomorphism};

    const D: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];

    #[test]
    fn cat_map_scan_is_bounded() {
        let cat = ToralAutomorphism::cat_map();
        let family = PerturbedOrbitFamily::new(&cat, vec![Point::zeros(2); 8], 7);
        let scan = lipschitz_scan(&cat, &family, &D, &ShadowOptions::default()).unwrap();
        let bound = theoretical_linear_lipschitz_bound(cat.real_matrix(), 8);
        assert!(scan.rows.iter().all(|r| r.converged));
        assert!(!scan.diverging);
        assert!(scan.estimated_l <= 2.0 * bound);
        assert!(scan.rows.iter().all(|r| scan.estimated_l >= r.ratio));
    }

    #[test]
    fn jordan_scan_diverges() {
        let model = JordanModel::new(
            JordanBlock::Real {
                size: 2,
                eigenvalue: 1.0,
            },
            vec![2.0],
        )
        .unwrap()
        .with_nonlinearity(0.0);
        let family = JordanWitnessFamily {
            model: &model,
            k: 25,
        };
        let d = [1e-4, 1e-5, 1e-6, 1e-7];
        let scan = lipschitz_scan(&model, &family, &d, &ShadowOptions::default()).unwrap();
        assert!(scan.diverging);
        for r in &scan.rows {
            assert!((r.lower_bound.unwrap() / r.d - 25.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_orbit_scan() {
        let cat = ToralAutomorphism::cat_map();
        let pseudo = PeriodicPseudotrajectory::measure(&cat, vec![Point::zeros(2)]).unwrap();
        let scan = lipschitz_scan(
            &cat,
            &ExactOrbitFamily { pseudo },
            &D,
            &ShadowOptions::default(),
        )
        .unwrap();
        assert_eq!(scan.estimated_l, 0.0);
        assert!(scan.rows.iter().all(|r| r.epsilon_star == 0.0));
        assert!(!scan.diverging);
    }

    #[test]
    fn invalid_d_values() {
        let cat = ToralAutomorphism::cat_map();
        let pseudo = PeriodicPseudotrajectory::measure(&cat, vec![Point::zeros(2)]).unwrap();
        let fam = ExactOrbitFamily { pseudo };
        let opts = ShadowOptions::default();
        assert!(lipschitz_scan(&cat, &fam, &[1e-3, 1e-4], &opts).is_err());
        assert!(lipschitz_scan(&cat, &fam, &[1e-3, 1e-3, 1e-4], &opts).is_err());
    }

    #[test]
    fn csv_has_fixed_columns() {
        let cat = ToralAutomorphism::cat_map();
        let family = PerturbedOrbitFamily::new(&cat, vec![Point::zeros(2); 5], 1);
        let scan = lipschitz_scan(&cat, &family, &D, &ShadowOptions::default()).unwrap();
        let csv = scan.to_csv();
        assert!(csv.starts_with("d,defect,epsilon_star,ratio,converged,lower_bound\n0.001,"));
        assert_eq!(csv.lines().count(), 5);
    }
}
