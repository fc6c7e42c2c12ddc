//! Periodic pseudotrajectories and the constructions that produce them.
//!
//! A periodic pseudotrajectory is one period `x_0..x_{Q-1}` of a sequence
//! extended `Q`-periodically. Its defect is the largest cyclic gap
//! `dist(f(x_i), x_{(i+1) mod Q})`; the extended sequence is then a
//! `d`-pseudotrajectory for every `d` larger than the defect.

mod expansion;
mod io;
mod perturb;
mod splice;
mod staircase;

use std::fmt;

use thiserror::Error;

use crate::hyperbolicity::HyperbolicityError;
use crate::systems::{DiscreteSystem, Point, SystemError};

pub use expansion::{expansion_witness, ExpansionWitness, MAX_PULLBACK};
pub use io::{read_csv, write_csv};
pub use perturb::{perturb_orbit, perturb_orbit_along_gaps};
pub use splice::{homoclinic_point, homoclinic_splice, splice_cycle, Splice, ORBIT_GAP_TOLERANCE};
pub use staircase::{
    witness_eigenvalue_one, witness_jordan, witness_jordan_general, witness_rotation,
    StaircaseCoefficients,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PseudoError {
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("constraint-violated: {0}")]
    ConstraintViolated(String),
    #[error("wrong model: {0}")]
    WrongModel(String),
    #[error("nonhyperbolic-orbit: monodromy has a multiplier on the unit circle")]
    NonhyperbolicOrbit,
    #[error("pullback-failed: |B^-n tau e0| >= 1 for every n up to {tries}")]
    PullbackFailed { tries: usize },
    #[error("not-an-orbit: segment {segment} has gap {gap:e} after point {index}")]
    NotAnOrbit {
        segment: usize,
        index: usize,
        gap: f64,
    },
    #[error(transparent)]
    Analysis(#[from] HyperbolicityError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("format: {0}")]
    Format(String),
}

/// One period of a periodic pseudotrajectory with its measured defect.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicPseudotrajectory {
    points: Vec<Point>,
    defect: f64,
}

impl PeriodicPseudotrajectory {
    /// Wraps the points into the phase space and measures the defect.
    pub fn measure<S: DiscreteSystem + ?Sized>(
        sys: &S,
        points: Vec<Point>,
    ) -> Result<Self, PseudoError> {
        if points.is_empty() {
            return Err(PseudoError::Empty(
                "pseudotrajectory needs at least one point",
            ));
        }
        let n = sys.dim();
        if let Some(bad) = points.iter().find(|p| p.len() != n) {
            return Err(SystemError::DimensionMismatch {
                expected: n,
                found: bad.len(),
            }
            .into());
        }
        let space = sys.space();
        let points: Vec<Point> = points.into_iter().map(|p| space.wrap(p)).collect();
        let defect = defect(sys, &points);
        Ok(PeriodicPseudotrajectory { points, defect })
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    /// `x_{i mod Q}` for any integer `i`.
    pub fn point(&self, i: i64) -> &Point {
        &self.points[i.rem_euclid(self.points.len() as i64) as usize]
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

/// `max_i dist(f(x_i), x_{(i+1) mod Q})`. Zero for an empty sequence.
pub fn defect<S: DiscreteSystem + ?Sized>(sys: &S, points: &[Point]) -> f64 {
    cyclic_gaps(sys, points)
        .iter()
        .map(|g| g.norm())
        .fold(0.0, f64::max)
}

/// The cyclic gap vectors `e_i = x_{(i+1) mod Q} - f(x_i)` (shortest
/// representatives on the torus).
pub fn cyclic_gaps<S: DiscreteSystem + ?Sized>(sys: &S, points: &[Point]) -> Vec<Point> {
    let q = points.len();
    let space = sys.space();
    (0..q)
        .map(|i| space.displacement(&sys.forward(&points[i]), &points[(i + 1) % q]))
        .collect()
}

/// Which construction produced a pseudotrajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `+-d/2` steps along an eigenvalue-one direction.
    EigenvalueOneStaircase,
    /// Staircase on a real Jordan block of the given chain length.
    JordanStaircase(usize),
    /// Staircase on a rotation Jordan block of the given chain length.
    RotationStaircase(usize),
    /// Periodic correction along an unstable vector of a hyperbolic orbit.
    UnstableCorrection,
    /// Concatenated orbit segments.
    Splice,
    /// A true periodic orbit with random perturbations.
    PerturbedOrbit,
    /// Read from a file or built by hand.
    Custom,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessKind::EigenvalueOneStaircase => write!(f, "eigenvalue-one-staircase"),
            WitnessKind::JordanStaircase(l) => write!(f, "jordan-staircase-{l}"),
            WitnessKind::RotationStaircase(l) => write!(f, "rotation-staircase-{l}"),
            WitnessKind::UnstableCorrection => write!(f, "unstable-correction"),
            WitnessKind::Splice => write!(f, "splice"),
            WitnessKind::PerturbedOrbit => write!(f, "perturbed-orbit"),
            WitnessKind::Custom => write!(f, "custom"),
        }
    }
}

impl std::str::FromStr for WitnessKind {
    type Err = PseudoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let sized = |prefix: &str| -> Option<usize> { s.strip_prefix(prefix)?.parse().ok() };
        Ok(match s {
            "eigenvalue-one-staircase" => WitnessKind::EigenvalueOneStaircase,
            "unstable-correction" => WitnessKind::UnstableCorrection,
            "splice" => WitnessKind::Splice,
            "perturbed-orbit" => WitnessKind::PerturbedOrbit,
            "custom" => WitnessKind::Custom,
            _ => {
                if let Some(l) = sized("jordan-staircase-") {
                    WitnessKind::JordanStaircase(l)
                } else if let Some(l) = sized("rotation-staircase-") {
                    WitnessKind::RotationStaircase(l)
                } else {
                    return Err(PseudoError::Format(format!("unknown witness kind `{s}`")));
                }
            }
        })
    }
}

/// Parameters that reproduce a construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessMeta {
    pub kind: WitnessKind,
    pub period: usize,
    /// Nominal step size `d`.
    pub d: Option<f64>,
    /// Number of driving steps `K`.
    pub k: Option<usize>,
    /// `Y = max_k |y_k| / d`.
    pub y_max: Option<f64>,
    /// First Jordan coordinate after the driving phase, in units of `d`.
    pub z1: Option<i64>,
    /// First Jordan coordinate after the unwinding phase, in units of `d`.
    pub z2: Option<i64>,
    /// Lengths of the successive staircase phases.
    pub phases: Vec<usize>,
    /// Period of the underlying orbit.
    pub m: Option<usize>,
    /// Number of monodromy pullbacks.
    pub n_pullback: Option<usize>,
    pub segment_lengths: Vec<usize>,
}

impl WitnessMeta {
    pub fn new(kind: WitnessKind, period: usize) -> Self {
        WitnessMeta {
            kind,
            period,
            d: None,
            k: None,
            y_max: None,
            z1: None,
            z2: None,
            phases: Vec::new(),
            m: None,
            n_pullback: None,
            segment_lengths: Vec::new(),
        }
    }

    /// `key=value` pairs joined by `;`, in a fixed order.
    pub fn parameter_string(&self) -> String {
        let list = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut parts = Vec::new();
        if let Some(d) = self.d {
            parts.push(format!("d={d}"));
        }
        if let Some(k) = self.k {
            parts.push(format!("K={k}"));
        }
        if let Some(y) = self.y_max {
            parts.push(format!("Y={y}"));
        }
        if let Some(z) = self.z1 {
            parts.push(format!("Z1={z}"));
        }
        if let Some(z) = self.z2 {
            parts.push(format!("Z2={z}"));
        }
        if !self.phases.is_empty() {
            parts.push(format!("phases={}", list(&self.phases)));
        }
        if let Some(m) = self.m {
            parts.push(format!("m={m}"));
        }
        if let Some(n) = self.n_pullback {
            parts.push(format!("n={n}"));
        }
        if !self.segment_lengths.is_empty() {
            parts.push(format!("segments={}", list(&self.segment_lengths)));
        }
        parts.join(";")
    }

    pub fn parse_parameters(
        kind: WitnessKind,
        period: usize,
        s: &str,
    ) -> Result<Self, PseudoError> {
        let mut meta = WitnessMeta::new(kind, period);
        let bad = |key: &str, value: &str| {
            PseudoError::Format(format!("invalid value `{value}` for parameter `{key}`"))
        };
        for part in s.split(';').filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| PseudoError::Format(format!("malformed parameter `{part}`")))?;
            let list = || -> Result<Vec<usize>, PseudoError> {
                value
                    .split_whitespace()
                    .map(|x| x.parse().map_err(|_| bad(key, value)))
                    .collect()
            };
            match key {
                "d" => meta.d = Some(value.parse().map_err(|_| bad(key, value))?),
                "K" => meta.k = Some(value.parse().map_err(|_| bad(key, value))?),
                "Y" => meta.y_max = Some(value.parse().map_err(|_| bad(key, value))?),
                "Z1" => meta.z1 = Some(value.parse().map_err(|_| bad(key, value))?),
                "Z2" => meta.z2 = Some(value.parse().map_err(|_| bad(key, value))?),
                "phases" => meta.phases = list()?,
                "m" => meta.m = Some(value.parse().map_err(|_| bad(key, value))?),
                "n" => meta.n_pullback = Some(value.parse().map_err(|_| bad(key, value))?),
                "segments" => meta.segment_lengths = list()?,
                _ => return Err(PseudoError::Format(format!("unknown parameter `{key}`"))),
            }
        }
        Ok(meta)
    }
}

/// A constructed pseudotrajectory together with its construction record.
#[derive(Debug, Clone)]
pub struct Witness {
    pub pseudo: PeriodicPseudotrajectory,
    pub meta: WitnessMeta,
    /// The point the construction reaches after one full period; equals
    /// `pseudo.points()[0]` exactly for closed staircases.
    pub closure: Point,
}
