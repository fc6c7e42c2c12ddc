//! Experiment configuration files.
//!
//! A config is a TOML document with a top-level `seed`, a `[system]` table
//! selected by `kind`, a `[command]` table selected by `op`, and an optional
//! `[output]` table. Every table rejects unknown keys; errors name the key
//! path and the line.
//!
//! ```toml
//! seed = 7
//!
//! [system]
//! kind = "toral"
//! matrix = [[2, 1], [1, 1]]
//!
//! [command]
//! op = "scan"
//! family = "perturbed"
//! period = 8
//! d_values = [1e-3, 1e-4, 1e-5, 1e-6]
//!
//! [output]
//! dir = "out"
//! format = "csv"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_path_to_error::Segment;
use toml::de::{DeTable, DeValue};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub system: SystemConfig,
    pub command: CommandConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = toml::Deserializer::parse(text).map_err(|e| CliError::Config {
            path: String::new(),
            message: e.to_string(),
        })?;
        serde_path_to_error::deserialize(de).map_err(|e| {
            let mut segments: Vec<String> = e
                .path()
                .iter()
                .filter_map(|s| match s {
                    Segment::Map { key } => Some(key.clone()),
                    Segment::Seq { index } => Some(index.to_string()),
                    _ => None,
                })
                .collect();
            let inner = e.into_inner();
            let message = inner.message().to_string();
            let unknown = unknown_field(&message);
            let located = locate(text, &segments, unknown);
            let offset = match located {
                Some((path, at))
                    if unknown.is_none_or(|u| path.last().map(String::as_str) == Some(u)) =>
                {
                    segments = path;
                    Some(at)
                }
                _ => {
                    segments.extend(unknown.map(str::to_string));
                    inner.span().map(|s| s.start)
                }
            };
            let line = offset.map(|at| text[..at].matches('\n').count() + 1);
            CliError::Config {
                path: segments.join("."),
                message: match line {
                    Some(line) => format!("line {line}: {message}"),
                    None => message,
                },
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::parse(&text)
    }
}

/// The key named by an `unknown field` error.
fn unknown_field(message: &str) -> Option<&str> {
    message.strip_prefix("unknown field `")?.split('`').next()
}

/// Resolves `segments` against the document: walks as deep as the keys
/// exist, then, for an unknown field, searches the remaining subtree for the
/// key. Returns the full key path and the byte offset of the last key.
///
/// Needed because tagged enums buffer their content, which drops nested
/// path segments and spans from the deserializer's own report.
fn locate(text: &str, segments: &[String], unknown: Option<&str>) -> Option<(Vec<String>, usize)> {
    let root = DeTable::parse(text).ok()?.into_inner();
    let mut table = &root;
    let mut path = Vec::new();
    let mut offset = None;
    for seg in segments {
        let Some((key, value)) = table
            .iter()
            .find(|(k, _)| k.get_ref().as_ref() == seg.as_str())
        else {
            break;
        };
        path.push(seg.clone());
        offset = Some(key.span().start);
        match value.get_ref() {
            DeValue::Table(t) => table = t,
            _ => return Some((path, offset?)),
        }
    }
    if let Some(name) = unknown {
        if let Some((sub, at)) = find_key(table, name) {
            path.extend(sub);
            return Some((path, at));
        }
    }
    Some((path, offset?))
}

fn find_key(table: &DeTable<'_>, name: &str) -> Option<(Vec<String>, usize)> {
    if let Some((k, _)) = table.iter().find(|(k, _)| k.get_ref().as_ref() == name) {
        return Some((vec![name.to_string()], k.span().start));
    }
    table.iter().find_map(|(k, v)| match v.get_ref() {
        DeValue::Table(t) => find_key(t, name).map(|(mut p, at)| {
            p.insert(0, k.get_ref().to_string());
            (p, at)
        }),
        _ => None,
    })
}

fn cat_rows() -> Vec<Vec<i64>> {
    vec![vec![2, 1], vec![1, 1]]
}

fn default_amplitude() -> f64 {
    0.1
}

fn default_norm_samples() -> usize {
    10_000
}

fn default_half_width() -> f64 {
    10.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemConfig {
    /// `x -> Mx mod 1` for a unimodular integer matrix.
    Toral {
        #[serde(default = "cat_rows")]
        matrix: Vec<Vec<i64>>,
    },
    /// A toral automorphism composed with a sine shear of size `amplitude`.
    PerturbedToral {
        #[serde(default = "cat_rows")]
        matrix: Vec<Vec<i64>>,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        /// Sample count for the Jacobian norm bound.
        #[serde(default = "default_norm_samples")]
        norm_samples: usize,
    },
    /// `v -> Av + phi(v)` with a Jordan block and a hyperbolic tail.
    Jordan {
        #[serde(default)]
        block: BlockKind,
        #[serde(default = "JordanDefaults::l")]
        l: usize,
        #[serde(default = "JordanDefaults::eigenvalue")]
        eigenvalue: f64,
        #[serde(default = "JordanDefaults::theta")]
        theta: f64,
        #[serde(default = "JordanDefaults::tail")]
        tail: Vec<f64>,
        #[serde(default = "JordanDefaults::c")]
        c: f64,
        #[serde(default = "JordanDefaults::a_ball")]
        a_ball: f64,
        #[serde(default = "default_half_width")]
        half_width: f64,
        #[serde(default = "default_norm_samples")]
        norm_samples: usize,
    },
    /// `x -> Ax` on a box.
    Linear {
        matrix: Vec<Vec<f64>>,
        #[serde(default = "default_half_width")]
        half_width: f64,
    },
}

struct JordanDefaults;

impl JordanDefaults {
    fn l() -> usize {
        2
    }
    fn eigenvalue() -> f64 {
        1.0
    }
    fn theta() -> f64 {
        0.5
    }
    fn tail() -> Vec<f64> {
        vec![2.0]
    }
    fn c() -> f64 {
        1.0
    }
    fn a_ball() -> f64 {
        0.5
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    #[default]
    Real,
    Rotation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Jordan,
    EigenvalueOne,
    Rotation,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Noise {
    #[default]
    Gaps,
    Points,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Perturbed,
    Jordan,
    Exact,
}

/// Newton options shared by every command that shadows.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "SolverConfig::max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "SolverConfig::tolerance")]
    pub tolerance: f64,
    #[serde(default = "SolverConfig::step_damping")]
    pub step_damping: f64,
}

impl SolverConfig {
    fn max_iterations() -> usize {
        100
    }
    fn tolerance() -> f64 {
        1e-10
    }
    fn step_damping() -> f64 {
        0.5
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: Self::max_iterations(),
            tolerance: Self::tolerance(),
            step_damping: Self::step_damping(),
        }
    }
}

fn default_d_values() -> Vec<f64> {
    vec![1e-3, 1e-4, 1e-5, 1e-6]
}

fn default_period() -> usize {
    8
}

fn default_samples() -> usize {
    1
}

fn default_k() -> usize {
    25
}

fn default_d() -> f64 {
    1e-5
}

fn default_lipschitz() -> f64 {
    1.0
}

fn default_floor() -> f64 {
    0.1
}

fn default_lengths() -> Vec<usize> {
    vec![2, 4, 8, 16]
}

fn default_window() -> usize {
    20
}

fn default_radius() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CommandConfig {
    /// Build a staircase witness on a Jordan model.
    Witness {
        construction: Construction,
        d: f64,
        k: usize,
        /// Driving direction for rotation blocks.
        #[serde(default)]
        w: Option<[f64; 2]>,
    },
    /// Shadow one pseudotrajectory: read from `input`, or a perturbed orbit.
    Shadow {
        #[serde(default)]
        input: Option<PathBuf>,
        #[serde(default)]
        point: Option<Vec<f64>>,
        #[serde(default = "default_period")]
        period: usize,
        #[serde(default = "default_d")]
        d: f64,
        #[serde(default)]
        noise: Noise,
        #[serde(default = "default_window")]
        expansivity_window: usize,
        #[serde(default = "default_radius")]
        expansivity_radius: f64,
        #[serde(default)]
        solver: SolverConfig,
    },
    /// Lipschitz scan over decreasing step sizes.
    Scan {
        family: Family,
        #[serde(default = "default_d_values")]
        d_values: Vec<f64>,
        #[serde(default)]
        point: Option<Vec<f64>>,
        #[serde(default = "default_period")]
        period: usize,
        #[serde(default)]
        noise: Noise,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default = "default_k")]
        k: usize,
        #[serde(default)]
        solver: SolverConfig,
    },
    /// Multipliers, splitting and optional certificates for one orbit.
    Orbit {
        #[serde(default)]
        point: Option<Vec<f64>>,
        period: usize,
        #[serde(default)]
        lipschitz: Option<f64>,
        /// Fit uniform hyperbolicity constants up to this horizon when positive.
        #[serde(default)]
        horizon: usize,
    },
    /// Unstable-correction witness and expansion certificate for one orbit.
    #[serde(alias = "expansion")]
    Lemma6 {
        #[serde(default)]
        point: Option<Vec<f64>>,
        period: usize,
        #[serde(default = "default_d")]
        d: f64,
        #[serde(default)]
        n_start: Option<usize>,
        #[serde(default = "default_lipschitz")]
        lipschitz: f64,
    },
    /// Splitting angles over enumerated periodic points or one orbit.
    Angles {
        #[serde(default)]
        max_period: Option<usize>,
        #[serde(default)]
        point: Option<Vec<f64>>,
        #[serde(default)]
        period: Option<usize>,
        #[serde(default = "default_floor")]
        floor: f64,
    },
    /// Exact periodic points of a toral automorphism.
    Enumerate { period: usize },
    /// Homoclinic splices at the fixed point with growing excursions.
    Splice {
        #[serde(default = "default_lengths")]
        lengths: Vec<usize>,
        /// Copies of the fixed point per splice; defaults to each length.
        #[serde(default)]
        dwell: Option<usize>,
        #[serde(default)]
        solver: SolverConfig,
    },
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Witness { .. } => "witness",
            CommandConfig::Shadow { .. } => "shadow",
            CommandConfig::Scan { .. } => "scan",
            CommandConfig::Orbit { .. } => "orbit",
            CommandConfig::Lemma6 { .. } => "lemma6",
            CommandConfig::Angles { .. } => "angles",
            CommandConfig::Enumerate { .. } => "enumerate",
            CommandConfig::Splice { .. } => "splice",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Table,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "OutputConfig::default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub format: Format,
}

impl OutputConfig {
    fn default_dir() -> PathBuf {
        PathBuf::from("shadowlab-out")
    }
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: Self::default_dir(),
            format: Format::default(),
        }
    }
}
