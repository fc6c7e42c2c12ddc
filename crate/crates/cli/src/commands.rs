//! Command dispatch. Each command writes its reports into the output
//! directory and returns a one-paragraph summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use shadowlab_core::hyperbolicity::{periodic_point_count, report_csv, report_text, OrbitReport};
use shadowlab_core::pseudo::{
    cyclic_gaps, homoclinic_splice, perturb_orbit, perturb_orbit_along_gaps, read_csv, write_csv,
};
use shadowlab_core::shadow::{
    ExactOrbitFamily, JordanWitnessFamily, NoiseMode, PerturbedOrbitFamily,
};
use shadowlab_core::{
    analyze_periodic_orbit, closed_form_linear_shadow, defect, direct_shadow_lower_bound,
    enumerate_periodic_points_toral, evaluate, expansion_sequences, expansion_witness,
    extract_uniform_constants, find_periodic_shadow, lipschitz_scan, orbit_segment, subspace_angle,
    theoretical_linear_lipschitz_bound, verify_periodicity_by_expansivity, witness_eigenvalue_one,
    witness_jordan, witness_jordan_general, witness_rotation, DiscreteSystem, ExpansionCertificate,
    JordanBlock, PeriodicOrbitRecord, PeriodicPseudotrajectory, Point, ShadowOptions, WitnessKind,
    WitnessMeta,
};

use crate::config::{CommandConfig, Construction, ExperimentConfig, Family, Noise, SolverConfig};
use crate::output::{coords, num, opt_num, OutputDir, Table};
use crate::system::System;
use crate::{CliError, OUT_DIR_ENV};

/// Largest `dist(f^m(p), p)` accepted for a user-supplied periodic point.
const PERIODIC_TOLERANCE: f64 = 1e-8;

/// Library operations reached by each command. The coverage test checks
/// that together they span the whole library surface.
pub const DISPATCH: &[(&str, &[&str])] = &[
    (
        "witness",
        &[
            "witness_jordan",
            "witness_jordan_general",
            "witness_eigenvalue_one",
            "witness_rotation",
            "direct_shadow_lower_bound",
            "defect",
        ],
    ),
    (
        "shadow",
        &[
            "find_periodic_shadow",
            "defect",
            "evaluate",
            "orbit_segment",
            "verify_periodicity_by_expansivity",
            "closed_form_linear_shadow",
            "theoretical_linear_lipschitz_bound",
            "direct_shadow_lower_bound",
            "estimate_norm_bound",
        ],
    ),
    (
        "scan",
        &[
            "lipschitz_scan",
            "find_periodic_shadow",
            "witness_jordan_general",
            "direct_shadow_lower_bound",
            "theoretical_linear_lipschitz_bound",
        ],
    ),
    (
        "orbit",
        &[
            "analyze_periodic_orbit",
            "expansion_sequences",
            "verify_growth_bound",
            "extract_uniform_constants",
            "subspace_angle",
            "estimate_norm_bound",
        ],
    ),
    (
        "lemma6",
        &[
            "expansion_witness",
            "expansion_sequences",
            "verify_growth_bound",
            "find_periodic_shadow",
        ],
    ),
    (
        "angles",
        &[
            "enumerate_periodic_points_toral",
            "analyze_periodic_orbit",
            "subspace_angle",
        ],
    ),
    ("enumerate", &["enumerate_periodic_points_toral"]),
    (
        "splice",
        &["splice_cycle", "find_periodic_shadow", "defect"],
    ),
];

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub summary: String,
    pub files: Vec<PathBuf>,
    /// Set by a scan whose verdict is diverging.
    pub diverging: bool,
}

/// Loads a config file and runs it. Relative input paths resolve against
/// the config's directory; the output directory comes from
/// `SHADOWLAB_OUT_DIR` when set.
pub fn run_file(path: &Path) -> Result<Outcome, CliError> {
    let cfg = ExperimentConfig::load(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let out = std::env::var_os(OUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| cfg.output.dir.clone());
    run(&cfg, base, &out)
}

pub fn run(cfg: &ExperimentConfig, base: &Path, out_dir: &Path) -> Result<Outcome, CliError> {
    let system = System::build(&cfg.system)?;
    let out = OutputDir::create(out_dir.to_path_buf(), cfg.output.format)?;
    let mut ctx = Context {
        system: &system,
        seed: cfg.seed,
        base,
        out: &out,
        files: Vec::new(),
        diverging: false,
    };
    let summary = match &cfg.command {
        CommandConfig::Witness {
            construction,
            d,
            k,
            w,
        } => ctx.witness(*construction, *d, *k, *w),
        CommandConfig::Shadow {
            input,
            point,
            period,
            d,
            noise,
            expansivity_window,
            expansivity_radius,
            solver,
        } => ctx.shadow(ShadowRequest {
            input: input.as_deref(),
            point,
            period: *period,
            d: *d,
            noise: *noise,
            window: *expansivity_window,
            radius: *expansivity_radius,
            solver: *solver,
        }),
        CommandConfig::Scan {
            family,
            d_values,
            point,
            period,
            noise,
            samples,
            k,
            solver,
        } => ctx.scan(
            *family, d_values, point, *period, *noise, *samples, *k, *solver,
        ),
        CommandConfig::Orbit {
            point,
            period,
            lipschitz,
            horizon,
        } => ctx.orbit(point, *period, *lipschitz, *horizon),
        CommandConfig::Lemma6 {
            point,
            period,
            d,
            n_start,
            lipschitz,
        } => ctx.expansion(point, *period, *d, *n_start, *lipschitz),
        CommandConfig::Angles {
            max_period,
            point,
            period,
            floor,
        } => ctx.angles(*max_period, point, *period, *floor),
        CommandConfig::Enumerate { period } => ctx.enumerate(*period),
        CommandConfig::Splice {
            lengths,
            dwell,
            solver,
        } => ctx.splice(lengths, *dwell, *solver),
    }?;
    Ok(Outcome {
        summary,
        files: ctx.files,
        diverging: ctx.diverging,
    })
}

fn options(s: SolverConfig) -> ShadowOptions {
    ShadowOptions {
        max_iterations: s.max_iterations,
        tolerance: s.tolerance,
        step_damping: s.step_damping,
        ..ShadowOptions::default()
    }
}

fn unstable_vector(record: &PeriodicOrbitRecord, command: &'static str) -> Result<Point, CliError> {
    record
        .unstable_basis()
        .filter(|b| b.ncols() > 0)
        .map(|b| b.column(0).into_owned())
        .ok_or_else(|| CliError::unsupported(command, "orbit has no unstable direction"))
}

struct ShadowRequest<'a> {
    input: Option<&'a Path>,
    point: &'a Option<Vec<f64>>,
    period: usize,
    d: f64,
    noise: Noise,
    window: usize,
    radius: f64,
    solver: SolverConfig,
}

struct Context<'a> {
    system: &'a System,
    seed: u64,
    base: &'a Path,
    out: &'a OutputDir,
    files: Vec<PathBuf>,
    diverging: bool,
}

impl Context<'_> {
    fn sys(&self) -> &dyn DiscreteSystem {
        self.system.dynamic()
    }

    fn table(&mut self, stem: &str, table: &Table) -> Result<(), CliError> {
        let path = self.out.write_table(stem, table)?;
        self.files.push(path);
        Ok(())
    }

    fn raw(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = self.out.write_raw(name, body)?;
        self.files.push(path);
        Ok(())
    }

    /// The orbit `p, f(p), .., f^(m-1)(p)` after checking `f^m(p) = p`.
    fn periodic_orbit(&self, p: &Point, m: usize) -> Result<Vec<Point>, CliError> {
        if m == 0 {
            return Err(CliError::Config {
                path: "command.period".into(),
                message: "period must be positive".into(),
            });
        }
        let back = evaluate(self.sys(), p, m as i64)?;
        let gap = self.sys().space().dist(&back, p);
        if gap.is_nan() || gap > PERIODIC_TOLERANCE {
            return Err(CliError::Config {
                path: "command.point".into(),
                message: format!("point does not return after {m} steps (gap {gap:e})"),
            });
        }
        Ok(orbit_segment(self.sys(), p, 0, m as i64 - 1)?)
    }

    fn witness(
        &mut self,
        construction: Construction,
        d: f64,
        k: usize,
        w: Option<[f64; 2]>,
    ) -> Result<String, CliError> {
        let model = self
            .system
            .jordan()
            .ok_or_else(|| CliError::unsupported("witness", "needs a jordan system"))?;
        let witness = match (construction, model.block()) {
            (Construction::Jordan, JordanBlock::Real { size: 2, .. }) => {
                witness_jordan(model, d, k)?
            }
            (Construction::Jordan, _) => witness_jordan_general(model, d, k)?,
            (Construction::EigenvalueOne, _) => witness_eigenvalue_one(model, d, k)?,
            (Construction::Rotation, _) => witness_rotation(model, d, k, w)?,
        };
        let lower = direct_shadow_lower_bound(model, &witness.pseudo).ok();
        let measured = defect(model, witness.pseudo.points());
        let meta = &witness.meta;

        let mut t = Table::key_value();
        t.kv("kind", meta.kind);
        t.kv("period", meta.period);
        t.kv("d", num(d));
        t.kv("K", k);
        t.kv("defect", num(measured));
        t.kv("Y", opt_num(meta.y_max));
        t.kv("Z1", meta.z1.map_or("-".into(), |z| z.to_string()));
        t.kv("Z2", meta.z2.map_or("-".into(), |z| z.to_string()));
        t.kv("lower_bound", opt_num(lower));
        t.kv("lower_bound_over_d", opt_num(lower.map(|b| b / d)));
        self.table("witness", &t)?;
        self.raw("pseudotrajectory.csv", &write_csv(&witness.pseudo, meta))?;

        let mut s = format!(
            "Built a {} witness with K = {k} and d = {d:?}: period {}, measured defect {measured:?}.",
            meta.kind, meta.period
        );
        if let Some(b) = lower {
            let _ = write!(
                s,
                " Every periodic orbit of the linear model stays at least {b:?} away, so the shadowing distance over the defect is at least {}.",
                num(b / d)
            );
        }
        Ok(s)
    }

    fn perturbed(
        &self,
        orbit: &[Point],
        d: f64,
        noise: Noise,
    ) -> Result<PeriodicPseudotrajectory, CliError> {
        Ok(match noise {
            Noise::Gaps => perturb_orbit_along_gaps(self.sys(), orbit, d, self.seed)?,
            Noise::Points => perturb_orbit(self.sys(), orbit, d, self.seed)?,
        })
    }

    fn shadow(&mut self, req: ShadowRequest<'_>) -> Result<String, CliError> {
        let pseudo = match req.input {
            Some(path) => {
                let path = self.base.join(path);
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io {
                    path: path.clone(),
                    source: e,
                })?;
                read_csv(self.sys(), &text)?.0
            }
            None => {
                let p = self.system.point(req.point)?;
                let orbit = self.periodic_orbit(&p, req.period)?;
                self.perturbed(&orbit, req.d, req.noise)?
            }
        };
        let q = pseudo.period();
        let measured = defect(self.sys(), pseudo.points());
        let sol = find_periodic_shadow(self.sys(), &pseudo, &options(req.solver))?;
        let expansive = verify_periodicity_by_expansivity(
            self.sys(),
            &sol.orbit_point,
            sol.minimal_period,
            req.radius,
            req.window,
        );
        let linear_bound = self
            .sys()
            .linear_part()
            .map(|a| theoretical_linear_lipschitz_bound(&a, q))
            .filter(|b| b.is_finite());
        let closed_gap = match self.sys().linear_part() {
            Some(a) => {
                let z = closed_form_linear_shadow(&a, &cyclic_gaps(self.sys(), pseudo.points()))?;
                let space = self.sys().space();
                Some(
                    pseudo
                        .points()
                        .iter()
                        .zip(&z)
                        .zip(&sol.orbit)
                        .map(|((x, z), y)| space.dist(&space.translate(x, &-z), y))
                        .fold(0.0, f64::max),
                )
            }
            None => None,
        };
        let lower = self
            .system
            .jordan()
            .and_then(|m| direct_shadow_lower_bound(m, &pseudo).ok());

        let mut t = Table::key_value();
        t.kv("period", q);
        t.kv("defect", num(measured));
        t.kv("sup_distance", num(sol.sup_distance));
        t.kv("ratio", num(sol.ratio));
        t.kv("converged", sol.converged);
        t.kv("residual", num(sol.residual));
        t.kv("iterations", sol.iterations);
        t.kv("minimal_period", sol.minimal_period);
        t.kv("expansivity_check", expansive);
        t.kv("norm_bound", num(self.system.norm_bound()));
        t.kv("linear_bound", opt_num(linear_bound));
        t.kv("closed_form_difference", opt_num(closed_gap));
        t.kv("lower_bound", opt_num(lower));
        self.table("shadow", &t)?;
        let mut meta = WitnessMeta::new(WitnessKind::Custom, q);
        meta.d = Some(measured);
        let orbit = PeriodicPseudotrajectory::measure(self.sys(), sol.orbit.clone())?;
        self.raw("shadow_orbit.csv", &write_csv(&orbit, &meta))?;

        let mut s = format!(
            "Shadowed a period-{q} pseudotrajectory with defect {measured:?} on the {} system: the periodic orbit found lies within {} (ratio {}) after {} Newton iterations, minimal period {}, expansivity check {}.",
            self.system.kind(),
            num(sol.sup_distance),
            num(sol.ratio),
            sol.iterations,
            sol.minimal_period,
            if expansive { "passed" } else { "failed" },
        );
        if let Some(b) = linear_bound {
            let _ = write!(s, " The linear bound for this period is {b:?}.");
        }
        Ok(s)
    }

    #[allow(clippy::too_many_arguments)]
    fn scan(
        &mut self,
        family: Family,
        d_values: &[f64],
        point: &Option<Vec<f64>>,
        period: usize,
        noise: Noise,
        samples: usize,
        k: usize,
        solver: SolverConfig,
    ) -> Result<String, CliError> {
        let opts = options(solver);
        let sys = self.sys();
        let (scan, period) = match family {
            Family::Perturbed | Family::Exact => {
                let p = self.system.point(point)?;
                let orbit = self.periodic_orbit(&p, period)?;
                if family == Family::Exact {
                    let pseudo = PeriodicPseudotrajectory::measure(sys, orbit)?;
                    (
                        lipschitz_scan(sys, &ExactOrbitFamily { pseudo }, d_values, &opts)?,
                        period,
                    )
                } else {
                    let mut f = PerturbedOrbitFamily::new(sys, orbit, self.seed);
                    f.mode = match noise {
                        Noise::Gaps => NoiseMode::Gaps,
                        Noise::Points => NoiseMode::Points,
                    };
                    f.samples = samples;
                    (lipschitz_scan(sys, &f, d_values, &opts)?, period)
                }
            }
            Family::Jordan => {
                let model = self.system.jordan().ok_or_else(|| {
                    CliError::unsupported("scan", "jordan family needs a jordan system")
                })?;
                let period = witness_jordan_general(model, d_values[0], k)?.meta.period;
                (
                    lipschitz_scan(sys, &JordanWitnessFamily { model, k }, d_values, &opts)?,
                    period,
                )
            }
        };
        let linear_bound = sys
            .linear_part()
            .map(|a| theoretical_linear_lipschitz_bound(&a, period))
            .filter(|b| b.is_finite());
        let csv = scan.to_csv();
        let text = scan.to_table();
        let path = self.out.write_report("scan", &csv, &text)?;
        self.files.push(path);
        self.diverging = scan.diverging;

        let converged = scan.rows.iter().filter(|r| r.converged).count();
        let mut s = format!(
            "Scanned {} step sizes from {} down to {} on period-{period} pseudotrajectories: {converged} converged, largest converged ratio {}.",
            scan.rows.len(),
            num(d_values[0]),
            num(d_values[d_values.len() - 1]),
            num(scan.estimated_l),
        );
        if let Some(b) = linear_bound {
            let _ = write!(s, " The linear bound for this period is {b:?}.");
        }
        if let Some(lb) = scan
            .rows
            .iter()
            .filter_map(|r| r.lower_bound.map(|b| b / r.d))
            .reduce(f64::min)
        {
            let _ = write!(
                s,
                " Proven lower bounds give shadowing distance over d of at least {lb:?}."
            );
        }
        let _ = write!(
            s,
            " Verdict: {}.",
            if scan.diverging {
                "diverging, no Lipschitz constant fits"
            } else {
                "bounded"
            }
        );
        Ok(s)
    }

    fn orbit(
        &mut self,
        point: &Option<Vec<f64>>,
        period: usize,
        lipschitz: Option<f64>,
        horizon: usize,
    ) -> Result<String, CliError> {
        let p = self.system.point(point)?;
        let record = analyze_periodic_orbit(self.sys(), &p, period)?;
        let certificate = match lipschitz {
            Some(l) => {
                let v_u = unstable_vector(&record, "orbit")?;
                Some(expansion_sequences(&record, &v_u)?.certify(l))
            }
            None => None,
        };
        let report = [OrbitReport::new(&record, certificate.as_ref())];
        let path = self
            .out
            .write_report("orbit", &report_csv(&report), &report_text(&report))?;
        self.files.push(path);
        if let Some(c) = &certificate {
            self.table("certificate", &certificate_table(c))?;
        }
        let norm = self.system.norm_bound();
        let mut s = format!(
            "The period-{period} orbit of ({}) is {}hyperbolic with unstable index {}; the Jacobian norm bound is {norm:?}.",
            coords(&p),
            if record.hyperbolic { "" } else { "not " },
            record.index,
        );
        if let Some(c) = &certificate {
            let _ = write!(
                s,
                " Expansion certificate with L = {}: tau = {}, a_m = {}, growth bound {}.",
                num(c.lipschitz),
                num(c.data.tau),
                num(c.data.a[c.data.period()]),
                if c.growth_ok { "holds" } else { "fails" }
            );
        }
        if horizon > 0 {
            let k = extract_uniform_constants(std::slice::from_ref(&record), horizon)?;
            let _ = write!(
                s,
                " Uniform constants over {horizon} steps: C = {}, lambda = {}.",
                num(k.c),
                num(k.lambda)
            );
        }
        Ok(s)
    }

    fn expansion(
        &mut self,
        point: &Option<Vec<f64>>,
        period: usize,
        d: f64,
        n_start: Option<usize>,
        lipschitz: f64,
    ) -> Result<String, CliError> {
        let p = self.system.point(point)?;
        let record = analyze_periodic_orbit(self.sys(), &p, period)?;
        let v_u = unstable_vector(&record, "lemma6")?;
        let ew = expansion_witness(self.sys(), &p, period, &v_u, d, n_start)?;
        let certificate = ew.data.certify(lipschitz);
        let sol = find_periodic_shadow(self.sys(), &ew.witness.pseudo, &ShadowOptions::default())?;
        let space = self.sys().space();
        let to_orbit = sol
            .orbit
            .iter()
            .enumerate()
            .map(|(i, y)| space.dist(y, &ew.orbit[i % period]))
            .fold(0.0, f64::max);
        let measured = ew.witness.pseudo.defect();

        let mut t = Table::key_value();
        t.kv("period", ew.witness.meta.period);
        t.kv("m", period);
        t.kv("n_pullback", ew.n_pullback);
        t.kv("d", num(d));
        t.kv("defect", num(measured));
        t.kv("defect_over_d", num(measured / d));
        t.kv("tau", num(ew.data.tau));
        t.kv("a_m", num(ew.data.a[period]));
        t.kv("growth_ok", certificate.growth_ok);
        t.kv("shadow_converged", sol.converged);
        t.kv("shadow_to_orbit", num(to_orbit));
        self.table("expansion", &t)?;
        self.table("certificate", &certificate_table(&certificate))?;
        self.raw(
            "pseudotrajectory.csv",
            &write_csv(&ew.witness.pseudo, &ew.witness.meta),
        )?;

        Ok(format!(
            "Built the unstable-correction pseudotrajectory of the period-{period} orbit of ({}) with d = {d:?} and pullback count {}: period {}, defect {measured:?} ({} d). Newton returns the orbit itself to within {to_orbit:?}. With L = {lipschitz:?} the growth bound {}, and a_m = {}.",
            coords(&p),
            ew.n_pullback,
            ew.witness.meta.period,
            num(measured / d),
            if certificate.growth_ok { "holds" } else { "fails" },
            num(ew.data.a[period]),
        ))
    }

    fn angles(
        &mut self,
        max_period: Option<usize>,
        point: &Option<Vec<f64>>,
        period: Option<usize>,
        floor: f64,
    ) -> Result<String, CliError> {
        let mut t = Table::new(["point", "period", "beta"]);
        let mut betas = Vec::new();
        match (max_period, period) {
            (Some(max), None) => {
                let toral = self.system.toral().ok_or_else(|| {
                    CliError::unsupported(
                        "angles",
                        "max_period enumerates points of a toral system",
                    )
                })?;
                for m in 1..=max {
                    for rp in enumerate_periodic_points_toral(toral.matrix(), m)? {
                        let record = analyze_periodic_orbit(toral, &rp.to_point(), m)?;
                        let beta = subspace_angle(&record)?.minimum;
                        t.push([rp.to_string(), m.to_string(), num(beta)]);
                        betas.push(beta);
                    }
                }
            }
            (None, Some(m)) => {
                let p = self.system.point(point)?;
                let record = analyze_periodic_orbit(self.sys(), &p, m)?;
                for (q, beta) in record.orbit.iter().zip(subspace_angle(&record)?.per_point) {
                    t.push([coords(q), m.to_string(), num(beta)]);
                    betas.push(beta);
                }
            }
            _ => {
                return Err(CliError::Config {
                    path: "command".into(),
                    message: "angles needs exactly one of max_period or period".into(),
                })
            }
        }
        self.table("angles", &t)?;
        let lo = betas.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = betas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(format!(
            "Measured the splitting angle at {} periodic points: minimum {lo:?}, maximum {hi:?}, spread {}. The floor {floor:?} is {}.",
            betas.len(),
            num(hi - lo),
            if lo >= floor { "respected" } else { "violated" }
        ))
    }

    fn enumerate(&mut self, period: usize) -> Result<String, CliError> {
        let matrix = self
            .system
            .integer_matrix()
            .ok_or_else(|| CliError::unsupported("enumerate", "needs a toral system"))?;
        let points = enumerate_periodic_points_toral(matrix, period)?;
        let count = periodic_point_count(matrix, period)?;
        let mut t = Table::new(["point", "numerators", "denominator", "coordinates"]);
        for p in &points {
            let r = p.reduced();
            t.push([
                r.to_string(),
                p.numerators
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                p.denominator.to_string(),
                coords(&p.to_point()),
            ]);
        }
        self.table("enumerate", &t)?;
        Ok(format!(
            "Found {} points of period dividing {period}, matching |det(M^{period} - I)| = {count}.",
            points.len()
        ))
    }

    fn splice(
        &mut self,
        lengths: &[usize],
        dwell: Option<usize>,
        solver: SolverConfig,
    ) -> Result<String, CliError> {
        let toral = self
            .system
            .toral()
            .ok_or_else(|| CliError::unsupported("splice", "needs a toral system"))?;
        let opts = options(solver);
        let mut t = Table::new([
            "length",
            "dwell",
            "period",
            "defect",
            "converged",
            "sup_distance",
            "ratio",
            "distance_to_fixed_point",
        ]);
        let mut defects = Vec::new();
        let mut ratios = Vec::new();
        let mut last_distance = f64::NAN;
        for &k in lengths {
            let dwell = dwell.unwrap_or(k);
            let splice = homoclinic_splice(toral, dwell, k, k)?;
            let measured = defect(toral, splice.pseudo.points());
            let sol = find_periodic_shadow(toral, &splice.pseudo, &opts)?;
            let to_fixed = toral.space().dist(&sol.orbit[0], &Point::zeros(2));
            t.push([
                k.to_string(),
                dwell.to_string(),
                splice.pseudo.period().to_string(),
                num(measured),
                sol.converged.to_string(),
                num(sol.sup_distance),
                num(sol.ratio),
                num(to_fixed),
            ]);
            defects.push(measured);
            ratios.push(sol.ratio);
            last_distance = to_fixed;
        }
        self.table("splice", &t)?;
        let decreasing = defects.windows(2).all(|w| w[1] < w[0]);
        Ok(format!(
            "Spliced {} homoclinic excursions into the fixed point: defects {} {}, largest shadow ratio {}, and the last periodic orbit passes within {last_distance:?} of the fixed point.",
            defects.len(),
            defects.iter().map(|d| num(*d)).collect::<Vec<_>>().join(", "),
            if decreasing { "strictly decreasing" } else { "not strictly decreasing" },
            num(ratios.iter().copied().fold(0.0, f64::max)),
        ))
    }
}

fn certificate_table(c: &ExpansionCertificate) -> Table {
    let m = c.data.period();
    let mut t = Table::new(["i", "lambda", "a", "product", "bound"]);
    for i in 0..=m {
        t.push([
            i.to_string(),
            c.data.lambdas.get(i).map_or("-".into(), |x| num(*x)),
            num(c.data.a[i]),
            c.data.products.get(i).map_or("-".into(), |x| num(*x)),
            c.bound_curve.get(i).map_or("-".into(), |x| num(*x)),
        ]);
    }
    t
}
