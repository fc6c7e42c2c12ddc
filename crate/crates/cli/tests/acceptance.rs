//! The acceptance suite. Each criterion prints one PASS/FAIL line with its
//! elapsed time against a fixed runtime limit; the test fails if any
//! criterion fails or overruns.
//!
//! Lines are written straight to the process stdout so they show up in the
//! plain `cargo test` log without `--nocapture`.

use std::collections::BTreeSet;
use std::io::Write as _;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shadowlab_core::hyperbolicity::periodic_point_count;
use shadowlab_core::pseudo::{cyclic_gaps, homoclinic_splice};
use shadowlab_core::shadow::{JordanWitnessFamily, NoiseMode, PerturbedOrbitFamily};
use shadowlab_core::{
    analyze_periodic_orbit, closed_form_linear_shadow, direct_shadow_lower_bound,
    enumerate_periodic_points_toral, expansion_sequences, expansion_witness, find_periodic_shadow,
    lipschitz_scan, subspace_angle, theoretical_linear_lipschitz_bound, verify_growth_bound,
    witness_jordan, DiscreteSystem, JordanBlock, JordanModel, LinearMap, PeriodicPseudotrajectory,
    Point, ShadowOptions, ToralAutomorphism,
};

/// Sup-norm agreement between Newton and the closed form.
const LINEAR_TOL: f64 = 1e-9;
const LINEAR_CASES: usize = 100;
const LINEAR_SEED: u64 = 20_240_601;
/// Slack on the ratio bound for the cat-map scans.
const BOUND_SLACK: f64 = 1e-9;
const SCAN_D: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];
const SCAN_PERIODS: [usize; 3] = [5, 8, 13];
const SCAN_SEEDS: std::ops::Range<u64> = 0..5;
const STAIRCASE_K: [usize; 3] = [25, 50, 100];
const STAIRCASE_D: [f64; 3] = [1e-5, 1e-6, 1e-7];
const LOWER_BOUND_TOL: f64 = 1e-12;
const FAILURE_FACTOR: f64 = 25.0;
const CAT_COUNTS: [i128; 8] = [1, 5, 16, 45, 121, 320, 841, 2205];
const TELESCOPING_TOL: f64 = 1e-9;
const CORRECTION_D: f64 = 1e-5;
const CORRECTION_DEFECT_FACTOR: f64 = 4.0;
const ORBIT_TOL: f64 = 1e-8;
const SPLICE_LENGTHS: [usize; 4] = [2, 4, 8, 16];
const ANGLE_SPREAD: f64 = 1e-8;
const ANGLE_FLOOR: f64 = 0.1;

const LIMITS: [u64; 8] = [10, 30, 10, 1, 60, 30, 30, 10];

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cat() -> ToralAutomorphism {
    ToralAutomorphism::cat_map()
}

fn sup_diff(a: &[Point], b: &[Point]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).amax())
        .fold(0.0, f64::max)
}

/// `V D V^-1` with real eigenvalues and scaled rotations, moduli in
/// `[0.2, 0.8]` or `[1.25, 5]`, and `V` kept well conditioned.
fn random_hyperbolic(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let modulus = |rng: &mut ChaCha8Rng| {
        if rng.random::<bool>() {
            rng.random_range(0.2..0.8)
        } else {
            rng.random_range(1.25..5.0)
        }
    };
    let mut d = DMatrix::zeros(n, n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && rng.random::<bool>() {
            let r = modulus(rng);
            let t: f64 = rng.random_range(0.1..3.0);
            d[(i, i)] = r * t.cos();
            d[(i, i + 1)] = -r * t.sin();
            d[(i + 1, i)] = r * t.sin();
            d[(i + 1, i + 1)] = r * t.cos();
            i += 2;
        } else {
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            d[(i, i)] = sign * modulus(rng);
            i += 1;
        }
    }
    loop {
        let v = DMatrix::from_fn(n, n, |r, c| {
            f64::from(u8::from(r == c)) + rng.random_range(-0.5..0.5)
        });
        if v.singular_values().min() > 0.2 {
            return &v * &d * v.try_inverse().unwrap();
        }
    }
}

fn linear_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(LINEAR_SEED);
    let mut worst = 0.0f64;
    for case in 0..LINEAR_CASES {
        let n = rng.random_range(1..=4);
        let q = rng.random_range(1..=32);
        let a = random_hyperbolic(&mut rng, n);
        let moduli = a.complex_eigenvalues().map(|z| z.norm());
        ensure(
            moduli
                .iter()
                .all(|m| (0.2 - 1e-9..=5.0 + 1e-9).contains(m) && (m - 1.0).abs() > 0.2),
            || format!("case {case}: multiplier moduli {moduli:?} out of range"),
        )?;
        let sys = LinearMap::new(a.clone(), 1e3).map_err(|e| e.to_string())?;
        let points: Vec<Point> = (0..q)
            .map(|_| Point::from_fn(n, |_, _| rng.random_range(-0.01..0.01)))
            .collect();
        let closed = closed_form_linear_shadow(&a, &cyclic_gaps(&sys, &points))
            .map_err(|e| e.to_string())?;
        let xi =
            PeriodicPseudotrajectory::measure(&sys, points.clone()).map_err(|e| e.to_string())?;
        let sol = find_periodic_shadow(&sys, &xi, &ShadowOptions::default())
            .map_err(|e| format!("case {case} (n={n}, Q={q}): {e}"))?;
        let expected: Vec<Point> = points.iter().zip(&closed).map(|(x, z)| x - z).collect();
        let diff = sup_diff(&sol.orbit, &expected);
        ensure(diff <= LINEAR_TOL, || {
            format!("case {case} (n={n}, Q={q}): difference {diff:e}")
        })?;
        worst = worst.max(diff);
    }
    Ok(format!(
        "{LINEAR_CASES} cases, largest difference {worst:e}"
    ))
}

/// Returns the largest converged ratio over every scan as the measured
/// Lipschitz constant.
fn cat_scans(estimated: &mut Option<f64>) -> Verdict {
    let sys = cat();
    let mut largest = 0.0f64;
    let mut scans = 0;
    for q in SCAN_PERIODS {
        let bound = theoretical_linear_lipschitz_bound(sys.real_matrix(), q);
        for mode in [NoiseMode::Gaps, NoiseMode::Points] {
            for seed in SCAN_SEEDS {
                let mut family = PerturbedOrbitFamily::new(&sys, vec![Point::zeros(2); q], seed);
                family.mode = mode;
                let scan = lipschitz_scan(&sys, &family, &SCAN_D, &ShadowOptions::default())
                    .map_err(|e| e.to_string())?;
                ensure(!scan.diverging, || {
                    format!("Q={q} {mode:?} seed {seed}: diverging")
                })?;
                for row in &scan.rows {
                    ensure(row.converged, || {
                        format!("Q={q} {mode:?} seed {seed} d={}: no convergence", row.d)
                    })?;
                    ensure(row.ratio <= bound + BOUND_SLACK, || {
                        format!(
                            "Q={q} {mode:?} seed {seed} d={}: ratio {} above {bound}",
                            row.d, row.ratio
                        )
                    })?;
                }
                largest = largest.max(scan.estimated_l);
                scans += 1;
            }
        }
    }
    *estimated = Some(largest);
    Ok(format!(
        "{scans} scans bounded by the golden ratio, estimated L = {largest}"
    ))
}

fn staircase_model() -> JordanModel {
    JordanModel::new(
        JordanBlock::Real {
            size: 2,
            eigenvalue: 1.0,
        },
        vec![2.0],
    )
    .expect("valid model")
    .with_nonlinearity(0.0)
}

fn staircase_divergence() -> Verdict {
    let model = staircase_model();
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let mut worst_rounding = 0.0f64;
    for k in STAIRCASE_K {
        let l_test = k as f64 / 25.0;
        for d in STAIRCASE_D {
            let w = witness_jordan(&model, d, k).map_err(|e| e.to_string())?;
            let lb = direct_shadow_lower_bound(&model, &w.pseudo).map_err(|e| e.to_string())?;
            ensure((lb / d - k as f64).abs() <= LOWER_BOUND_TOL, || {
                format!("K={k} d={d}: lower bound / d = {}", lb / d)
            })?;
            // a shadow within L_test d would contradict the bound
            let factor = lb / (l_test * d);
            ensure(factor >= FAILURE_FACTOR * (1.0 - LOWER_BOUND_TOL), || {
                format!("K={k} d={d}: bound exceeds L_test d only by {factor}")
            })?;
            worst_rounding = worst_rounding.max((w.pseudo.defect() / d - 1.0).abs());
        }
        let family = JordanWitnessFamily { model: &model, k };
        let scan = lipschitz_scan(&model, &family, &STAIRCASE_D, &ShadowOptions::default())
            .map_err(|e| e.to_string())?;
        ensure(scan.diverging, || {
            format!("K={k}: scan not flagged diverging")
        })?;

        let config = dir.path().join(format!("k{k}.toml"));
        let d_list = STAIRCASE_D
            .iter()
            .map(|d| format!("{d:e}"))
            .collect::<Vec<_>>()
            .join(", ");
        std::fs::write(
            &config,
            format!(
                "[system]\nkind = \"jordan\"\nl = 2\neigenvalue = 1.0\ntail = [2.0]\nc = 0.0\n\n\
                 [command]\nop = \"scan\"\nfamily = \"jordan\"\nk = {k}\nd_values = [{d_list}]\n"
            ),
        )
        .map_err(|e| e.to_string())?;
        let status = Command::new(env!("CARGO_BIN_EXE_shadowlab"))
            .args(["run", config.to_str().unwrap()])
            .env(
                shadowlab_cli::OUT_DIR_ENV,
                dir.path().join(format!("out{k}")),
            )
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.code() == Some(2), || {
            format!("K={k}: runner exit status {status}")
        })?;
    }
    Ok(format!(
        "lower bound / d = K for K in {STAIRCASE_K:?}, scans diverging, exit status 2 (measured defect within {worst_rounding:e} of d)"
    ))
}

fn staircase_constants() -> Verdict {
    let model = staircase_model();
    // small enough that the K = 100 peak, about K^2 d, stays in the linear core
    let d = 1e-5;
    for k in 1..=100usize {
        let w = witness_jordan(&model, d, k).map_err(|e| e.to_string())?;
        let (kk, meta) = (k as i64, &w.meta);
        ensure(meta.z1 == Some(kk * (kk - 1) / 2), || {
            format!("K={k}: Z1 = {:?}", meta.z1)
        })?;
        ensure(meta.z2 == Some(kk * kk), || {
            format!("K={k}: Z2 = {:?}", meta.z2)
        })?;
        ensure(
            meta.period == 2 * k + k * k && w.pseudo.period() == meta.period,
            || format!("K={k}: period {}", meta.period),
        )?;
        ensure(w.closure == w.pseudo.points()[0], || {
            format!("K={k}: closure is not bitwise")
        })?;
        let y = w.pseudo.points()[k][1];
        ensure(y == k as f64 * d, || {
            format!("K={k}: y_K second coordinate {y}")
        })?;
    }
    Ok("K = 1..100: Z1, Z2, period, bitwise closure and y_K all exact".into())
}

/// Every `x = j / D` with `(M^m - I) j = 0 mod D`, `D = |det(M^m - I)|`,
/// scaled to numerators over `D`.
fn grid_scan(m: &DMatrix<i64>, period: usize) -> BTreeSet<Vec<i128>> {
    let a = (0..period).fold(DMatrix::<i64>::identity(2, 2), |acc, _| &acc * m)
        - DMatrix::identity(2, 2);
    let det = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).abs();
    let mut found = BTreeSet::new();
    for j0 in 0..det {
        for j1 in 0..det {
            let r0 = (a[(0, 0)] * j0 + a[(0, 1)] * j1).rem_euclid(det);
            let r1 = (a[(1, 0)] * j0 + a[(1, 1)] * j1).rem_euclid(det);
            if r0 == 0 && r1 == 0 {
                found.insert(vec![i128::from(j0), i128::from(j1)]);
            }
        }
    }
    found
}

fn expansion_certificates(estimated: Option<f64>) -> Verdict {
    let l = estimated.ok_or("no Lipschitz estimate from the cat-map scans")?;
    let sys = cat();
    let mut orbits = 0;
    for (i, &expected) in CAT_COUNTS.iter().enumerate() {
        let m = i + 1;
        let count = periodic_point_count(sys.matrix(), m).map_err(|e| e.to_string())?;
        ensure(count == expected, || {
            format!("m={m}: |det(M^m - I)| = {count}")
        })?;
        let points = enumerate_periodic_points_toral(sys.matrix(), m).map_err(|e| e.to_string())?;
        ensure(points.len() as i128 == expected, || {
            format!("m={m}: {} points", points.len())
        })?;
        if m <= 4 {
            let listed: BTreeSet<Vec<i128>> = points
                .iter()
                .map(|p| {
                    p.numerators
                        .iter()
                        .map(|a| a * (count / p.denominator))
                        .collect()
                })
                .collect();
            ensure(listed == grid_scan(sys.matrix(), m), || {
                format!("m={m}: grid scan disagrees")
            })?;
        }
        for p in &points {
            let record =
                analyze_periodic_orbit(&sys, &p.to_point(), m).map_err(|e| e.to_string())?;
            let v_u = record
                .unstable_basis()
                .ok_or("no unstable direction")?
                .column(0)
                .into_owned();
            let data = expansion_sequences(&record, &v_u).map_err(|e| format!("{p}: {e}"))?;
            ensure(data.a[m].abs() <= TELESCOPING_TOL, || {
                format!("{p}: a_m = {:e}", data.a[m])
            })?;
            ensure(verify_growth_bound(&data, l), || {
                format!("{p}: growth bound fails at L = {l}")
            })?;
            orbits += 1;
        }
    }
    Ok(format!(
        "counts {CAT_COUNTS:?} confirmed, {orbits} certificates at L = {l}"
    ))
}

fn correction_shadowed_by_orbit() -> Verdict {
    let sys = cat();
    let space = sys.space();
    let mut worst_defect = 0.0f64;
    let mut worst_distance = 0.0f64;
    let mut count = 0;
    for m in 1..=6 {
        for p in enumerate_periodic_points_toral(sys.matrix(), m).map_err(|e| e.to_string())? {
            let x = p.to_point();
            let record = analyze_periodic_orbit(&sys, &x, m).map_err(|e| e.to_string())?;
            let v_u = record
                .unstable_basis()
                .ok_or("no unstable direction")?
                .column(0)
                .into_owned();
            let ew = expansion_witness(&sys, &x, m, &v_u, CORRECTION_D, None)
                .map_err(|e| format!("{p}: {e}"))?;
            let defect = ew.witness.pseudo.defect();
            ensure(defect <= CORRECTION_DEFECT_FACTOR * CORRECTION_D, || {
                format!("{p}, m={m}: defect {defect:e}")
            })?;
            let sol = find_periodic_shadow(&sys, &ew.witness.pseudo, &ShadowOptions::default())
                .map_err(|e| format!("{p}, m={m}: {e}"))?;
            let dist = sol
                .orbit
                .iter()
                .enumerate()
                .map(|(i, y)| space.dist(y, &ew.orbit[i % m]))
                .fold(0.0, f64::max);
            ensure(dist <= ORBIT_TOL, || {
                format!("{p}, m={m}: shadow is {dist:e} from the orbit")
            })?;
            worst_defect = worst_defect.max(defect / CORRECTION_D);
            worst_distance = worst_distance.max(dist);
            count += 1;
        }
    }
    Ok(format!(
        "{count} orbits, largest defect {worst_defect} d, largest distance to the orbit {worst_distance:e}"
    ))
}

fn homoclinic_splices(estimated: Option<f64>) -> Verdict {
    let l = estimated.ok_or("no Lipschitz estimate from the cat-map scans")?;
    let sys = cat();
    let mut defects = Vec::new();
    let mut near = Vec::new();
    for k in SPLICE_LENGTHS {
        let splice = homoclinic_splice(&sys, k, k, k).map_err(|e| e.to_string())?;
        let d = splice.pseudo.defect();
        let sol = find_periodic_shadow(&sys, &splice.pseudo, &ShadowOptions::default())
            .map_err(|e| format!("length {k}: {e}"))?;
        ensure(sol.converged, || format!("length {k}: no convergence"))?;
        ensure(sol.sup_distance <= l * d, || {
            format!(
                "length {k}: distance {:e} above L d = {:e}",
                sol.sup_distance,
                l * d
            )
        })?;
        // iterating f^Q on the chaotic map would amplify rounding by about
        // 2.6^Q, so closure is judged by the per-step residual
        ensure(sol.residual <= ShadowOptions::default().tolerance, || {
            format!("length {k}: residual {:e}", sol.residual)
        })?;
        defects.push(d);
        near.push(sys.space().dist(&sol.orbit[0], &Point::zeros(2)));
    }
    ensure(defects.windows(2).all(|w| w[1] < w[0]), || {
        format!("defects not decreasing: {defects:?}")
    })?;
    ensure(near.windows(2).all(|w| w[1] < w[0]), || {
        format!("orbits not approaching the fixed point: {near:?}")
    })?;
    Ok(format!(
        "defects {defects:?}, distance of p_m to the fixed point {near:?}"
    ))
}

fn splitting_angles() -> Verdict {
    let sys = cat();
    let mut betas = Vec::new();
    for m in 1..=6 {
        for p in enumerate_periodic_points_toral(sys.matrix(), m).map_err(|e| e.to_string())? {
            let record =
                analyze_periodic_orbit(&sys, &p.to_point(), m).map_err(|e| e.to_string())?;
            betas.extend(
                subspace_angle(&record)
                    .map_err(|e| e.to_string())?
                    .per_point,
            );
        }
    }
    let lo = betas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = betas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ensure(hi - lo <= ANGLE_SPREAD, || format!("spread {:e}", hi - lo))?;
    ensure(lo >= ANGLE_FLOOR, || {
        format!("minimum {lo} below {ANGLE_FLOOR}")
    })?;
    Ok(format!("{} points, beta in [{lo}, {hi}]", betas.len()))
}

fn report(index: usize, name: &str, limit: u64, run: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let verdict = run();
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_secs(limit);
    let (pass, detail) = match verdict {
        Ok(d) if in_time => (true, d),
        Ok(d) => (false, format!("{d}; over the time limit")),
        Err(e) => (false, e),
    };
    let line = format!(
        "criterion {index} {} {name} ({:.2} s of {limit} s): {detail}\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
    );
    let _ = std::io::stdout().write_all(line.as_bytes());
    pass
}

#[test]
fn acceptance() {
    let mut estimated = None;
    let results = [
        report(1, "linear oracle", LIMITS[0], linear_oracle),
        report(2, "bounded ratios on the cat map", LIMITS[1], || {
            cat_scans(&mut estimated)
        }),
        report(
            3,
            "staircases defeat Lipschitz shadowing",
            LIMITS[2],
            staircase_divergence,
        ),
        report(4, "staircase constants", LIMITS[3], staircase_constants),
        report(5, "expansion certificates", LIMITS[4], || {
            expansion_certificates(estimated)
        }),
        report(
            6,
            "correction shadowed by its orbit",
            LIMITS[5],
            correction_shadowed_by_orbit,
        ),
        report(7, "homoclinic splices", LIMITS[6], || {
            homoclinic_splices(estimated)
        }),
        report(8, "uniform splitting angle", LIMITS[7], splitting_angles),
    ];
    let failed: Vec<usize> = (1..=8).filter(|i| !results[i - 1]).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
