use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use shadowlab_cli::{ExperimentConfig, DISPATCH, OUT_DIR_ENV};
use tempfile::TempDir;

/// Every operation of the core library that a command is expected to reach.
const LIBRARY_OPERATIONS: &[&str] = &[
    "evaluate",
    "orbit_segment",
    "estimate_norm_bound",
    "defect",
    "witness_eigenvalue_one",
    "witness_jordan",
    "witness_jordan_general",
    "witness_rotation",
    "expansion_witness",
    "splice_cycle",
    "find_periodic_shadow",
    "closed_form_linear_shadow",
    "theoretical_linear_lipschitz_bound",
    "lipschitz_scan",
    "direct_shadow_lower_bound",
    "verify_periodicity_by_expansivity",
    "analyze_periodic_orbit",
    "expansion_sequences",
    "verify_growth_bound",
    "extract_uniform_constants",
    "subspace_angle",
    "enumerate_periodic_points_toral",
];

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn shadowlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadowlab"))
        .args(args)
        .env(OUT_DIR_ENV, out)
        .output()
        .expect("binary runs")
}

fn run_config(name: &str, out: &Path) -> Output {
    let path = configs_dir().join(name);
    shadowlab(&["run", path.to_str().unwrap()], out)
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("experiment.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn cat_scan_is_bounded() {
    let out = TempDir::new().unwrap();
    let o = run_config("cat-scan.toml", out.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.path().join("scan.csv")).unwrap();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let ratio: f64 = cells[3].parse().unwrap();
        assert_eq!(cells[4], "true");
        assert!(ratio <= golden + 1e-9, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 4);
    assert!(stdout(&o).contains("Verdict: bounded"));
}

#[test]
fn jordan_scan_exits_with_two() {
    let out = TempDir::new().unwrap();
    let o = run_config("jordan-scan.toml", out.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let table = std::fs::read_to_string(out.path().join("scan.txt")).unwrap();
    assert!(table.contains("diverging   = true"));
}

#[test]
fn enumerate_lists_five_points() {
    let out = TempDir::new().unwrap();
    let o = run_config("enumerate.toml", out.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = std::fs::read_to_string(out.path().join("enumerate.txt")).unwrap();
    assert_eq!(table.lines().count(), 1 + 5);
    for p in [
        "(0, 0)",
        "(1/5, 2/5)",
        "(2/5, 4/5)",
        "(3/5, 1/5)",
        "(4/5, 3/5)",
    ] {
        assert!(table.contains(p), "missing {p}");
    }
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn every_example_runs_and_is_deterministic() {
    let mut ops = BTreeSet::new();
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        let cfg = ExperimentConfig::load(&path).unwrap();
        ops.insert(cfg.command.name());
        let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
        let oa = run_config(&name, a.path());
        let ob = run_config(&name, b.path());
        assert!(
            matches!(oa.status.code(), Some(0 | 2)),
            "{name}: {}",
            stderr(&oa)
        );
        assert_eq!(oa.status.code(), ob.status.code());
        assert_eq!(oa.stdout, ob.stdout, "{name}: summaries differ");
        let (fa, fb) = (read_dir_sorted(a.path()), read_dir_sorted(b.path()));
        assert!(!fa.is_empty(), "{name} wrote nothing");
        assert_eq!(fa, fb, "{name}: output files differ");
    }
    // one example per command
    let commands: BTreeSet<&str> = DISPATCH.iter().map(|(c, _)| *c).collect();
    assert_eq!(ops, commands);
}

#[test]
fn dispatch_table_covers_the_library() {
    let reached: BTreeSet<&str> = DISPATCH
        .iter()
        .flat_map(|(_, ops)| ops.iter().copied())
        .collect();
    for op in LIBRARY_OPERATIONS {
        assert!(reached.contains(op), "no command reaches {op}");
    }
    for op in &reached {
        assert!(
            LIBRARY_OPERATIONS.contains(op),
            "dispatch lists unknown operation {op}"
        );
    }
}

#[test]
fn unknown_key_fails_with_path_and_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[system]\nkind = \"toral\"\n\n[command]\nop = \"enumerate\"\nperiod = 2\nperoid = 3\n",
    );
    let o = shadowlab(&["run", cfg.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("command.peroid"), "{err}");
    assert!(err.contains("line 7"), "{err}");
}

#[test]
fn bad_value_and_missing_file_are_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[system]\nkind = \"henon\"\n[command]\nop = \"enumerate\"\nperiod = 1\n",
    );
    let o = shadowlab(&["run", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("system"), "{}", stderr(&o));
    let o = shadowlab(&["run", "/nonexistent/config.toml"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_dir_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[system]\nkind = \"toral\"\n[command]\nop = \"enumerate\"\nperiod = 1\n[output]\ndir = \"not-here\"\n",
    );
    let target = dir.path().join("elsewhere");
    let o = shadowlab(&["run", cfg.to_str().unwrap()], &target);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(target.join("enumerate.csv").exists());
    assert!(!dir.path().join("not-here").exists());
}

#[test]
fn operation_errors_surface_verbatim() {
    // a staircase read back from disk cannot be shadowed: Newton hits the
    // singular cyclic system and the runner reports it
    let dir = TempDir::new().unwrap();
    let system = "[system]\nkind = \"jordan\"\nc = 0.0\n";
    let witness = write_config(
        dir.path(),
        &format!(
            "{system}[command]\nop = \"witness\"\nconstruction = \"jordan\"\nd = 1e-5\nk = 25\n"
        ),
    );
    let o = shadowlab(&["run", witness.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("at least 25"), "{}", stdout(&o));
    let shadow = write_config(
        dir.path(),
        &format!("{system}[command]\nop = \"shadow\"\ninput = \"pseudotrajectory.csv\"\n"),
    );
    let o = shadowlab(&["run", shadow.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("singular-jacobian"), "{}", stderr(&o));
}

#[test]
fn linear_shadow_matches_the_closed_form() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "seed = 4\n[system]\nkind = \"linear\"\nmatrix = [[3.0, 1.0], [0.0, 0.5]]\n[command]\nop = \"shadow\"\nperiod = 7\nd = 1e-3\n",
    );
    let o = shadowlab(&["run", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("shadow.csv")).unwrap();
    let value = |key: &str| -> String {
        csv.lines()
            .find_map(|l| l.strip_prefix(&format!("{key},")))
            .unwrap_or_else(|| panic!("no {key}"))
            .to_string()
    };
    assert!(value("closed_form_difference").parse::<f64>().unwrap() <= 1e-9);
    assert_eq!(value("converged"), "true");
    let ratio: f64 = value("ratio").parse().unwrap();
    let bound: f64 = value("linear_bound").parse().unwrap();
    assert!(ratio > 0.0 && bound.is_finite());
}

#[test]
fn rotation_and_eigenvalue_one_witnesses() {
    let dir = TempDir::new().unwrap();
    let rot = write_config(
        dir.path(),
        "[system]\nkind = \"jordan\"\nblock = \"rotation\"\nl = 1\ntheta = 0.7\n[command]\nop = \"witness\"\nconstruction = \"rotation\"\nd = 1e-3\nk = 10\nw = [0.0, 2.0]\n",
    );
    let o = shadowlab(&["run", rot.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("rotation-staircase-1"));
    let one = write_config(
        dir.path(),
        "[system]\nkind = \"jordan\"\nl = 1\n[command]\nop = \"witness\"\nconstruction = \"eigenvalue-one\"\nd = 1e-3\nk = 10\n",
    );
    let o = shadowlab(&["run", one.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("period 20"), "{}", stdout(&o));
}

#[test]
fn describe_known_and_unknown_kinds() {
    let dir = TempDir::new().unwrap();
    let o = shadowlab(&["describe", "jordan"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for key in ["l ", "eigenvalue", "theta", "tail", "c ", "a_ball"] {
        assert!(text.contains(key), "missing {key}");
    }
    let o = shadowlab(&["describe", "perturbed-toral"], dir.path());
    assert!(stdout(&o).contains("amplitude"));
    let o = shadowlab(&["describe", "henon"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown kind"));
}

#[test]
fn table_format_writes_text() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[system]\nkind = \"toral\"\n[command]\nop = \"angles\"\nperiod = 2\npoint = [0.2, 0.4]\n[output]\nformat = \"table\"\n",
    );
    let o = shadowlab(&["run", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("angles.txt")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().next().unwrap().contains("beta"));
}
