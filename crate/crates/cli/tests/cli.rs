use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn scribe(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_scribe"));
    cmd.args(args).env_remove("SCRIBE_SEED").env_remove("SCRIBE_TOL");
    cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn scribe");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn cube_file(dir: &Path) -> String {
    let verts: Vec<Value> = (0..8)
        .map(|i| Value::from((0..3).map(|b| serde_json::json!([if (i >> b) & 1 == 1 { 1 } else { -1 }, 1])).collect::<Vec<_>>()))
        .collect();
    let file = serde_json::json!({
        "format": "scribe-polytope/1",
        "dim": 3,
        "form": "euclidean",
        "scalar": "rational",
        "vertices": verts,
        "metadata": {"name": "cube"},
    });
    let path = dir.join("cube.json");
    std::fs::write(&path, file.to_string()).unwrap();
    path_str(&path).to_string()
}

#[test]
fn triakis_is_weakly_inscribed_through_a_pipe() {
    let fixture = scribe(&["fixture", "triakis"], None);
    assert_eq!(code(&fixture), 0);
    let check = scribe(&["check", "--i", "0", "--j", "0", "--mode", "weak", "-"], Some(&fixture.stdout));
    assert_eq!(code(&check), 0, "{}", String::from_utf8_lossy(&check.stderr));
    let report: Value = serde_json::from_slice(&check.stdout).unwrap();
    assert_eq!(report["format"], "scribe-report/1");
    assert_eq!(report["verdict"], "true");
    let strong = scribe(&["check", "--i", "0", "--j", "0", "--mode", "strong", "-"], Some(&fixture.stdout));
    assert_eq!(code(&strong), 1);
}

#[test]
fn ridge_stacked_path_checks_true() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let built = scribe(&["construct", "ridge-stacked", "--tree", "path3", "--dim", "3", "-o", path_str(&p)], None);
    assert_eq!(code(&built), 0, "{}", String::from_utf8_lossy(&built.stderr));
    let check = scribe(&["check", "--i", "1", "--j", "1", "--mode", "strong", path_str(&p)], None);
    assert_eq!(code(&check), 0);
}

#[test]
fn cube_exports_to_off() {
    let dir = tempfile::tempdir().unwrap();
    let cube = cube_file(dir.path());
    let out = scribe(&["export", "--format", "off", &cube], None);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("OFF"));
    let counts: Vec<usize> = lines.next().unwrap().split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(counts, vec![8, 6, 12]);
    let faces: Vec<&str> = text.lines().skip(2 + 8).collect();
    assert_eq!(faces.len(), 6);
    assert!(faces.iter().all(|f| f.starts_with("4 ")));
}

#[test]
fn off_needs_three_dimensions() {
    let out = scribe(&["build", "cyclic", "--dim", "4", "--n", "6"], None);
    let off = scribe(&["export", "--format", "off", "-"], Some(&out.stdout));
    assert_eq!(code(&off), 3);
}

#[test]
fn json_round_trip_keeps_vertices_and_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let cube = cube_file(dir.path());
    let once = scribe(&["export", "--format", "json", &cube], None);
    assert_eq!(code(&once), 0);
    let twice = scribe(&["export", "--format", "json", "-"], Some(&once.stdout));
    assert_eq!(once.stdout, twice.stdout);
    let a: Value = serde_json::from_slice(&once.stdout).unwrap();
    assert_eq!(a["scalar"], "rational");
    assert_eq!(a["vertices"][7], serde_json::json!([[1, 1], [1, 1], [1, 1]]));

    let random = scribe(&["build", "random", "--dim", "3", "--n", "9", "--seed", "5"], None);
    let again = scribe(&["export", "--format", "json", "-"], Some(&random.stdout));
    let (x, y): (Value, Value) = (serde_json::from_slice(&random.stdout).unwrap(), serde_json::from_slice(&again.stdout).unwrap());
    assert_eq!(x["vertices"], y["vertices"]);
    for mode in ["strong", "weak"] {
        let c1 = scribe(&["check", "--i", "0", "--j", "2", "--mode", mode, "-"], Some(&random.stdout));
        let c2 = scribe(&["check", "--i", "0", "--j", "2", "--mode", mode, "-"], Some(&again.stdout));
        assert_eq!(code(&c1), code(&c2));
        assert_eq!(c1.stdout, c2.stdout);
    }
}

#[test]
fn fixed_seed_is_deterministic() {
    let args = ["construct", "inscribe-truncated", "--dim", "3", "--random-rounds", "3", "--seed", "11"];
    let a = scribe(&args, None);
    let b = scribe(&args, None);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let r1 = scribe(&["build", "random", "--dim", "4", "--n", "8", "--seed", "2"], None);
    let r2 = scribe(&["build", "random", "--dim", "4", "--n", "8", "--seed", "2"], None);
    assert_eq!(r1.stdout, r2.stdout);
    let c = scribe(&["check", "--i", "0", "--j", "3", "--mode", "strong", "--seed", "2", "-"], Some(&r1.stdout));
    let report: Value = serde_json::from_slice(&c.stdout).unwrap();
    assert_eq!(report["seed"], 2);
    assert_eq!(report["tol"], 1e-9);
}

#[test]
fn packing_svg_has_one_circle_per_ball() {
    let out = scribe(&["construct", "ball-packing", "--dim", "3", "--program", "0;1.0,1.1"], None);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let file: Value = serde_json::from_slice(&out.stdout).unwrap();
    let balls = file["metadata"]["balls"].as_array().unwrap().len();
    let svg = scribe(&["export", "--format", "svg", "-"], Some(&out.stdout));
    assert_eq!(code(&svg), 0);
    assert_eq!(String::from_utf8(svg.stdout).unwrap().matches("<circle").count(), balls);
}

#[test]
fn stored_lattice_is_revalidated() {
    let fixture = scribe(&["fixture", "truncated-cube"], None);
    let mut file: Value = serde_json::from_slice(&fixture.stdout).unwrap();
    // swap two vertices so the stored lattice no longer matches the hull
    let v = file["vertices"].as_array_mut().unwrap();
    v.swap(0, 9);
    let bytes = serde_json::to_vec(&file).unwrap();
    let strict = scribe(&["check", "--i", "0", "--j", "0", "--mode", "weak", "-"], Some(&bytes));
    assert_eq!(code(&strict), 3);
    let plain = scribe(&["check", "--i", "0", "--j", "0", "--mode", "weak", "-"], Some(&fixture.stdout));
    let trusted = scribe(&["check", "--i", "0", "--j", "0", "--mode", "weak", "--trust-lattice", "-"], Some(&fixture.stdout));
    assert_ne!(code(&plain), 3);
    assert_eq!(plain.stdout, trusted.stdout);
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(code(&scribe(&["frobnicate"], None)), 3);
    assert_eq!(code(&scribe(&["check", "--i", "0", "--mode", "weak", "-"], None)), 3);
    assert_eq!(code(&scribe(&["fixture", "no-such-thing"], None)), 3);
    assert_eq!(code(&scribe(&["check", "--i", "0", "--j", "0", "--mode", "weak", "/no/such/file"], None)), 3);
    assert_eq!(code(&scribe(&["--help"], None)), 0);
}

#[test]
fn environment_sets_tolerance_and_seed() {
    let fixture = scribe(&["fixture", "truncated-cube"], None);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_scribe"));
    cmd.args(["check", "--i", "0", "--j", "0", "--mode", "weak", "-"])
        .env("SCRIBE_TOL", "1e-7")
        .env("SCRIBE_SEED", "42")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(&fixture.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["tol"], 1e-7);
    assert_eq!(report["seed"], 42);
}
