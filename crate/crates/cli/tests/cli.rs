use std::path::PathBuf;
use std::process::{Command, Output};

const SQUARE: &str = r#"{"numerator":[[0,0],[0,0],[1,0]],"denominator":[[1,0]]}"#;
const CUBE: &str = r#"{"numerator":[[0,0],[0,0],[0,0],[1,0]],"denominator":[[1,0]]}"#;
const IDENTITY: &str = r#"{"numerator":[[0,0],[1,0]],"denominator":[[1,0]]}"#;
const DISK_PLATE: &str = r#"{"domain":{"kind":"unit_disk"},"plates":[{"center":[0.0,0.0],"radius":0.1,"potential":1.0}]}"#;

fn twopoint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twopoint")).args(args).env_remove("TWOPOINT_SEED").output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twopoint-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error_kind(out: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn equality_case_exits_zero() {
    let out = twopoint(&["schwarzian", "--extremal-lambda", "0.5", "--z1", "-0.5", "--z2", "0.5", "--no-covering"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["inequality_id"], "schwarzian_5");
    assert!(v[0]["slack"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn univalent_map_holds_with_checked_hypothesis() {
    let out = twopoint(&["goluzin", "--map", IDENTITY, "--z1", "-0.5", "--z2", "0.3i"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)[0]["hypothesis"], "checked_ok");
}

#[test]
fn violated_inequality_exits_two() {
    let out = twopoint(&["goluzin", "--map", CUBE, "--z1", "0.6", "--z2", "-0.6", "--no-covering"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)[0]["slack"].as_f64().unwrap() < 0.0);
}

#[test]
fn violated_hypothesis_exits_three_and_writes_report() {
    let path = scratch("hyp.json");
    let out = twopoint(&["goluzin", "--map", SQUARE, "--z1", "0.5", "--z2", "0.5i", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v[0]["hypothesis"], "checked_violated");
    assert_eq!(v[0]["covering"]["status"], "multiple_preimage");
}

#[test]
fn covering_command_reports_witness() {
    let out = twopoint(&["covering", "--map", SQUARE, "--z1", "0.5", "--z2", "0.5i", "--family", "gamma", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("family,status,witness_re"));
    assert!(lines.next().unwrap().starts_with("gamma,multiple_preimage,"));
}

#[test]
fn errors_exit_one_with_json_on_stderr() {
    let cases: [(&[&str], &str); 5] = [
        (&["goluzin", "--map", IDENTITY, "--z1", "1.5", "--z2", "0"], "InvalidPoint"),
        (&["goluzin", "--map", "{not json", "--z1", "0.1", "--z2", "0"], "Json"),
        (&["goluzin", "--map", "/nonexistent/map.json", "--z1", "0.1", "--z2", "0"], "Io"),
        (&["goluzin", "--map", SQUARE, "--z1", "0.5", "--z2", "-0.5"], "CoincidentImages"),
        (&["goluzin", "--z1", "0.1"], "Usage"),
    ];
    for (args, kind) in cases {
        let out = twopoint(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert_eq!(error_kind(&out), kind, "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn coarse_grid_is_an_error() {
    let out = twopoint(&["capacity", "--condenser", DISK_PLATE, "--cells", "16"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "GridTooCoarse");
}

#[test]
fn scan_is_deterministic_per_seed() {
    let args = ["scan", "--map", IDENTITY, "--pairs", "20", "--format", "csv"];
    let a = twopoint(&[&args[..], &["--seed", "17"]].concat());
    let b = twopoint(&[&args[..], &["--seed", "17"]].concat());
    let c = twopoint(&[&args[..], &["--seed", "18"]].concat());
    let env = Command::new(env!("CARGO_BIN_EXE_twopoint")).args(args).env("TWOPOINT_SEED", "17").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, env.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 41);
}

#[test]
fn capacity_report_field_and_svg() {
    let field = scratch("field.bin");
    let svg = scratch("plate.svg");
    let out = twopoint(&[
        "capacity",
        "--condenser",
        DISK_PLATE,
        "--cells",
        "256",
        "--field",
        field.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let exact = std::f64::consts::TAU / 10f64.ln();
    assert!((v[0]["value"].as_f64().unwrap() / exact - 1.0).abs() < 1e-3);
    assert_eq!(v[0]["discretization"]["cells"], 256);

    let bytes = std::fs::read(&field).unwrap();
    let nx = u64::from_le_bytes(bytes[0..8].try_into().unwrap()) as usize;
    let ny = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    assert_eq!(bytes.len(), 40 + 8 * nx * ny);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
}

#[test]
fn separation_csv_has_sector_columns() {
    let c = r#"{"domain":{"kind":"unit_disk"},"plates":[
        {"center":[0.5,0.3],"radius":0.05,"potential":1.0},{"center":[-0.5,0.3],"radius":0.05,"potential":1.0},
        {"center":[0.5,-0.3],"radius":0.05,"potential":1.0},{"center":[-0.5,-0.3],"radius":0.05,"potential":1.0}]}"#;
    let out = twopoint(&["capacity", "--condenser", c, "--cells", "256", "--separation", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lhs,rhs,sectors_1,sectors_2,sectors_3,sectors_4");
    let row: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert!(row[0] >= 0.97 * row[1]);
}

#[test]
fn plate_on_axis_rejected() {
    let c = r#"{"domain":{"kind":"unit_disk"},"plates":[{"center":[0.0,0.5],"radius":0.05,"potential":1.0}]}"#;
    let out = twopoint(&["capacity", "--condenser", c, "--separation"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "PlateOnAxis");
}

#[test]
fn identity_mode_is_seeded() {
    let args = ["capacity", "--identity", "--z1", "0.3", "--z2", "-0.2+0.1i", "--walk-tol", "3e-3", "--tol", "0.05"];
    let a = twopoint(&[&args[..], &["--seed", "5"]].concat());
    let b = twopoint(&[&args[..], &["--seed", "5"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a)[0]["residual"].as_f64().unwrap() < 0.05);
}

#[test]
fn extremal_scan_and_boundary_image() {
    let svg = scratch("extremal.svg");
    let out = twopoint(&["extremal", "--lambdas", "0.2,0.5,0.8", "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 3);
    for r in v.as_array().unwrap() {
        assert!(r["slack"].as_f64().unwrap().abs() < 1e-9);
    }
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<path"));

    let out = twopoint(&["extremal", "--kind", "goluzin", "--lambdas", "0.3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().lines().nth(1).unwrap().starts_with("goluzin_1,"));
}

#[test]
fn help_exits_zero() {
    let out = twopoint(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("capacity"));
}
