//! CLI contract: exit codes, input grammars, report determinism, and the
//! vector-field sign convention fixture.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_webflat")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().expect("runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn analyze_fermat2_reports_structure() {
    let (code, stdout, _) = run(&["analyze", "fermat:2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"degree\": 2"));
    // all six invariant lines and four radial singularities
    for line in ["\"z\"", "\"x\"", "\"y\"", "\"x - z\"", "\"y - z\"", "\"x - y\""] {
        assert!(stdout.contains(line), "missing {line} in {stdout}");
    }
    let radial_count = stdout.matches("\"radial_order\": 1").count();
    assert_eq!(radial_count, 4, "expected 4 radial singularities");
    assert!(stdout.contains("convex (Exact)"));
    assert!(stdout.contains("\"reduced\": true"));
}

#[test]
fn analyze_homog3_origin_special() {
    let (code, stdout, _) = run(&["analyze", "homog:3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("convex (Exact)"));
    assert!(stdout.contains("\"reduced\": false"));
    assert!(stdout.contains("\"nu\": 3"));
}

#[test]
fn analyze_random_carries_witness() {
    let (code, stdout, _) = run(&["analyze", "rand:2:42"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("not convex"));
    // witness factor present and non-null
    assert!(stdout.contains("\"witness\": \""));
}

#[test]
fn legendre_fixture_and_degree_data() {
    let (code, stdout, _) = run(&["legendre", "fermat:2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("p^2*x^2 + 2*p*q*x - p*x^2 + q^2 - q"));
    assert!(stdout.contains("\"agreement\": true"));

    let (code, stdout, _) = run(&["legendre", "line:1,-1,0", "fermat:2", "fermat:3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"directions\": 6"));
}

#[test]
fn repeated_member_is_a_usage_error() {
    let (code, _, stderr) = run(&["legendre", "fermat:2", "fermat:2"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("identically zero discriminant"));
}

#[test]
fn unknown_spec_is_a_usage_error() {
    let (code, _, stderr) = run(&["analyze", "nonsense:2"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("unknown spec"));
}

#[test]
fn flatness_exit_codes() {
    let (code, _, _) = run(&["flatness", "fermat:2", "fermat:3", "--samples", "40"]);
    assert_eq!(code, 0, "flat web must exit 0");
    let (code, _, _) = run(&["flatness", "ex3:2", "--samples", "40"]);
    assert_eq!(code, 1, "non-flat web must exit 1");
}

#[test]
fn reports_are_byte_identical_for_fixed_config() {
    let (c1, s1, _) = run(&["flatness", "fermat:2", "fermat:3", "--samples", "30"]);
    let (c2, s2, _) = run(&["flatness", "fermat:2", "fermat:3", "--samples", "30"]);
    assert_eq!(c1, c2);
    assert_eq!(s1, s2);
}

#[test]
fn env_overrides_apply() {
    let out = Command::new(bin())
        .args(["flatness", "fermat:2", "fermat:3"])
        .env("WEBFLAT_SAMPLES", "25")
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("\"samples\": 25"));
}

#[test]
fn tightened_flat_tol_yields_inconclusive() {
    // With the flat threshold below the achievable numerical floor the
    // verdict degrades honestly to inconclusive (exit 2).
    let (code, _, _) = run(&[
        "flatness",
        "fermat:2",
        "fermat:3",
        "--samples",
        "30",
        "--flat-tol",
        "1e-14",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn invalid_config_rejected() {
    let (code, _, stderr) = run(&["flatness", "fermat:2", "--flat-tol", "0.1", "--nonflat-floor", "0.01"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("flat tolerance"));
}

#[test]
fn vectorfield_convention_fixture() {
    // `vectorfield { A; B }` declares the field A d/dx + B d/dy and the
    // 1-form is B dx - A dy: the file below is the degree-2 member.
    let dir = std::env::temp_dir();
    let path = dir.join("webflat_vf_fixture.txt");
    std::fs::write(&path, "vectorfield { A = x^2 - x; B = y^2 - y; }").unwrap();
    let (code, vf_out, _) = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (_, direct_out, _) = run(&["analyze", "fermat:2"]);
    assert_eq!(vf_out, direct_out, "vector-field route must match the generator");

    // and the 1-form grammar with the same data
    let path2 = dir.join("webflat_fol_fixture.txt");
    std::fs::write(&path2, "foliation { a = y^2 - y; b = -(x^2 - x); }").unwrap();
    let (code, fol_out, _) = run(&["analyze", path2.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(fol_out, direct_out);
    let _ = std::fs::remove_file(path);
    let _ = std::fs::remove_file(path2);
}

#[test]
fn web_file_grammar() {
    let dir = std::env::temp_dir();
    let path = dir.join("webflat_web_fixture.txt");
    std::fs::write(
        &path,
        "web { line: 1,-1,0; foliation: fermat:2; foliation: fermat:3; }",
    )
    .unwrap();
    let (code, stdout, _) = run(&["legendre", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"directions\": 6"));
    let _ = std::fs::remove_file(path);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir();
    let path = dir.join("webflat_out_fixture.json");
    let (code, stdout, _) = run(&[
        "legendre",
        "fermat:2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"command\": \"legendre\""));
    let _ = std::fs::remove_file(path);
}
