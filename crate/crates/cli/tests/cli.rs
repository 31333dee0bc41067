use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use holosim::algebra::FracMatrix;
use holosim::json;
use serde_json::{json, Value};
use tempfile::TempDir;

fn holosim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holosim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// `{"re": c, "exps": [e]}` terms for a one-variable matrix in `z`; each
/// entry is a list of `(coefficient, exponent)` pairs.
fn matrix_z(entries: &[&[&[(&str, u32)]]]) -> Value {
    let rows: Vec<Value> = entries
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|terms| Value::Array(terms.iter().map(|(c, e)| json!({"re": c, "exps": [e]})).collect()))
                    .collect(),
            )
        })
        .collect();
    json!({"variables": ["z"], "rows": entries.len(), "cols": entries[0].len(), "entries": rows})
}

fn write(dir: &TempDir, name: &str, v: &Value) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn commutant_family() -> Value {
    matrix_z(&[&[&[("1", 1)], &[("1", 0)]], &[&[], &[]]])
}

#[test]
fn intertwine_reports_the_commutant_of_the_example() {
    let out = holosim(&["intertwine", path_str(&data("example44.json")), "--at", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("kernel dimension 2, jump locus empty"), "{}", stdout(&out));

    let out = holosim(&["--format", "json", "intertwine", path_str(&data("example44.json")), "--at", "3/2"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["generic_kernel_dim"], 2);
    assert_eq!(v["at"]["kernel_dim"], 2);
    assert_eq!(v["jump_locus"]["empty"], true);
}

#[test]
fn smith_output_reloads_and_intertwines() {
    let dir = TempDir::new().unwrap();
    // B = G⁻¹AG with G = [[1, z], [0, 1]]
    let a = write(&dir, "a.json", &commutant_family());
    let b = write(&dir, "b.json", &matrix_z(&[&[&[("1", 1)], &[("1", 2), ("1", 0)]], &[&[], &[]]]));
    let out = holosim(&["--format", "json", "smith", &a, &b, "--at", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "similarity");
    let h: FracMatrix = json::frac_from_json(&v["h"]).unwrap();
    let am = json::matrix_from_json(&commutant_family()).unwrap();
    let bm = json::parse_matrix(&std::fs::read_to_string(&b).unwrap()).unwrap();
    assert!(h.intertwines(&am, &bm));
    assert!(FracMatrix::from_poly(&am).mul(&h).equals(&h.mul(&FracMatrix::from_poly(&bm))));
}

#[test]
fn smith_reports_none_with_the_verdict_code() {
    let dir = TempDir::new().unwrap();
    // diag(z, 0) vs diag(0, z): every intertwiner vanishes on the diagonal
    let a = write(&dir, "a.json", &matrix_z(&[&[&[("1", 1)], &[]], &[&[], &[]]]));
    let b = write(&dir, "b.json", &matrix_z(&[&[&[], &[]], &[&[], &[("1", 1)]]]));
    let out = holosim(&["smith", &a, &b, "--at", "0"]);
    assert_eq!(code(&out), 2, "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).starts_with("none"));
}

#[test]
fn wasow_accepts_off_the_locus_and_rejects_on_it() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &matrix_z(&[&[&[("1", 1)], &[]], &[&[], &[]]]));
    let out = holosim(&["wasow", &a, &a, "--at", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("A*H = H*B: true"));
    let out = holosim(&["wasow", &a, &a, "--at", "0"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).starts_with("rejected"));
}

#[test]
fn obstruct_cusp_is_obstructed() {
    let out = holosim(&["obstruct", "--ell", "0", "--curve", "cusp:4,3", "--N", "20"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    let s = stdout(&out);
    assert!(s.starts_with("obstructed"), "{s}");
    for name in ["a00", "b00", "c00", "d00"] {
        assert!(s.contains(name), "{s}");
    }
}

#[test]
fn obstruct_echoes_violated_hypotheses() {
    let out = holosim(&["obstruct", "--ell", "0", "--curve", "cusp:3,2"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("hypothesis violated"), "{}", stderr(&out));
    let out = holosim(&["obstruct", "--curve", "cusp:4,3", "--N", "2"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("truncation too small"));
}

#[test]
fn counterexample_reproduces_the_obstruction() {
    let out = holosim(&["--format", "json", "counterexample", "--ell", "0"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "obstructed");
    assert_eq!(v["identities"]["weighted"], true);
    assert_eq!(v["curves"].as_array().unwrap().len(), 3);
}

#[test]
fn sphere_obstruction_integers() {
    let out = holosim(&["sphere", "--epsilon", "1/10", "--obstruction", "h"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).starts_with("obstruction integer 1"), "{}", stdout(&out));
    let out = holosim(&["sphere", "--obstruction", "hstar"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).starts_with("obstruction integer -1"));
    let out = holosim(&["sphere"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("det C+ = 1 on the cap: true"));
    let out = holosim(&["sphere", "--epsilon", "1/0"]);
    assert_eq!(code(&out), 1, "usage errors are errors, not verdicts");
    assert_eq!(code(&holosim(&["--help"])), 0);
}

fn covering(h2: &str) -> Value {
    let scalar = |c: &str| matrix_z(&[&[&[(c, 0)], &[]], &[&[], &[(c, 0)]]]);
    json!({
        "variables": ["z"],
        "size": 2,
        "charts": [
            {"name": "U1", "samples": [["0"], ["1/2"]]},
            {"name": "U2", "samples": [["1/2"], ["1"]]}
        ],
        "overlaps": [{"charts": ["U1", "U2"], "samples": [["1/2"]]}],
        "a": commutant_family(),
        "locals": {"U1": scalar("1"), "U2": scalar(h2)},
        "splitting": {"U1": scalar("1"), "U2": scalar("1")}
    })
}

#[test]
fn cocycle_assembles_and_names_the_failing_pair() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", &covering("1"));
    let out = holosim(&["cocycle", &good]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).starts_with("global similarity assembled on 2 charts"));

    let bad = write(&dir, "bad.json", &covering("2"));
    let out = holosim(&["cocycle", &bad, "--mode", "sampled"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    let s = stdout(&out);
    assert!(s.contains("pair (") && s.contains("U1") && s.contains("U2"), "{s}");
}

#[test]
fn winding_counts_turns() {
    let dir = TempDir::new().unwrap();
    let samples: Vec<Value> = (0..64)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            json!([(2.0 * t).cos(), (2.0 * t).sin()])
        })
        .collect();
    let lp = write(&dir, "loop.json", &Value::Array(samples));
    let out = holosim(&["winding", &lp]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "winding number 2");

    let zero = write(&dir, "zero.json", &json!([[1.0, 0.0], [0.0, 0.0], [-1.0, 0.0]]));
    assert_eq!(code(&holosim(&["winding", &zero])), 1);
}

#[test]
fn malformed_input_is_an_error_with_location() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\"variables\": [\"z\"],\n \"rows\": }").unwrap();
    let out = holosim(&["intertwine", path_str(&p)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let out = holosim(&["--format", "json", "intertwine", "/nonexistent/a.json"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["error"].as_str().unwrap().contains("/nonexistent/a.json"));
}
