//! End-to-end tests for the `maslov` binary: golden outputs, exit codes,
//! and determinism of the JSON contract.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_maslov"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn maslov");
    if let Some(s) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(s.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("wait maslov")
}

fn json_out(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "command failed: stdout={} stderr={}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const ROT: &str = r#"{"type":"exponential","start":[[1],[0]],"t0":0,
  "segments":[{"generator":[[0,-1],[1,0]],"duration":3.141592653589793}]}"#;
const IRN: &str = r#"{"type":"exponential","start":[[0],[1]],"t0":0,
  "segments":[{"generator":[[0,0],[0,0]],"duration":3.141592653589793}]}"#;

#[test]
fn maslov_pair_rotation_against_vertical() {
    let input = format!(r#"{{"lambda0":{ROT},"lambda1":{IRN}}}"#);
    let v = json_out(&run(&["maslov", "pair"], Some(&input)));
    assert_eq!(v["mu"], serde_json::json!(1));
    assert_eq!(v["crossings"].as_array().unwrap().len(), 1);
}

#[test]
fn maslov_pair_self_check_agrees() {
    let input = format!(r#"{{"lambda0":{ROT},"lambda1":{IRN}}}"#);
    let v = json_out(&run(&["--self-check", "maslov", "pair"], Some(&input)));
    assert_eq!(v["mu"], serde_json::json!(1));
}

#[test]
fn maslov_cz_of_negative_rotation() {
    // exp(-t J0) for small t has a single nondegenerate fixed point, zeta = +1
    let input = r#"{"phi":{"type":"exponential","start":[[1,0],[0,1]],"t0":0,
      "segments":[{"generator":[[0,1],[-1,0]],"duration":0.5}]}}"#;
    let v = json_out(&run(&["maslov", "cz"], Some(input)));
    assert_eq!(v["zeta"], serde_json::json!(1));
}

#[test]
fn maslov_winding_of_half_turn() {
    let input = format!(r#"{{"lambda":{ROT}}}"#);
    let v = json_out(&run(&["maslov", "winding"], Some(&input)));
    let w = v["winding"].as_f64().unwrap();
    assert!((w - 1.0).abs() < 1e-6);
}

#[test]
fn cover_lift_half_turn_full_det_sq_rotation() {
    let input = format!(r#"{{"lambda":{ROT},"theta_start":0.0,"mod":2}}"#);
    let v = json_out(&run(&["cover", "lift"], Some(&input)));
    assert_eq!(v["deck"], serde_json::json!(1));
    let theta = v["theta_end"].as_f64().unwrap();
    assert!((theta - 1.0).abs() < 1e-6);
}

#[test]
fn cover_abs_of_standard_transverse_pair() {
    let input = r#"{
      "lift0": {"frame": [[1],[0]], "mod": "inf", "theta": 0.0},
      "lift1": {"frame": [[0],[1]], "mod": "inf", "theta": 0.5}
    }"#;
    let v = json_out(&run(&["cover", "abs"], Some(input)));
    assert_eq!(v["mu_tilde"], serde_json::json!({"mod": "inf", "val": 1}));
}

#[test]
fn cover_abs_cz_small_rotation() {
    let input = r#"{
      "phi": [[0.8775825618903728,0.479425538604203],[-0.479425538604203,0.8775825618903728]],
      "path": {"type":"exponential","start":[[1,0],[0,1]],"t0":0,
        "segments":[{"generator":[[0,1],[-1,0]],"duration":0.5}]},
      "k": {"mod": "inf", "val": 0}
    }"#;
    let v = json_out(&run(&["cover", "abs-cz"], Some(input)));
    assert_eq!(v["zeta_tilde"], serde_json::json!({"mod": "inf", "val": 0}));
}

#[test]
fn cover_handle_gradings() {
    for (n, expect) in [(1, serde_json::json!(1)), (2, serde_json::json!(0)), (4, serde_json::json!("-2/2"))] {
        let v = json_out(&run(&["cover", "handle", "--n", &n.to_string()], None));
        let _ = expect;
        // endpoint is 1 - n/2, serialized as an integer when n is even
        match n {
            1 => assert_eq!(v["endpoint"], serde_json::json!("1/2")),
            2 => assert_eq!(v["endpoint"], serde_json::json!(0)),
            4 => assert_eq!(v["endpoint"], serde_json::json!(-1)),
            _ => unreachable!(),
        }
    }
}

#[test]
fn cover_dehn_shift_golden() {
    let v = json_out(&run(&["cover", "dehn-shift", "--n", "4"], None));
    assert_eq!(v["k"], serde_json::json!(6));
    let v = json_out(&run(&["cover", "dehn-shift", "--n", "1"], None));
    assert_eq!(v["k"], serde_json::json!(0));
}

#[test]
fn calc_twist_braid_word() {
    // the braid cube applied to the first sphere lands back on it shifted by 4-3n
    let input = r#"{
      "n": 2, "mod": "inf", "count": 2,
      "word": [{"sphere":0},{"sphere":1},{"sphere":0},{"sphere":1},{"sphere":0},{"sphere":1}],
      "target": 0
    }"#;
    let v = json_out(&run(&["calc", "twist"], Some(input)));
    assert_eq!(v["sphere"], serde_json::json!(0));
    assert_eq!(v["shift"], serde_json::json!({"mod": "inf", "val": -2}));
}

#[test]
fn calc_signature_golden() {
    let v = json_out(&run(
        &["calc", "signature", "--family", "even", "--n", "2", "--k", "1"],
        None,
    ));
    assert_eq!(v["hf01"], serde_json::json!({"0": 1}));
    assert_eq!(v["hf12"], serde_json::json!({"-2": 1}));
}

#[test]
fn calc_verdict_distinct_iff_twisted() {
    let v = json_out(&run(
        &["calc", "verdict", "--family", "odd", "--n", "5", "--k", "2"],
        None,
    ));
    assert_eq!(v["verdict"], serde_json::json!("distinct"));
    let v = json_out(&run(
        &["calc", "verdict", "--family", "odd", "--n", "5", "--k", "0"],
        None,
    ));
    assert_eq!(v["verdict"], serde_json::json!("indistinguishable"));
}

#[test]
fn calc_pl_reflection() {
    let input = r#"{"n": 2, "count": 2, "c": [1, 0], "l": 0}"#;
    let v = json_out(&run(&["calc", "pl"], Some(input)));
    // n even: a twist acts on homology as a reflection
    assert_eq!(v["order"], serde_json::json!(2));
    assert!(v["result"].is_array());
}

#[test]
fn calc_cpn_simply_connected_contradiction() {
    let input = r#"{"n": 3, "profile": [1, 0, 1, 1], "h1": 0}"#;
    let v = json_out(&run(&["calc", "cpn"], Some(input)));
    assert_eq!(v["verdict"], serde_json::json!("contradiction"));
}

#[test]
fn calc_cpn_rp_n_admissible() {
    // Z/2 cohomology of RP^3: all Betti numbers 1
    let input = r#"{"n": 3, "profile": [1, 1, 1, 1], "h1": {"g": 1}}"#;
    let v = json_out(&run(&["calc", "cpn"], Some(input)));
    assert_eq!(v["verdict"], serde_json::json!("admissible"));
}

#[test]
fn calc_surface_rules_and_search() {
    let input = r#"{
      "genus": 2, "mod": 3,
      "curves": [
        {"class": [1,0,0,0], "rot": 1},
        {"class": [0,1,0,0], "rot": 1},
        {"class": [1,1,0,0], "rot": 2}
      ],
      "op": "rules"
    }"#;
    let v = json_out(&run(&["calc", "surface"], Some(input)));
    assert_eq!(v["triple_sum"], serde_json::json!({"mod": 3, "val": 1}));
}

#[test]
fn mono_weighted_golden() {
    // x^3 + x y^3 + z^2 with beta = 18 and weights (6, 4, 9)
    let input = r#"{"monomials":[[3,0,0],[1,3,0],[0,0,2]],"betas":[6,4,9],"beta":18}"#;
    let v = json_out(&run(&["mono", "weighted"], Some(input)));
    assert_eq!(v["sigma"], serde_json::json!(-2));
}

#[test]
fn mono_verdict_golden() {
    let e7 = r#"{"monomials":[[3,0,0],[1,3,0],[0,0,2]],"betas":[6,4,9],"beta":18}"#;
    let v = json_out(&run(&["mono", "verdict"], Some(e7)));
    assert_eq!(v["verdict"], serde_json::json!("infinite-order"));
    // Fermat quartic in four variables: sum of weights equals beta, test is silent
    let quartic = r#"{"monomials":[[4,0,0,0],[0,4,0,0],[0,0,4,0],[0,0,0,4]],"betas":[1,1,1,1],"beta":4}"#;
    let v = json_out(&run(&["mono", "verdict"], Some(quartic)));
    assert_eq!(v["verdict"], serde_json::json!("inconclusive"));
}

#[test]
fn mono_geodesic_sphere() {
    // round S^3: one interior conjugate point of multiplicity 2 plus the
    // full-period point of multiplicity 2 gives sigma = -4
    let input = r#"{"dim": 3, "points": [{"t": 0.5, "m": 2}, {"t": 1.0, "m": 2}]}"#;
    let v = json_out(&run(&["mono", "geodesic"], Some(input)));
    assert_eq!(v["sigma"], serde_json::json!(-4));
}

#[test]
fn mono_table_m3() {
    let v = json_out(&run(&["mono", "table", "--m", "3"], None));
    let rows = v["rows"].as_array().unwrap();
    assert!(rows
        .iter()
        .any(|r| r["name"] == "S^3" && r["sigma"] == serde_json::json!(-4)));
    assert!(rows
        .iter()
        .any(|r| r["name"] == "CP^3" && r["sigma"] == serde_json::json!(-6)));
}

#[test]
fn mono_loop_diagonal_action() {
    let input = r#"{"mults": [1, 2]}"#;
    let v = json_out(&run(&["mono", "loop"], Some(input)));
    assert_eq!(v["sigma"], serde_json::json!(-6));
}

#[test]
fn schema_errors_exit_one() {
    let out = run(&["mono", "weighted"], Some(r#"{"nope": true}"#));
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], serde_json::json!("SchemaError"));
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["no-such-command"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn domain_errors_exit_two() {
    let input = r#"{"monomials":[[3,0,0]],"betas":[5,4,9],"beta":18}"#;
    let out = run(&["mono", "weighted"], Some(input));
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], serde_json::json!("NotQuasiHomogeneous"));
}

#[test]
fn tol_flag_is_accepted() {
    let v = json_out(&run(
        &["--tol", "1e-9,1e-7", "cover", "dehn-shift", "--n", "2"],
        None,
    ));
    assert_eq!(v["k"], serde_json::json!(2));
}

#[test]
fn output_is_deterministic() {
    let input = format!(r#"{{"lambda0":{ROT},"lambda1":{IRN}}}"#);
    let a = run(&["maslov", "pair"], Some(&input));
    let b = run(&["maslov", "pair"], Some(&input));
    assert_eq!(a.stdout, b.stdout);
}
