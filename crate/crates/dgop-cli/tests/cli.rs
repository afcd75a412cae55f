use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};

use dgop::io;
use dgop::{random, Field};

fn dgop() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dgop"));
    c.env_remove("DGOP_CONFIG");
    c
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = dgop().args(args).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    (out.status.code().unwrap(), v, text)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dgop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn truncated_polynomial_dual() -> Value {
    json!({
        "carrier": {"field": {"p": 2}, "basis": {"0": ["x0", "x1", "x2"]}, "d": []},
        "cooperations": [{"op": "D2", "arity": 2, "degree": 0, "matrix": [
            {"from": "x0", "to": ["x0", "x0"], "coeff": "1"},
            {"from": "x1", "to": ["x0", "x1"], "coeff": "1"},
            {"from": "x1", "to": ["x1", "x0"], "coeff": "1"},
            {"from": "x2", "to": ["x0", "x2"], "coeff": "1"},
            {"from": "x2", "to": ["x1", "x1"], "coeff": "1"},
            {"from": "x2", "to": ["x2", "x0"], "coeff": "1"}
        ]}]
    })
}

fn betti(v: &Value) -> Vec<u64> {
    v["betti"].as_object().unwrap().values().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn free_operad_on_binary_sphere_lists_twelve_trees() {
    let (code, v, _) = run(&["free-operad", "S0(2)", "--arity", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["arities"]["3"]["trees"].as_array().unwrap().len(), 12);
    assert_eq!(v["arities"]["2"]["dim"], 2);
    assert_eq!(v["arities"]["1"]["dim"], 1);
}

#[test]
fn homology_of_projective_plane_depends_on_field() {
    let (code, v, _) = run(&["homology", "rp2"]);
    assert_eq!(code, 0);
    assert_eq!(betti(&v), vec![1, 1, 1]);
    let (_, v, _) = run(&["homology", "rp2", "--field", "Q"]);
    assert_eq!(betti(&v), vec![1, 0, 0]);
    let (_, v, _) = run(&["homology", "delta0"]);
    assert_eq!(betti(&v), vec![1]);
}

#[test]
fn config_file_supplies_defaults() {
    let p = scratch("config.json", r#"{"field": "Q"}"#);
    let out = dgop().args(["homology", "rp2"]).env("DGOP_CONFIG", &p).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(betti(&v), vec![1, 0, 0]);
    // explicit flags win
    let out = dgop().args(["homology", "rp2", "--field", "F2"]).env("DGOP_CONFIG", &p).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(betti(&v), vec![1, 1, 1]);
}

#[test]
fn empty_simplicial_set_passes_with_empty_tables() {
    let p = scratch("empty.json", r#"{"simplices": {}}"#);
    let p = p.to_str().unwrap();
    let (code, v, _) = run(&["homology", p]);
    assert_eq!(code, 0);
    assert_eq!(v["betti"], json!({}));
    let (code, v, _) = run(&["e-structure", p]);
    assert_eq!(code, 0);
    assert_eq!(v["cooperations"], json!([]));
    assert_eq!(v["status"], "pass");
}

#[test]
fn e_structure_on_interval_contains_alexander_whitney() {
    let (code, v, _) = run(&["e-structure", "delta1", "--arity", "2", "--deg", "0"]);
    assert_eq!(code, 0);
    let tables = v["cooperations"].as_array().unwrap();
    let aw = tables.iter().find(|t| t["arity"] == 2 && t["degree"] == 0).expect("arity 2 table");
    let entries = aw["matrix"].as_array().unwrap();
    let has = |from: &str, a: &str, b: &str| entries.iter().any(|e| e["from"] == from && e["to"] == json!([a, b]));
    assert!(has("[0,1]", "[0]", "[0,1]"));
    assert!(has("[0,1]", "[0,1]", "[1]"));
    assert!(has("[0]", "[0]", "[0]"));
    assert!(has("[1]", "[1]", "[1]"));
    assert_eq!(entries.len(), 4);
}

#[test]
fn e_structure_defaults_pass_on_boundary_of_triangle() {
    let (code, v, _) = run(&["e-structure", "boundary2"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["truncation"], json!({"max_arity": 3, "max_degree": 4}));
}

#[test]
fn steenrod_square_on_projective_plane_is_nonzero() {
    let (code, v, _) = run(&["steenrod", "rp2", "--i", "1"]);
    assert_eq!(code, 0);
    let r = v["results"].as_array().unwrap();
    let deg1: Vec<&Value> = r.iter().filter(|x| x["degree"] == 1).collect();
    assert_eq!(deg1.len(), 1);
    assert_eq!(deg1[0]["nonzero"], true);
    assert!(r.iter().filter(|x| x["degree"] != 1).all(|x| x["nonzero"] == false));
}

#[test]
fn steenrod_requires_characteristic_two() {
    let (code, v, _) = run(&["steenrod", "rp2", "--i", "1", "--field", "Q"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "invalid_input");
}

#[test]
fn ainfty_verification_accepts_and_rejects() {
    let good = truncated_polynomial_dual();
    let p = scratch("t3.json", &good.to_string());
    let (code, v, _) = run(&["verify-ainfty", p.to_str().unwrap(), "--n", "4"]);
    assert_eq!(code, 0, "{v}");
    let (code, _, _) = run(&["verify-coalgebra", "ainfty:4", p.to_str().unwrap()]);
    assert_eq!(code, 0);

    let mut bad = good.clone();
    bad["cooperations"][0]["matrix"][2]["to"] = json!(["x1", "x1"]);
    let p = scratch("bad.json", &bad.to_string());
    for args in [vec!["verify-ainfty", p.to_str().unwrap()], vec!["verify-coalgebra", "ainfty:3", p.to_str().unwrap()]] {
        let (code, v, _) = run(&args);
        assert_eq!(code, 1);
        assert_eq!(v["status"], "fail");
        let checks = v["report"]["checks"].as_array().unwrap();
        assert!(checks.iter().any(|c| c["witness"].is_string()), "{v}");
    }
}

#[test]
fn coalgebra_violating_the_boundary_is_reported_with_witness() {
    // d u = v and D2 = 0, so ∂D3 must vanish, but ∂D3(u) = v⊗u⊗v + u⊗v⊗v
    let c = json!({
        "carrier": {"field": {"p": 2}, "basis": {"0": ["v"], "1": ["u"]}, "d": [{"from": "u", "to": "v", "deg": 1, "coeff": "1"}]},
        "cooperations": [{"op": "D3", "arity": 3, "degree": 1, "matrix": [{"from": "u", "to": ["u", "u", "v"], "coeff": "1"}]}]
    });
    let p = scratch("viol.json", &c.to_string());
    let (code, v, _) = run(&["verify-coalgebra", "ainfty:3", p.to_str().unwrap()]);
    assert_eq!(code, 1, "{v}");
    let checks = v["report"]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["passed"] == false && c["witness"].is_string()));
}

#[test]
fn parse_errors_are_json_with_location() {
    let p = scratch("broken.json", "{\"simplices\": {\"0\": [1]}}");
    let (code, v, _) = run(&["homology", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "error");
    assert!(v["error"]["location"].as_str().unwrap().starts_with("$.simplices"));
    let p = scratch("syntax.json", "{\"simplices\": ");
    let (code, v, _) = run(&["homology", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    let (code, _, _) = run(&["homology", "no-such-space"]);
    assert_eq!(code, 2);
}

#[test]
fn composition_product_of_binary_spheres() {
    let (code, v, _) = run(&["compose-product", "S0(2)", "S0(2)"]);
    assert_eq!(code, 0);
    assert_eq!(v["dims"]["4"]["0"], 24);
    let seq = io::symseq_from_json(&v["product"], None, "$").unwrap();
    assert_eq!(io::symseq_to_json(&seq), v["product"]);
}

#[test]
fn cofree_on_free_unary_operad() {
    let (code, v, _) = run(&["cofree", "T(S1(1))", "k", "--deg-min", "-5", "--deg-max", "0"]);
    assert_eq!(code, 0, "{v}");
    let dims: Vec<(String, u64)> = v["dims"].as_object().unwrap().iter().map(|(k, x)| (k.clone(), x.as_u64().unwrap())).collect();
    assert_eq!(dims.len(), 6);
    assert!(dims.iter().all(|(_, d)| *d == 1));
    assert!(v["provenance"].is_object());
    let c = io::complex_from_json(&v["complex"], None, "$").unwrap();
    assert_eq!(io::complex_to_json(&c), v["complex"]);

    let (code, v, _) = run(&["cofree", "I", "k"]);
    assert_eq!(code, 0);
    assert_eq!(v["dims"], json!({"0": 1}));
}

#[test]
fn attach_cell_round_trips_presentations() {
    let (code, v, _) = run(&["attach-cell", "ainfty:2", r#"{"name":"D3","arity":3,"degree":1,"boundary":[]}"#]);
    assert_eq!(code, 0);
    let p = io::presentation_from_json(&v["presentation"], None, "$").unwrap();
    assert_eq!(p.cells.len(), 2);
    assert_eq!(io::presentation_to_json(&p), v["presentation"]);
    // the output is itself a valid presentation argument
    let f = scratch("pres.json", &v["presentation"].to_string());
    let (code, v, _) = run(&["free-operad", f.to_str().unwrap(), "--arity", "3"]);
    assert_eq!(code, 0);
    assert!(v["arities"]["3"]["dim"].as_u64().unwrap() > 0);
}

#[test]
fn attach_cell_rejects_non_cycles() {
    let (code, v, _) = run(&["attach-cell", "ainfty:2", r#"{"name":"c","arity":2,"degree":2,"boundary":[["D2",1,2]]}"#]);
    assert_eq!(code, 2, "{v}");
}

#[test]
fn lift_of_seeded_instance() {
    let mut r = random::rng(11);
    let inst = random::lift_instance(Field::f2(), 2, 0, 2, 1, &mut r).unwrap();
    let data = |q: &dgop::coalgebra::QuasiFreeCoalgebra| io::CoalgebraData {
        carrier: q.carrier.clone(),
        cooperations: q.presentation.cells.iter().map(|c| c.name.clone()).zip(q.generators.iter().cloned()).collect(),
    };
    let input = json!({
        "cell": {"arity": 2, "degree": 0},
        "w": io::coalgebra_to_json(&data(&inst.w)),
        "v": io::coalgebra_to_json(&data(&inst.v)),
        "f": io::linear_map_to_json(&inst.f),
    });
    let p = scratch("lift.json", &input.to_string());
    let (code, v, _) = run(&["lift", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["checks"]["restriction_strict"], true);
    assert_eq!(v["checks"]["homotopy_identity"], true);
}

#[test]
fn output_is_deterministic_and_round_trips() {
    for args in [
        vec!["e-structure", "rp2", "--arity", "2", "--deg", "2"],
        vec!["free-operad", "S0(2)", "--arity", "3"],
        vec!["homology", "torus"],
        vec!["steenrod", "torus", "--i", "0"],
    ] {
        let (_, v1, t1) = run(&args);
        let (_, _, t2) = run(&args);
        assert_eq!(t1, t2, "{args:?}");
        let again: Value = serde_json::from_str(&serde_json::to_string(&v1).unwrap()).unwrap();
        assert_eq!(again, v1);
        assert_eq!(v1["config"]["seed"], 0);
    }
}

#[test]
fn out_flag_writes_file() {
    let p = std::env::temp_dir().join(format!("dgop-cli-out-{}.json", std::process::id()));
    let out = dgop().args(["homology", "circle", "--out", p.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(betti(&v), vec![1, 1]);
    std::fs::remove_file(p).ok();
}
