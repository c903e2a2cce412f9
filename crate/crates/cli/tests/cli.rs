use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> PathBuf {
    root().join("fixtures").join(name)
}

fn cpdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpdeg"))
        .args(args)
        .env_remove("BLOCH_SEED")
        .output()
        .expect("spawn cpdeg")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(&cpdeg(args))).unwrap()
}

fn schema(name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(root().join("schema").join(name)).unwrap()).unwrap()
}

fn report_validator() -> jsonschema::Validator {
    let graph = schema("graph.schema.json");
    let id = graph["$id"].as_str().unwrap().to_owned();
    jsonschema::options()
        .with_resource(id, jsonschema::Resource::from_contents(graph).unwrap())
        .build(&schema("report.schema.json"))
        .unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v
        .iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn hexagonal_dispersion_text() {
    let out = stdout(&cpdeg(&[
        "dispersion",
        fixture("hexagonal.json").to_str().unwrap(),
    ]));
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "-a*b*x^-1 - b*c*x^-1*y - a*c*y^-1 + (V_u*V_v - a^2 - b^2 - c^2) + (-V_u - V_v)*lambda \
         + lambda^2 - a*c*y - b*c*x*y^-1 - a*b*x"
    );
    assert_eq!(
        lines.next().unwrap(),
        "terms: 9 (13 with parameter monomials)  cycle covers: 13"
    );
    assert_eq!(lines.count(), 9);
}

#[test]
fn singular_house_dispersion_text() {
    let out = stdout(&cpdeg(&[
        "dispersion",
        fixture("singular_house.json").to_str().unwrap(),
    ]));
    assert_eq!(
        out.lines().next().unwrap(),
        "(-V_v*b - a*d)*x^-1 + b*x^-1*lambda - V_v*c*y^-1 + c*y^-1*lambda + (V_u*V_v - a^2 - d^2) \
         + (-V_u - V_v)*lambda + lambda^2 - V_v*c*y + c*y*lambda + (-V_v*b - a*d)*x + b*x*lambda"
    );
    assert_eq!(
        out.lines().nth(1).unwrap(),
        "terms: 11 (16 with parameter monomials)  cycle covers: 16"
    );
}

#[test]
fn malformed_input_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"d\": 2,\n \"vertices\": [\"u\"\n}").unwrap();
    let o = cpdeg(&["dispersion", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(
        cpdeg(&["polytope", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let bad_shift = dir.path().join("g.json");
    fs::write(
        &bad_shift,
        r#"{"d":2,"vertices":["u"],"edges":[{"from":"u","to":"u","shift":[1],"weight":"e"}]}"#,
    )
    .unwrap();
    assert_eq!(
        cpdeg(&["polytope", bad_shift.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let params = dir.path().join("p.json");
    fs::write(&params, r#"{"e": "1/0"}"#).unwrap();
    let chain = fixture("chain.json");
    let o = cpdeg(&[
        "corners",
        chain.to_str().unwrap(),
        "--params",
        params.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = Command::new(env!("CARGO_BIN_EXE_cpdeg"))
        .args(["corners", chain.to_str().unwrap()])
        .env("BLOCH_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bloch_seed_overrides_flag() {
    let house = fixture("singular_house.json");
    let a = Command::new(env!("CARGO_BIN_EXE_cpdeg"))
        .args(["corners", house.to_str().unwrap(), "--seed", "1"])
        .env("BLOCH_SEED", "99")
        .output()
        .unwrap();
    let b = cpdeg(&["corners", house.to_str().unwrap(), "--seed", "99"]);
    assert_eq!(stdout(&a), stdout(&b));
    let c = cpdeg(&["corners", house.to_str().unwrap(), "--seed", "1"]);
    assert_ne!(stdout(&b), stdout(&c));
}

#[test]
fn report_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let house = fixture("singular_house.json");
    for out in [&a, &b] {
        let o = cpdeg(&[
            "report",
            house.to_str().unwrap(),
            "--seed",
            "5",
            "--json",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn singular_house_report() {
    let r = json(&["report", fixture("singular_house.json").to_str().unwrap()]);
    let b = &r["bounds"];
    assert_eq!(b["nvol"], 16);
    assert_eq!(b["n_vert"], 8);
    assert_eq!(b["n_disc"], 0);
    assert_eq!(b["cpdeg_upper"], 8);
    assert_eq!(b["corner_lower"], 8);
    assert_eq!(r["corners"]["points"].as_array().unwrap().len(), 8);
    assert_valid(&report_validator(), &r);
}

#[test]
fn hex_plus_refined_report() {
    let r = json(&[
        "report",
        fixture("hex_plus.json").to_str().unwrap(),
        "--refine",
    ]);
    let b = &r["bounds"];
    assert_eq!(b["nvol"], 54);
    assert_eq!(b["n_vert"], 8);
    assert_eq!(b["n_disc"], 4);
    assert_eq!(b["cpdeg_upper"], 42);
    assert_eq!(b["refinement"]["cpdeg_upper"], 40);
    assert_valid(&report_validator(), &r);
}

#[test]
fn hexagonal_report() {
    let r = json(&["report", fixture("hexagonal.json").to_str().unwrap()]);
    assert_eq!(r["bounds"]["n_vert"], 0);
    assert_eq!(r["bounds"]["n_disc"], 0);
    assert_eq!(r["bounds"]["cpdeg_upper"], 12);
    assert!(r["bounds"]["refinement"].is_null());
    assert_valid(&report_validator(), &r);
}

#[test]
fn chain_report_has_oracle_and_validates() {
    let v = report_validator();
    for name in ["chain.json", "diatomic_chain.json"] {
        let r = json(&["report", fixture(name).to_str().unwrap()]);
        assert!(
            r["oracle"]["count"].as_u64().unwrap() <= r["bounds"]["cpdeg_upper"].as_u64().unwrap()
        );
        assert_valid(&v, &r);
    }
}

#[test]
fn report_with_params_file() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.json");
    fs::write(
        &params,
        r#"{"a": 2, "b": "3/2", "c": 5, "d": "-1/3", "V_u": 1, "V_v": "7/4"}"#,
    )
    .unwrap();
    let r = json(&[
        "report",
        fixture("singular_house.json").to_str().unwrap(),
        "--params",
        params.to_str().unwrap(),
    ]);
    assert_eq!(r["params"]["b"], "3/2");
    assert!(r["corners"]["seed"].is_null());
    assert_eq!(r["bounds"]["n_vert"], 8);
    assert_valid(&report_validator(), &r);
}

#[test]
fn fixtures_match_graph_schema() {
    let v = jsonschema::validator_for(&schema("graph.schema.json")).unwrap();
    for entry in fs::read_dir(root().join("fixtures")).unwrap() {
        let path = entry.unwrap().path();
        let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_valid(&v, &doc);
    }
}

#[test]
fn emit_dot_writes_one_file_per_face() {
    let dir = tempfile::tempdir().unwrap();
    let dots = dir.path().join("dots");
    let house = fixture("singular_house.json");
    let faces = json(&[
        "faces",
        house.to_str().unwrap(),
        "--emit-dot",
        dots.to_str().unwrap(),
    ]);
    let ids: Vec<u64> = faces
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["id"].as_u64().unwrap())
        .collect();
    assert!(!ids.is_empty());
    for id in ids {
        let text = fs::read_to_string(dots.join(format!("face_{id}.dot"))).unwrap();
        assert!(text.starts_with("digraph"), "{text}");
    }
}

#[test]
fn emit_off_for_three_polytopes_only() {
    let dir = tempfile::tempdir().unwrap();
    let off = dir.path().join("p.off");
    let o = cpdeg(&[
        "polytope",
        fixture("hexagonal.json").to_str().unwrap(),
        "--emit-off",
        off.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&off).unwrap();
    assert!(text.starts_with("OFF"));
    let counts: Vec<usize> = text
        .lines()
        .nth(1)
        .unwrap()
        .split_whitespace()
        .map(|s| s.parse().unwrap())
        .collect();
    let p = json(&["polytope", fixture("hexagonal.json").to_str().unwrap()]);
    assert_eq!(counts[0], p["vertices"].as_array().unwrap().len());
    assert_eq!(counts[1], p["facets"].as_array().unwrap().len());

    let o = cpdeg(&[
        "polytope",
        fixture("chain.json").to_str().unwrap(),
        "--emit-off",
        off.to_str().unwrap(),
    ]);
    assert_ne!(o.status.code(), Some(0));
}
