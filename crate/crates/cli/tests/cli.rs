use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn uproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uproj")).args(args).output().expect("run uproj")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn manifest(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel).to_string_lossy().into_owned()
}

fn assert_schema(schema: &str, v: &Value) {
    let s: Value = serde_json::from_str(&std::fs::read_to_string(manifest(&format!("schema/{schema}.schema.json"))).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&s).unwrap();
    let msgs: Vec<String> = match compiled.validate(v) {
        Ok(()) => return,
        Err(errs) => errs.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema}: {msgs:?}");
}

fn texts(v: &Value) -> Vec<String> {
    v["generators"].as_array().unwrap().iter().map(|g| g["text"].as_str().unwrap().to_string()).collect()
}

#[test]
fn cascade_counts() {
    let out = uproj(&["cascade", "--type", "A", "--rank", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_schema("cascade", &v);
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);
    let out = uproj(&["cascade", "--type", "A", "--rank", "1"]);
    assert_eq!(json(&out)["entries"].as_array().unwrap().len(), 1);
    assert_eq!(uproj(&["cascade", "--type", "G", "--rank", "3"]).status.code(), Some(2));
    assert_eq!(uproj(&["cascade", "--type", "Q", "--rank", "2"]).status.code(), Some(2));
}

#[test]
fn generators_examples() {
    let out = uproj(&["generators", "adjoint", "--type", "A", "--rank", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_schema("generator_set", &v);
    assert_eq!(texts(&v), ["(1/4*H1^2 + E1*F1)/E1", "E1"]);

    let v = json(&uproj(&["generators", "conj", "--n", "2"]));
    assert_schema("generator_set", &v);
    assert_eq!(texts(&v), ["s_2_1", "s_1_1 + s_2_2"]);

    let out = uproj(&["generators", "rep", "--file", &manifest("examples/sl2_defining.json")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_schema("generator_set", &v);
    assert_eq!(texts(&v), ["x_2"]);
}

#[test]
fn bad_rep_file() {
    let dir = std::env::temp_dir().join(format!("uproj-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(manifest("examples/sl2_defining.json")).unwrap()).unwrap();
    v["matrices"]["H1"][0][0] = Value::String("3".into());
    let bad = dir.join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let out = uproj(&["generators", "rep", "--file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(uproj(&["generators", "rep", "--file", bad.to_str().unwrap()]).status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn verify_examples() {
    let out = uproj(&["verify", "--type", "A", "--rank", "1", "E1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_schema("report", &json(&out));

    let out = uproj(&["verify", "--type", "A", "--rank", "1", "F1"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["checks"][0]["status"], "fail");
    assert_eq!(v["checks"][0]["residue"], "H1");

    let out = uproj(&["verify", "--type", "A", "--rank", "1", "F1 + 1/4*H1^2*E1^-1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    assert_eq!(uproj(&["verify", "--type", "A", "--rank", "1", "E1 * (H1"]).status.code(), Some(2));
    assert_eq!(uproj(&["verify", "--type", "A", "--rank", "1", "Z9"]).status.code(), Some(2));
}

#[test]
fn verify_conj_and_jobs() {
    let out = uproj(&["verify", "--n", "3", "--jobs", "2", "s_3_1", "s_1_1 + s_2_2 + s_3_3", "s_1_1"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["s_1_1 invariant under E_1_2"]);
}

#[test]
fn eval_projects_and_evaluates() {
    let out = uproj(&["eval", "--type", "A", "--rank", "1", "--at", "E1=1,H1=2,F1=3", "F1", "H1^2 + 4*E1*F1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_schema("eval", &v);
    assert_eq!(v["results"][0]["text"], "(1/4*H1^2 + E1*F1)/E1");
    assert_eq!(v["results"][0]["at"], "4");
    assert_eq!(v["results"][1]["text"], "H1^2 + 4*E1*F1");
    // E1 vanishes: the projector's denominator is singular there
    let out = uproj(&["eval", "--type", "A", "--rank", "1", "--at", "0,1,1", "F1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = uproj(&["eval", "--type", "A", "--rank", "1", "--at", "1,2", "F1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_format() {
    let out = uproj(&["generators", "adjoint", "--type", "A", "--rank", "1", "--format", "text"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("P(F1) = (1/4*H1^2 + E1*F1)/E1"), "{s}");
    assert!(s.contains("xi1 = E1"));
}

#[test]
fn degree_cap_slice_search() {
    let v = json(&uproj(&["generators", "adjoint", "--type", "A", "--rank", "1", "--degree-cap", "2"]));
    let last = v["report"]["checks"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["status"], "pass");
    let v = json(&uproj(&["generators", "adjoint", "--type", "A", "--rank", "2", "--degree-cap", "0"]));
    let last = v["report"]["checks"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["status"], "inconclusive");
}
