//! Every JSON document the binary emits validates against docs/report-schema.json.

use std::process::Command;

use serde_json::{json, Value};

const SCHEMA: &str = include_str!("../../../docs/report-schema.json");

fn run<S: AsRef<str> + std::fmt::Debug>(args: &[S]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_eloop"))
        .args(args.iter().map(AsRef::as_ref))
        .args(["--format", "json"])
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}: {stdout}{}", String::from_utf8_lossy(&out.stderr)))
}

fn check(def: &str, doc: &Value) {
    let mut schema: Value = serde_json::from_str(SCHEMA).unwrap();
    schema["$ref"] = json!(format!("#/$defs/{def}"));
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{def}: {errors:#?}\n{doc:#}");
}

const L52: [&str; 8] = ["-p", "5", "-e", "2", "-A", "2", "-B", "1"];
const L53: [&str; 8] = ["-p", "5", "-e", "3", "-A", "2", "-B", "1"];

fn with(sub: &str, instance: &[&str], rest: &[&str]) -> Vec<String> {
    std::iter::once(sub).chain(instance.iter().copied()).chain(rest.iter().copied()).map(String::from).collect()
}

#[test]
fn point_commands_match_schema() {
    check("Add", &run(&with("add", &L53, &["--point", "5,1,0", "--point", "0,1,5"])));
    check("Mul", &run(&with("mul", &L53, &["-n", "-7", "--point", "5,1,0"])));
    check("Order", &run(&with("order", &L53, &["--point", "0,1,5"])));
    check("Membership", &run(&with("membership", &L53, &["--point", "5,1,0"])));
    check("Membership", &run(&with("membership", &L53, &["--point", "1,1,1"])));
    check("Stratify", &run(&with("stratify", &L53, &["--point", "0,1,1"])));
    check("Decompose", &run(&with("decompose", &L53, &["--point", "10,1,15"])));
}

#[test]
fn structure_commands_match_schema() {
    check("Layers", &run(&with("layers", &L52, &[])));
    check("Layers", &run(&with("layers", &L53, &["--t", "5"])));
    check("Enumerate", &run(&with("enumerate", &L52, &["--part", "infinity"])));
    check("Enumerate", &run(&with("enumerate", &L52, &["--t", "0"])));

    let m = run(&with("mul", &L52, &["-n", "5", "--point", "0,1,1"]));
    let r = &m["result"];
    let pt = format!("{},{},{}", r[0], r[1], r[2]);
    check("Torsion", &run(&with("torsion", &L52, &["--q", "7", "--point", &pt])));
}

#[test]
fn reports_match_schema() {
    let verify = run(&with("verify", &L52, &["--budget", "20000"]));
    check("Verify", &verify);
    for c in verify["checks"].as_array().unwrap() {
        if let Some(rep) = c.get("report") {
            check("LawReport", rep);
        }
    }
    check("Verify", &run(&with("verify", &L53, &["--suite", "moufang", "--budget", "5000"])));

    let l56 = ["-p", "5", "-e", "6", "-A", "2", "-B", "1"];
    for (instance, kind) in [(&L53, "A"), (&L53, "B"), (&l56, "inf")] {
        let w = run(&with("witness", instance, &["--type", kind]));
        check("Witness", &w);
        check("LawReport", &w["report"]);
    }

    check("Classify", &run(&["classify", "--max-p", "7", "--max-order", "49"]));

    let dir = std::env::temp_dir().join(format!("eloop-schema-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("witness.json");
    let w = run(&with("witness", &L53, &["--type", "A"]));
    std::fs::write(&file, w.to_string()).unwrap();
    check("Replay", &run(&["replay", &*file.to_string_lossy()]));
    std::fs::remove_dir_all(&dir).unwrap();
}
