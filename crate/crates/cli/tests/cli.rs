use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn taelman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taelman")).args(args).output().expect("spawn")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => !n.is_f64(),
        Value::Array(a) => a.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn selftest_length_suite() {
    let o = taelman(&["selftest", "--suite", "appendix-a", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pass"], true);
}

#[test]
fn carlitz_class_module_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let module = dir.path().join("carlitz.json");
    let out = dir.path().join("out.json");
    fs::write(&module, r#"{"q": 2, "phi_t": "carlitz"}"#).unwrap();
    let o = taelman(&[
        "class-module",
        "--module",
        module.to_str().unwrap(),
        "--constants-degree",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["class_module"]["dim"], 0);
    assert_eq!(v["class_module"]["divisors"], Value::Array(vec![]));
    assert!(no_floats(&v));
}

#[test]
fn carlitz_modulus_is_conclusive() {
    let o = taelman(&["class-module", "--module", r#"{"q":2,"phi_t":"carlitz"}"#, "--modulus", "theta^2+theta+1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["euler"]["conclusive"], true);
    assert_eq!(v["euler"]["alternating_sum"], 0);
    assert_eq!(v["euler_holds"], true);
}

#[test]
fn inconclusive_certificate_exits_two() {
    let o = taelman(&["class-module", "--module", r#"{"q":2,"phi_t":["theta","1","1"]}"#, "--modulus", "theta"]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["euler"]["conclusive"], false);
    assert_eq!(v["euler_holds"], Value::Null);
}

#[test]
fn ramification_table() {
    let o = taelman(&["ramification", "--p", "2", "--breaks", "1,1", "--nmax", "2"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("v(D_2) = 8"), "{s}");
    let o = taelman(&["ramification", "--p", "2", "--breaks", "1,1", "--nmax", "2", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["rows"][1]["different"], 8);
    assert_eq!(v["report"]["rows"][1]["bound"], "3/2");
}

#[test]
fn tower_is_deterministic() {
    let args = ["tower", "run", "--module", r#"{"q":2,"phi_t":["theta","theta^3"]}"#, "--nmax", "2"];
    let a = taelman(&args);
    let b = taelman(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(no_floats(&v));
    let dims: Vec<i64> = v["table"]["layers"].as_array().unwrap().iter().map(|r| r["dim"].as_i64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1, 1]);
    assert_eq!(v["dim_fit"]["mu"], "0");
    assert_eq!(v["dim_fit"]["nu"], "1");

    let csv = taelman(&[&args[..], &["--csv"]].concat());
    let s = String::from_utf8(csv.stdout).unwrap();
    assert!(s.starts_with("n,constants_degree,window_dim,dim,divisors,len[t],"));
    assert_eq!(s.lines().count(), 4);
}

#[test]
fn iwasawa_commands() {
    let o = taelman(&["iwasawa", "lengths", "--f", "pi*T+pi^2", "--N", "1..6", "--csv"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert_eq!(s.lines().nth(3), Some("3,0,6,6,6,6,true"));

    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    fs::write(&m, r#"{"q": 3, "rows": [["pi", "T"]]}"#).unwrap();
    let o = taelman(&["iwasawa", "verify", "--matrix", m.to_str().unwrap(), "--N", "10"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["rank"]["slope"], 1);
    assert_eq!(v["report"]["total"]["infinite"], true);
}

#[test]
fn errors_exit_one() {
    assert_eq!(code(&taelman(&["class-module", "--module", "{not json"])), 1);
    assert_eq!(code(&taelman(&["class-module", "--module", r#"{"q":6,"phi_t":"carlitz"}"#])), 1);
    assert_eq!(code(&taelman(&["ramification", "--p", "4", "--breaks", "1", "--nmax", "1"])), 1);
    assert_eq!(code(&taelman(&["iwasawa", "lengths", "--f", "pi+T", "--N", "5..2"])), 1);
    assert_eq!(code(&taelman(&["selftest", "--suite", "bogus"])), 1);
    let o = Command::new(env!("CARGO_BIN_EXE_taelman"))
        .args(["tower", "run", "--module", r#"{"q":2,"phi_t":"carlitz"}"#, "--nmax", "1"])
        .env("RESOURCE_BUDGET_SECS", "soon")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}
