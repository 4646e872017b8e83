use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sklyrep::freealg::ParamEnv;
use sklyrep::matkit::CMat;
use sklyrep::reptheory::Rep;
use sklyrep::sklyanin::{family, family_with_branch, Branch, FamilyId};
use sklyrep::C64;

fn sklyrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sklyrep"))
        .args(args)
        .env_remove("SKLYREP_SEED")
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn env(c: f64, kv: &[(&str, C64)]) -> ParamEnv {
    let mut e = ParamEnv::new().with("c", cx(c, 0.0));
    for (k, v) in kv {
        e.set(k, *v);
    }
    e
}

fn write_reps(dir: &Path, name: &str, reps: &[Rep]) -> String {
    let js: Vec<_> = reps.iter().map(Rep::to_json).collect();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&js).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn c_of(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn verify_family_member() {
    let out = sklyrep(&["verify", "--family", "t3f2", "--set", "c=2,z4=1"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["residual"].as_f64(), Some(0.0));
    assert_eq!(j["irreducible"], Value::Bool(true));
    assert_eq!(j["tests_agree"], Value::Bool(true));
    let center = &j["center"];
    for (k, want) in [("u1", 0.0), ("u2", 0.0), ("u3", 1.0), ("g", -2.0)] {
        assert_eq!(c_of(&center[k]), (want, 0.0), "{k}");
    }
    assert_eq!(j["status"], "ok");
}

#[test]
fn verify_rejects_side_condition() {
    let out = sklyrep(&["verify", "--family", "t4f1", "--set", "c=5,y4=1,z4=0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("constraint"));
}

#[test]
fn verify_files() {
    let dir = tempfile::tempdir().unwrap();
    let triv = Rep::trivial(&["x", "y", "z"], 2, env(2.0, &[]));
    let path = dir.path().join("triv.json");
    std::fs::write(&path, serde_json::to_string(&triv.to_json()).unwrap()).unwrap();
    let out = sklyrep(&["verify", "--rep", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["residual"].as_f64(), Some(0.0));
    assert_eq!(j["irreducible"], Value::Bool(false));
    // reducible fails only when irreducibility is asserted
    let out = sklyrep(&["verify", "--rep", path.to_str().unwrap(), "--expect-irreducible"]);
    assert_eq!(out.status.code(), Some(1));

    let mut bad = family(FamilyId::T4f2, &env(5.0, &[("x4", cx(1.3, 0.0))])).unwrap();
    bad.images[1][(0, 1)] += cx(0.5, 0.0);
    std::fs::write(&path, serde_json::to_string(&bad.to_json()).unwrap()).unwrap();
    let out = sklyrep(&["verify", "--rep", path.to_str().unwrap(), "--format", "human"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("status       fail"));

    std::fs::write(&path, r#"{"n":2,"generators":["x"],"matrices":{}}"#).unwrap();
    assert_eq!(sklyrep(&["verify", "--rep", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, r#"{"n":2,"generators":["x","y","z"],"matrices":{},"extra":1}"#).unwrap();
    assert_eq!(sklyrep(&["verify", "--rep", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn skew_rep_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    let text = r#"{"n":2,"generators":["x","y"],"params":{},
        "matrices":{"x":[[[-1.5,0],[0,0]],[[0,0],[1.5,0]]],"y":[[[0,0],[1,0]],[[-0.7,0],[0,0]]]}}"#;
    std::fs::write(&path, text).unwrap();
    let out = sklyrep(&["verify", "--rep", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["algebra"], "skew");
    assert_eq!(c_of(&j["center"]["u1"]), (2.25, 0.0));
    assert_eq!(c_of(&j["center"]["u2"]), (-0.7, 0.0));
}

#[test]
fn classify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let base = family(FamilyId::T4f1, &env(5.0, &[("y4", cx(0.9, 0.2)), ("z4", cx(-0.5, 0.7))])).unwrap();
    let conj: Vec<Rep> = (0..10)
        .map(|k| {
            let t = k as f64 * 0.1;
            base.conjugate(&CMat::m2(cx(1.0, t), cx(t, 0.0), cx(0.3, -t), cx(1.0, 0.0))).unwrap()
        })
        .collect();
    let out = sklyrep(&["classify", "--input", &write_reps(dir.path(), "conj.json", &conj)]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j.as_array().unwrap().len(), 1);
    assert_eq!(j[0]["members"].as_array().unwrap().len(), 10);

    let table4 = vec![
        base.clone(),
        family(FamilyId::T4f2, &env(5.0, &[("x4", cx(1.3, 0.1))])).unwrap(),
        family(FamilyId::T4f3, &env(5.0, &[("y4", cx(0.6, -0.9)), ("z4", cx(1.2, 0.4))])).unwrap(),
        family_with_branch(
            FamilyId::T4f4,
            &env(5.0, &[("y4", cx(0.7, 0.1)), ("z3", cx(-1.1, 0.3)), ("z4", cx(0.5, 0.8))]),
            Branch::Principal,
        )
        .unwrap(),
    ];
    let out = sklyrep(&["classify", "--input", &write_reps(dir.path(), "t4.json", &table4), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "index,class,representative\n0,0,0\n1,1,1\n2,2,2\n3,3,3\n"
    );

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let out = sklyrep(&["classify", "--input", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "[]");

    let other_c = family(FamilyId::T4f2, &env(3.0, &[("x4", cx(1.3, 0.1))])).unwrap();
    let mixed = write_reps(dir.path(), "mixed.json", &[base, other_c]);
    assert_eq!(sklyrep(&["classify", "--input", &mixed]).status.code(), Some(2));
}

#[test]
fn sigma_examples() {
    let j = stdout_json(&sklyrep(&["sigma", "--a", "1", "--b", "1", "--c", "2"]));
    assert_eq!(j["order"], 2);
    assert_eq!(j["relaxed"], Value::Bool(false));
    let j = stdout_json(&sklyrep(&["sigma", "--a", "1", "--b", "-1", "--c", "0"]));
    assert_eq!(j["order"], 1);
    assert_eq!(j["relaxed"], Value::Bool(true));
    let j = stdout_json(&sklyrep(&["sigma", "--a", "1", "--b", "2", "--c", "0.3", "--max-order", "8"]));
    assert_eq!(j["order"], Value::Null);
    assert_eq!(j["result"], "exceeds 8");
    assert_eq!(j["orbits"].as_array().unwrap().len(), 10);
    assert_eq!(j["orbits"][0].as_array().unwrap().len(), 9);
    let out = sklyrep(&["sigma", "--a", "1", "--b", "1", "--c", "2", "--trials", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 13);
    assert_eq!(sklyrep(&["sigma", "--a", "1+", "--b", "1", "--c", "2"]).status.code(), Some(2));
}

#[test]
fn solve_reports() {
    let out = sklyrep(&["solve", "--c", "5", "--jordan", "one", "--starts", "30", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["task"]["jordan"], "one_block");
    assert_eq!(j["task"]["slice_count"], 2);
    assert_eq!(j["stats"]["starts"], 30);
    for s in j["solutions"].as_array().unwrap() {
        assert!(s["residual"].as_f64().unwrap() <= 1e-8);
        if let Some(f) = s["matched_family"].as_str() {
            assert!(f == "t3f1" || f == "t3f2");
        }
    }
    let out = sklyrep(&["solve", "--algebra", "skew", "--jordan", "two", "--starts", "20", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("index,start,hits,residual,irreducible,matched_family,branch,x11_re"));
    assert_eq!(sklyrep(&["solve", "--c", "1", "--jordan", "two", "--starts", "5"]).status.code(), Some(2));
    assert_eq!(sklyrep(&["solve", "--jordan", "three"]).status.code(), Some(2));
    assert_eq!(sklyrep(&["solve", "--jordan", "two", "--starts", "0"]).status.code(), Some(2));
}

#[test]
fn seed_from_environment() {
    let args = ["solve", "--jordan", "two", "--starts", "12"];
    let by_env = Command::new(env!("CARGO_BIN_EXE_sklyrep"))
        .args(args)
        .env("SKLYREP_SEED", "99")
        .output()
        .unwrap();
    let mut flagged = args.to_vec();
    flagged.extend(["--seed", "99"]);
    let by_flag = sklyrep(&flagged);
    assert_eq!(by_env.stdout, by_flag.stdout);
    assert_eq!(stdout_json(&by_flag)["task"]["seed"], 99);
    assert_ne!(sklyrep(&args).stdout, by_flag.stdout);
}

#[test]
fn slices_and_planes() {
    let out = sklyrep(&["slice", "--c", "5", "--u1", "0", "--grid", "0:1:2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u2,u3,value");
    assert_eq!(lines[3], "1.0000000000000000e0,0.0000000000000000e0,5.0000000000000000e0");
    let j = stdout_json(&sklyrep(&["slice", "--c", "5", "--u1", "0", "--grid", "0:1:2", "--format", "json"]));
    assert_eq!(j.as_array().unwrap().len(), 4);
    assert_eq!(sklyrep(&["slice", "--c", "5", "--u1", "0", "--grid", "0:1"]).status.code(), Some(2));
    assert_eq!(sklyrep(&["slice", "--c", "5", "--u1", "0", "--grid", "0:1:0"]).status.code(), Some(2));

    let out = sklyrep(&["skew-plane", "--grid", "-1:1:3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(5), Some("0.0000000000000000e0,0.0000000000000000e0,trivial"));
}

#[test]
fn scalars_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scalars.json");
    let out = sklyrep(&["scalars", "--c", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(j["solutions"], serde_json::json!([[[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]]));
}
