use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jkscatter")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn verify_main_passes() {
    let out = run(&["verify-main", "--l1", "2", "--l2", "1", "--d", "1,1;1", "--zeta", "1,1,-2", "--order", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["pass"], true);
    assert_eq!(r["result"]["c_d"], "1/1");
    assert_eq!(r["result"]["rhs"], "1/1");
    assert_eq!(r["result"]["moduli_dimension"], 0);
}

#[test]
fn non_regular_stability_exits_3() {
    let out = run(&["verify-main", "--l1", "2", "--l2", "2", "--d", "1,1;1,1", "--zeta", "1,1,-1,-1", "--order", "4"]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert_eq!(r["error"]["kind"], "NonRegularStability");
    assert_eq!(r["error"]["witness"]["inner"]["kind"], "wall");
    assert!(r.get("result").is_none());
}

#[test]
fn jk_ab_infinity_report() {
    let out = run(&["jk-ab", "--infinity", "--l1", "1", "--l2", "1", "--d", "2;1", "--zeta", "1,-2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["value"], "0/1");
    let out = run(&["jk-ab", "--infinity", &fixture("k11_21.json")]);
    assert_eq!(report(&out)["result"]["value"], "0/1");
}

#[test]
fn jk_ab_at_finite_lambda() {
    for l in ["1", "7", "1000"] {
        let out = run(&["jk-ab", "--lambda", l, "--seed", "3", &fixture("k11_21.json")]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(report(&out)["result"]["value"], "0/1");
    }
    let out = run(&["--csv", "jk-ab", "--sweep", "100,10000", &fixture("k11_21.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("lambda,value,distance"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn pentagon_wall_table() {
    let out = run(&["scatter", "--l1", "1", "--l2", "1", "--order", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let walls = report(&out)["result"]["walls"].as_array().unwrap().clone();
    let rays: Vec<&Value> = walls.iter().filter(|w| w["support"] == "ray").collect();
    assert_eq!(rays.len(), 1);
    assert_eq!(rays[0]["direction"], serde_json::json!([1, 1]));
    assert_eq!(rays[0]["function"], "1+s1*t1*x*y");
    let out = run(&["--csv", "scatter", "--l1", "2", "--l2", "1", "--order", "3", "--ray", "2,1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "a,b,support,function\n2,1,ray,1+s1*s2*t1*x^2*y\n");
}

#[test]
fn extract_cd_values() {
    let out = run(&["extract-cd", "--l1", "1", "--l2", "1", "--d", "2;2", "--order", "4"]);
    assert_eq!(report(&out)["result"]["c_d"], "-1/4");
    let out = run(&["extract-cd", "--l1", "2", "--l2", "1", "--d", "1,1;1", "--order", "3"]);
    assert_eq!(report(&out)["result"]["c_d"], "1/1");
    let out = run(&["extract-cd", "--l1", "1", "--l2", "1", "--d", "3;2", "--order", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["error"]["kind"], "CutoffTooSmall");
}

#[test]
fn trees_and_jk_on_files() {
    let out = run(&["trees", &fixture("k21.json")]);
    let r = report(&out);
    assert_eq!(r["inputs"]["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(r["inputs"]["arrows"].as_array().unwrap().len(), 2);
    assert_eq!(r["result"]["weist_count"], "1/1");
    let out = run(&["jk", &fixture("kronecker2.json"), "--rcharges", "1/3,1/7"]);
    let r = report(&out);
    assert_eq!(r["result"]["value"], "2/1");
    assert_eq!(r["result"]["tree_value"], "2/1");
    let contributions: Vec<&str> = r["result"]["trees"].as_array().unwrap().iter().map(|t| t["contribution"].as_str().unwrap()).collect();
    assert_eq!(contributions, vec!["25/4", "-17/4"]);
    let out = run(&["jk", &fixture("kronecker2.json"), "--split-multiplicities", "false", "--rcharges", "seed:4"]);
    assert_eq!(report(&out)["result"]["value"], "2/1");
    let out = run(&["--csv", "trees", &fixture("kronecker2.json")]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "tree,arrows,components,stable,contribution\n0,a->b,-1/1,true,2/1\n");
}

#[test]
fn input_errors_exit_2() {
    let out = run(&["trees", &fixture("unnormalized.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["error"]["rule"], "normalization");
    let out = run(&["trees", &fixture("cycle.json")]);
    assert_eq!(report(&out)["error"]["rule"], "cycle");
    let out = run(&["trees", &fixture("broken.json")]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["error"]["kind"], "ParseError");
    assert_eq!(r["error"]["position"]["line"], 4);
    let out = run(&["verify-main", "--l1", "2", "--l2", "1", "--d", "1,1;1", "--zeta", "1,1,-1", "--order", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["scatter", "--l1", "1", "--l2", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["trees", "/nonexistent/quiver.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_stable() {
    let args = ["jk-ab", "--lambda", "10", "--seed", "9", "--l1", "2", "--l2", "1", "--d", "1,2;2", "--zeta", "2,2,-3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_jkscatter")).args(args).env("JKSCATTER_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn timing_only_on_request() {
    let out = run(&["--timing", "scatter", "--l1", "1", "--l2", "1", "--order", "2"]);
    assert!(report(&out)["timing_us"].is_u64());
    let out = run(&["scatter", "--l1", "1", "--l2", "1", "--order", "2"]);
    assert!(report(&out).get("timing_us").is_none());
}

#[test]
fn bad_thread_count_is_an_input_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_jkscatter"))
        .args(["scatter", "--l1", "1", "--l2", "1", "--order", "2"])
        .env("JKSCATTER_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
