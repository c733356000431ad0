use std::process::{Command, Output};

fn k3g2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3g2")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = k3g2(&all);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("valid JSON"))
}

#[test]
fn invariants_of_reference_sextic() {
    let (code, v) = json(&["invariants", "--sextic", "0,\u{2212}274,225,\u{2212}85,15,\u{2212}1,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["sections"]["invariants"]["I2"], "310");
    let (code, v) = json(&["invariants", "--roots", "0,1,2,3,4,5"]);
    assert_eq!(code, 0);
    assert_eq!(v["sections"]["invariants"]["I10"], "1194393600");
    assert_eq!(v["passed"], true);
}

#[test]
fn e8_roots() {
    let (code, v) = json(&["lattice", "--name", "E8", "--roots"]);
    assert_eq!(code, 0);
    assert_eq!(v["sections"]["lattice"]["roots"], 240);
    assert_eq!(v["sections"]["lattice"]["discriminant"], "1");
    let o = k3g2(&["lattice", "--name", "E8", "--roots"]);
    assert!(stdout(&o).contains("roots 240"));
}

#[test]
fn classify_reports_fibers() {
    let (code, v) = json(&["classify", "--ic", "3110,165952,159056000,1194393600"]);
    assert_eq!(code, 0);
    let ys: Vec<String> = v["sections"]["Y"]["fibers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["type"].as_str().unwrap().to_string())
        .collect();
    assert!(ys.contains(&"I5*".to_string()));
    assert_eq!(v["sections"]["shioda-tate"]["Y"]["discriminant"], "64");
}

#[test]
fn build_and_kummer() {
    let (code, v) = json(&["build", "--roots", "0,1,2,3,4,5"]);
    assert_eq!(code, 0);
    assert_eq!(v["sections"]["surfaces"]["y"]["a6"], serde_json::json!([]));
    let (code, v) = json(&["kummer", "--roots", "0,1,2,3,4,5"]);
    assert_eq!(code, 0);
    assert_eq!(v["sections"]["configuration"]["trope_product_scalar"], "4");
}

#[test]
fn singular_invariants_fail_with_exit_1() {
    let (code, v) = json(&["build", "--ic", "1,2,3,0"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(k3g2(&["invariants", "--sextic", "1,2"]).status.code(), Some(2));
    assert_eq!(k3g2(&["invariants", "--sextic", "a,b,c,d,e,f,g"]).status.code(), Some(2));
    assert_eq!(k3g2(&["verify", "--precision", "10"]).status.code(), Some(2));
    assert_eq!(k3g2(&["lattice", "--name", "Q7"]).status.code(), Some(2));
    assert_eq!(k3g2(&["frobnicate"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_k3g2")).args(["verify"]).env("K3G2_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_is_reproducible() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("k3g2-verify-a-{}.json", std::process::id()));
    let b = dir.join(format!("k3g2-verify-b-{}.json", std::process::id()));
    for (p, threads) in [(&a, "1"), (&b, "3")] {
        let o = Command::new(env!("CARGO_BIN_EXE_k3g2"))
            .args(["verify", "--level", "kummer", "--seed", "9", "--out", p.to_str().unwrap()])
            .env("K3G2_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let _ = (std::fs::remove_file(&a), std::fs::remove_file(&b));
    assert_eq!(x, y);
    let v: serde_json::Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["sections"]["kummer-side"]["pencil_dimension"], 2);
    assert_eq!(v["sections"]["kummer-side"]["max_log10_held_out_residual"]["digits"], 80);
}
