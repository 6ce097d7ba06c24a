use std::process::{Command, Output};

fn apollo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apollo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn vertices_rho9_table() {
    let o = apollo(&["vertices", "--rho", "9"]);
    assert!(o.status.success());
    let want = "\
Q_1=(4,0,0,0,0,0,0,1,1)
Q_2=(24,24,-4,-4,-4,-4,-4,15,15)
Q_3=(20,20,20,-8,-8,-8,-8,19,19)
Q_4=(16,16,16,16,-12,-12,-12,19,19)
Q_5=(12,12,12,12,12,-16,-16,15,15)
Q_6=(8,8,8,8,8,8,-20,7,7)
Q_7=(4,4,4,4,4,4,4,-5,-5)
Q_1'=(1,0,0,0,0,0,0,0,1)
Q_2'=(6,6,-1,-1,-1,-1,-1,2,9)
Q_3'=(5,5,5,-2,-2,-2,-2,3,10)
Q_4'=(4,4,4,4,-3,-3,-3,3,10)
Q_5'=(3,3,3,3,3,-4,-4,2,9)
Q_6'=(2,2,2,2,2,2,-5,0,7)
Q_7'=(1,1,1,1,1,1,1,-3,4)
";
    assert_eq!(stdout(&o), want);
}

/// Descartes swaps from the strip seed `(0, 0, 2, 2)`.
fn descartes_oracle(kmax: i64) -> Vec<i64> {
    let mut out: Vec<i64> = [0, 0, 2, 2].into_iter().filter(|&k| k <= kmax).collect();
    let mut stack = vec![([0i64, 0, 2, 2], 4usize)];
    while let Some((q, last)) = stack.pop() {
        for i in (0..4).filter(|&i| i != last) {
            let k = 2 * (q.iter().sum::<i64>() - q[i]) - q[i];
            if k > q[i] && k <= kmax {
                out.push(k);
                let mut next = q;
                next[i] = k;
                stack.push((next, i));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn enumerate_rho4_matches_oracle() {
    let o = apollo(&["enumerate", "--rho", "4", "--kmax", "40"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("curvature,vector,word_length"));
    let mut ks: Vec<i64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    ks.sort();
    assert_eq!(ks, descartes_oracle(40));
}

#[test]
fn outputs_are_byte_identical_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_apollo"))
            .args(["enumerate", "--rho", "6", "--kmax", "8", "--format", "json"])
            .env("APOLLO_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let a = run("1");
    assert!(!a.is_empty());
    assert_eq!(a, run("3"));
    assert_eq!(a, run("1"));
}

#[test]
fn verify_reports_pass_as_json() {
    let o = apollo(&["verify", "--rho", "6", "--kmax", "6", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["packing"]["violations"].as_array().unwrap().len(), 0);
    assert!(v["domain"]["checks"].as_array().unwrap().iter().all(|c| c["verdict"] != "fail"));
}

#[test]
fn verify_rho10_edge_and_face_checks() {
    let o = apollo(&["verify", "--rho", "10", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["domain"]["checks"].as_array().unwrap();
    let covered: Vec<_> = checks
        .iter()
        .filter(|c| {
            let n = c["name"].as_str().unwrap();
            n.starts_with("edge") || n.starts_with("2-face")
        })
        .collect();
    assert!(!covered.is_empty());
    assert!(covered.iter().all(|c| c["verdict"] == "pass"));
}

#[test]
fn discrepancies_are_listed_but_not_fatal() {
    let o = apollo(&["verify", "--rho", "9", "--kmax", "2"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("note: discrepancy"));
}

#[test]
fn cluster_is_certified() {
    let o = apollo(&["cluster", "--vector", "2,-1,2,2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mutually_tangent"], true);
    assert_eq!(v["contains_vector"], true);
    assert_eq!(v["members"].as_array().unwrap().len(), 4);
}

#[test]
fn coxeter_dot_and_json() {
    let o = apollo(&["coxeter", "--graph", "apollonian"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("graph \"Gamma_Ap\""));
    assert_eq!(dot.matches("style=bold").count(), 6);
    let o = apollo(&["coxeter", "--rho", "7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 8);
}

#[test]
fn render_writes_svg_file() {
    let path = std::env::temp_dir().join(format!("apollo-render-{}.svg", std::process::id()));
    let o = apollo(&["render", "--rho", "4", "--kmax", "20", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    assert!(svg.starts_with("<?xml") && svg.contains("<svg ") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("<circle"));
}

#[test]
fn descartes_samples_pass() {
    let o = apollo(&["descartes", "--rho", "8", "--samples", "20", "--seed", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 20);
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["verify", "--rho", "3"][..],
        &["vertices"],
        &["enumerate", "--rho", "4", "--kmax", "-1"],
        &["enumerate", "--rho", "4", "--perspective", "1,0,0,0"],
        &["enumerate", "--rho", "4", "--perspective", "1,x,0,0"],
        &["enumerate", "--rho", "4", "--format", "svg"],
        &["cluster", "--vector", "1,1,1,1"],
        &["cluster", "--vector", "0,0,0,1", "--rho", "5"],
        &["render", "--rho", "7"],
        &["coxeter"],
    ] {
        let o = apollo(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_apollo"))
        .args(["vertices", "--rho", "5"])
        .env("APOLLO_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn custom_perspective_enumeration() {
    let o = apollo(&["enumerate", "--rho", "4", "--kmax", "6", "--perspective", "1,1,0,0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let zeros = stdout(&o).lines().skip(1).filter(|l| l.starts_with("0,")).count();
    assert_eq!(zeros, 2);
}
