use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn gcsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcsd"))
        .args(args)
        .env_remove("GCSD_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn wallfn_matches_four_ray_example() {
    let o = gcsd(&[
        "wallfn",
        "--a",
        "2",
        "--b",
        "1",
        "--p1",
        "1+p[1,1]*x+p[1,2]*x^2+p[1,3]*x^3",
        "--p2",
        "1+p[2,1]*y",
        "--order",
        "9",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["schema_version"], 1);
    let monos: Vec<&str> = v["data"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["value"][0]["monomial"].as_str().unwrap())
        .collect();
    assert_eq!(
        monos,
        [
            "p[1,2]*p[2,1]",
            "p[1,1]*p[1,3]*p[2,1]^2",
            "p[1,3]^2*p[2,1]^3"
        ]
    );
}

#[test]
fn check_reports_catalan_ray() {
    let o = gcsd(&[
        "check", "--p1", "1+x^3", "--p2", "1+y^2", "--order", "20", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["data"]["ok"], true);
    let walls = v["data"]["diagram"]["walls"].as_array().unwrap();
    let ray = walls
        .iter()
        .find(|w| w["direction"] == serde_json::json!([3, 2]))
        .unwrap();
    let cs: Vec<&str> = ray["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["value"][0]["coefficient"].as_str().unwrap())
        .collect();
    assert_eq!(cs, ["1", "2", "5", "14"]);
}

#[test]
fn greedy_with_negative_arguments() {
    let o = gcsd(&[
        "greedy", "--a1", "-2", "--a2", "-3", "--l1", "2", "--l2", "2", "--format", "text",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x^2*y^3\n");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        gcsd(&["wallfn", "--a", "1", "--b", "1", "--order", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gcsd(&["wallfn", "--a", "1", "--b", "1", "--order", "4", "--l1", "1", "--p2", "2+y"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gcsd(&["wallfn", "--a", "1", "--b", "1", "--order", "4", "--l1", "1", "--p2", "1+y*"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(gcsd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        gcsd(&["gw", "--l1", "1", "--l2", "1", "--a", "1", "--b", "0", "--order", "4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gw_table_as_csv() {
    let o = gcsd(&[
        "gw", "--l1", "1", "--l2", "1", "--a", "1", "--b", "1", "--order", "4",
    ]);
    assert_eq!(stdout(&o), "k,N_k\n1,1\n2,-1/4\n");
}

#[test]
fn file_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let jobs: [&[&str]; 4] = [
        &["scatter", "--order", "8", "--l1", "2", "--l2", "2"],
        &[
            "theta", "--m1", "-2", "--m2", "-1", "--order", "8", "--l1", "2", "--l2", "2",
            "--lines",
        ],
        &["render", "fan", "--order", "8", "--l1", "2", "--l2", "2"],
        &[
            "render",
            "tiling",
            "--beta1",
            "12",
            "--beta2",
            "8",
            "--epsilon",
            "-1",
            "--m",
            "14",
            "--n",
            "9",
            "--p1",
            "1+x^3",
            "--p2",
            "1+y^2",
            "--index",
            "5",
        ],
    ];
    for (i, job) in jobs.iter().enumerate() {
        let mut outs = Vec::new();
        for (run, threads) in ["1", "4"].iter().enumerate() {
            let path = dir.path().join(format!("out-{i}-{run}"));
            let mut args: Vec<&str> = vec!["--threads", threads];
            args.extend_from_slice(job);
            let p = path.to_str().unwrap().to_string();
            args.extend_from_slice(&["--output", &p]);
            let o = gcsd(&args);
            assert!(
                o.status.success(),
                "{:?}: {}",
                job,
                String::from_utf8_lossy(&o.stderr)
            );
            outs.push(fs::read(&path).unwrap());
        }
        assert!(!outs[0].is_empty());
        assert_eq!(outs[0], outs[1], "{:?}", job);
    }
}

#[test]
fn render_produces_svg() {
    let o = gcsd(&[
        "render", "tiling", "--m", "3", "--n", "1", "--values", "1,0,0,1",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
    assert!(s.contains("#3b6fd8") && s.contains("#d83b3b"));
}

#[test]
fn cluster_variables_cycle_for_unit_bounds() {
    let o = gcsd(&[
        "clustervar",
        "--from",
        "-1",
        "--to",
        "4",
        "--l1",
        "1",
        "--l2",
        "1",
    ]);
    let v = json(&o);
    let vars = v["data"].as_array().unwrap();
    assert_eq!(vars.len(), 6);
    assert_eq!(vars[0]["normalized"], vars[5]["normalized"]);
}

#[test]
fn thread_count_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_gcsd"))
        .args([
            "scatter", "--order", "5", "--l1", "1", "--l2", "1", "--format", "text",
        ])
        .env("GCSD_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("ray (1, 1)"));
}
