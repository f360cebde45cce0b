use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matroid-mcmc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exited normally")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn lines(text: &str) -> Vec<Vec<usize>> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

const TRIANGLE: &str = "3 3\n0 1 0.5\n1 2 0.5\n2 0 0.5\n";

#[test]
fn free_matroid_sample() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "free2.json", r#"{"variant":"uniform","n":2,"k":2}"#);
    let out = ok(&[
        "sample", "--model", "independent", "--matroid", s(&m), "--lambda", "1", "--eps", "0.1", "--num-samples", "1",
        "--seed", "7",
    ]);
    let got = lines(&out);
    assert_eq!(got.len(), 1);
    assert!(got[0].iter().all(|&i| i < 2));
    assert!(got[0].windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn random_cluster_at_q_one_is_a_product_measure() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "tri.txt", TRIANGLE);
    let lam = write(&dir, "lam.txt", "0.5\n1\n3\n");
    let n = 20_000;
    let out = ok(&[
        "sample", "--model", "random-cluster", "--graph", s(&g), "--lambda", s(&lam), "--q", "1", "--num-samples",
        &n.to_string(), "--seed", "3",
    ]);
    let mut counts = [0usize; 3];
    for a in lines(&out) {
        for i in a {
            counts[i] += 1;
        }
    }
    for (i, l) in [0.5f64, 1.0, 3.0].into_iter().enumerate() {
        let f = counts[i] as f64 / n as f64;
        assert!((f - l / (1.0 + l)).abs() <= 0.01, "element {i}: {f}");
    }
}

#[test]
fn connected_spanning_samples_are_spanning() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.txt", "4 6\n0 1 0.3\n0 2 0.6\n0 3 0.2\n1 2 0.5\n1 3 0.4\n2 3 0.7\n");
    let out = ok(&["sample", "--model", "connected-spanning", "--graph", s(&g), "--num-samples", "50", "--seed", "1"]);
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for alive in lines(&out) {
        let mut comp = [0usize, 1, 2, 3];
        for &e in &alive {
            let (a, b) = (comp[edges[e].0], comp[edges[e].1]);
            for c in comp.iter_mut() {
                if *c == b {
                    *c = a;
                }
            }
        }
        assert!(comp.iter().all(|&c| c == comp[0]), "{alive:?}");
    }
}

#[test]
fn single_edge_reliability() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "edge.txt", "2 1\n0 1 0.3\n");
    let est: Value = serde_json::from_str(&ok(&["estimate-reliability", "--graph", s(&g), "--seed", "5"])).unwrap();
    assert_eq!(est["z_hat"].as_f64().unwrap(), 0.7);
    let exact: Value = serde_json::from_str(&ok(&["exact", "reliability", "--graph", s(&g)])).unwrap();
    assert!((exact["z_rel"].as_f64().unwrap() - 0.7).abs() < 1e-15);
}

#[test]
fn exact_distribution_of_the_cographic_triangle() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "co.json", r#"{"variant":"cographic","edges":[[0,1],[1,2],[2,0]]}"#);
    let v: Value = serde_json::from_str(&ok(&["exact", "mu", "--matroid", s(&m)])).unwrap();
    let atoms = v["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 4);
    for a in atoms {
        assert!((a["prob"].as_f64().unwrap() - 0.25).abs() < 1e-15);
        assert!(a["set"].as_array().unwrap().len() <= 1);
    }
}

#[test]
fn exact_kernels_are_stationary() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "u42.json", r#"{"variant":"uniform","n":4,"k":2}"#);
    let lam = write(&dir, "lam.txt", "1\n2\n3\n4\n");
    for extra in [&["--chain", "polarized"][..], &["--chain", "random-cluster", "--q", "0.5"]] {
        let mut args = vec!["exact", "kernel", "--matroid", s(&m), "--lambda", s(&lam)];
        args.extend_from_slice(extra);
        let v: Value = serde_json::from_str(&ok(&args)).unwrap();
        assert!(v["residual"].as_f64().unwrap() <= 1e-10);
        assert!(v["target_error"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn output_does_not_depend_on_jobs() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "tri.txt", TRIANGLE);
    for model in [&["--model", "independent"][..], &["--model", "connected-spanning"], &["--model", "random-cluster", "--q", "0.3"]] {
        let outputs: Vec<String> = ["1", "2", "3"]
            .iter()
            .map(|j| {
                let mut args = vec!["sample", "--graph", s(&g), "--num-samples", "40", "--seed", "9", "--jobs", j];
                args.extend_from_slice(model);
                ok(&args)
            })
            .collect();
        assert_eq!(outputs[0], outputs[1]);
        assert_eq!(outputs[0], outputs[2]);
    }
    let a = ok(&["estimate-reliability", "--graph", s(&g), "--c0", "0.5", "--jobs", "1"]);
    let b = ok(&["estimate-reliability", "--graph", s(&g), "--c0", "0.5", "--jobs", "2"]);
    assert_eq!(a, b);
}

#[test]
fn manifest_replays_the_run() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "tri.txt", TRIANGLE);
    let out1 = dir.path().join("a.ndjson");
    let stats = dir.path().join("a.json");
    ok(&[
        "sample", "--model", "random-cluster", "--q", "0.25", "--graph", s(&g), "--num-samples", "30", "--seed", "77",
        "--out", s(&out1), "--stats", s(&stats),
    ]);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(m["command"], "sample");
    assert_eq!(m["input_digest"].as_str().unwrap().len(), 64);
    assert!(m["wall_clock_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(m["stats"]["steps"].as_u64().unwrap(), 30 * m["steps_per_sample"].as_u64().unwrap());
    let c = &m["config"];
    let out2 = dir.path().join("b.ndjson");
    let q = c["q"].as_f64().unwrap().to_string();
    let n = c["num_samples"].as_u64().unwrap().to_string();
    let seed = c["seed"].as_u64().unwrap().to_string();
    let eps = c["eps"].as_f64().unwrap().to_string();
    ok(&[
        "sample", "--model", c["model"].as_str().unwrap(), "--q", &q, "--graph", c["source"]["graph"].as_str().unwrap(),
        "--num-samples", &n, "--seed", &seed, "--eps", &eps, "--out", s(&out2),
    ]);
    assert_eq!(std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "tri.txt", TRIANGLE);
    let bad = write(&dir, "bad.txt", "3 2\n0 1 0.5\n1 2 1.5\n");
    let big: String = std::iter::once("26 25\n".to_string()).chain((0..25).map(|i| format!("{i} {} 0.5\n", i + 1))).collect();
    let big = write(&dir, "big.txt", &big);
    let missing = dir.path().join("nope.txt");
    assert_eq!(code(&["estimate-reliability", "--graph", s(&bad)]), 2);
    assert_eq!(code(&["sample", "--model", "random-cluster", "--graph", s(&g)]), 2, "missing --q");
    assert_eq!(code(&["sample", "--model", "independent", "--graph", s(&g), "--eps", "0"]), 2);
    assert_eq!(code(&["sample", "--model", "independent", "--graph", s(&g), "--jobs", "0"]), 2);
    assert_eq!(code(&["estimate-reliability", "--graph", s(&missing)]), 1);
    assert_eq!(code(&["exact", "reliability", "--graph", s(&big)]), 3);
    assert_eq!(code(&["exact", "mu", "--graph", s(&big)]), 3);
    let out = run(&["estimate-reliability", "--graph", s(&bad)]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.txt:3"));
}

#[test]
fn malformed_inputs_never_crash() {
    let dir = TempDir::new().unwrap();
    let graphs = [
        "", "x", "2", "2 1", "2 1\n0 1", "2 1\n0 5 0.5\n", "2 1\n0 1 nan\n", "2 18446744073709551615\n0 1 0.5\n",
        "1000000000000 1\n0 1 0.5\n", "3 1\n0 1 0.5\n", "2 2\n0 1 0.5\n", "-1 0\n",
    ];
    for (i, text) in graphs.iter().enumerate() {
        let g = write(&dir, &format!("g{i}.txt"), text);
        for args in [
            vec!["estimate-reliability", "--graph", s(&g)],
            vec!["sample", "--model", "connected-spanning", "--graph", s(&g)],
            vec!["exact", "reliability", "--graph", s(&g)],
        ] {
            let c = code(&args);
            assert!(c == 2 || c == 3, "{text:?} {args:?}: exit {c}");
        }
    }
    let matroids = [
        "{}", "[", r#"{"variant":"uniform","n":2,"k":3}"#, r#"{"variant":"partition","blocks":[[0],[0]],"caps":[1,1]}"#,
        r#"{"variant":"graphic","vertices":1000000000000,"edges":[[0,1]]}"#, r#"{"variant":"explicit","independent_sets":[[0,1]]}"#,
    ];
    for (i, text) in matroids.iter().enumerate() {
        let m = write(&dir, &format!("m{i}.json"), text);
        let c = code(&["sample", "--model", "independent", "--matroid", s(&m)]);
        assert_eq!(c, 2, "{text}");
    }
    let m = write(&dir, "ok.json", r#"{"variant":"uniform","n":3,"k":1}"#);
    for lam in ["0", "-1", "inf", "1\n2\n"] {
        let l = write(&dir, "lam.txt", lam);
        assert_eq!(code(&["sample", "--model", "independent", "--matroid", s(&m), "--lambda", s(&l)]), 2, "{lam:?}");
    }
}

#[test]
fn bench_writes_csv() {
    let out = ok(&[
        "bench", "--families", "path,grid", "--sizes", "100,400", "--backends", "hdt,naive", "--steps", "200",
        "--warmup", "100",
    ]);
    let mut rows = out.lines();
    let header: Vec<&str> = rows.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    let (steps, proposals) = (col("steps"), col("proposals"));
    let body: Vec<Vec<&str>> = rows.map(|r| r.split(',').collect()).collect();
    assert_eq!(body.len(), 8);
    for r in body {
        assert_eq!(r[steps], "200");
        assert!(r[proposals].parse::<u64>().unwrap() >= 200);
    }
}
