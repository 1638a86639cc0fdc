use std::collections::{BTreeMap, VecDeque};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mgraph::genmodel::{self, ModelKind, ModelSpec};
use mgraph::graph::{load_edge_list, write_edge_list};
use mgraph::oracle::{build_labels, label_stats};
use mgraph::{theory, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

fn mgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgraph")).args(args).env_remove("MGRAPH_THREADS").output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = mgraph(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn usage_error(args: &[&str]) -> String {
    let out = mgraph(args);
    assert_eq!(out.status.code(), Some(2), "{args:?}");
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn p4(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("p4.txt");
    std::fs::write(&path, "0 1\n1 2\n2 3\n").unwrap();
    path
}

fn generated(dir: &TempDir, kind: &str, n: usize, beta: f64, seed: u64) -> PathBuf {
    let path = dir.path().join(format!("{kind}-{n}-{beta}-{seed}.txt"));
    let (n, beta, seed) = (n.to_string(), beta.to_string(), seed.to_string());
    ok_json(&["generate", "--model", kind, "--n", &n, "--beta", &beta, "--seed", &seed, "--out", p(&path)]);
    path
}

/// FNV-1a, for freezing file contents.
fn fnv(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn bfs(g: &Graph, s: u32) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    let mut q = VecDeque::from([s]);
    dist[s as usize] = 0;
    while let Some(v) = q.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

fn tau(g: &Graph, s: u32, k: u64) -> Option<u32> {
    let mut levels = vec![0u64; g.n()];
    for d in bfs(g, s).into_iter().filter(|&d| d != u32::MAX) {
        levels[d as usize] += 1;
    }
    levels.iter().position(|&c| c > k).map(|l| l as u32)
}

#[test]
fn generate_writes_graph_and_sidecar() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let args = |out: &Path| {
        ["generate", "--model", "cm", "--n", "1000", "--beta", "2.5", "--seed", "1", "--out", out.to_str().unwrap()]
            .map(String::from)
    };
    let report = ok_json(&args(&a).each_ref().map(String::as_str));
    ok_json(&args(&b).each_ref().map(String::as_str));
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());

    // Golden: the library's own writer on the same spec, plus frozen size and hash.
    let gen = genmodel::generate(&ModelSpec::new(ModelKind::Cm, 1000, 2.5, 1)).unwrap();
    let mut want = Vec::new();
    write_edge_list(&gen.graph, &mut want).unwrap();
    assert_eq!(bytes, want);
    assert_eq!((gen.graph.n(), gen.graph.m()), (885, 1258));
    assert_eq!(fnv(&bytes), 0x6850_0643_7029_1ab0);

    let sidecar: Value = serde_json::from_slice(&std::fs::read(dir.path().join("a.txt.json")).unwrap()).unwrap();
    assert_eq!(sidecar["giant"]["n"], 885);
    assert_eq!(sidecar["giant"]["m"], 1258);
    assert_eq!(sidecar["spec"]["kind"], "cm");
    assert_eq!(sidecar["spec"]["weight_mode"], "deterministic-quantile");
    let hist: u64 = sidecar["degree_histogram"].as_array().unwrap().iter().map(|e| e[1].as_u64().unwrap()).sum();
    assert_eq!(hist, 885);
    assert_eq!(report["giant"], sidecar["giant"]);
}

#[test]
fn generate_rejects_bad_beta_and_paths() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.txt");
    let err = usage_error(&["generate", "--model", "cm", "--n", "1000", "--beta", "1.0", "--out", p(&out)]);
    assert!(err.contains("degree distribution undefined"), "{err}");
    let bad = dir.path().join("missing/dir/g.txt");
    usage_error(&["generate", "--model", "cm", "--n", "100", "--beta", "2.5", "--out", p(&bad)]);
    usage_error(&["generate", "--model", "er", "--n", "100", "--beta", "2.5", "--out", p(&out)]);
}

#[test]
fn analyze_single_algorithm_on_path() {
    let dir = TempDir::new().unwrap();
    let r = ok_json(&["analyze", "--input", p(&p4(&dir)), "--algo", "ifub"]);
    assert_eq!(r["results"][0]["value"], 3);
    assert_eq!(r["results"][0]["measure"], "diameter");
    assert_eq!(r["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["config"]["subcommand"], "analyze");
    let err = usage_error(&["analyze", "--input", p(&p4(&dir)), "--algo", "nope"]);
    assert!(err.contains("unknown algorithm"), "{err}");
}

#[test]
fn analyze_all_exact_algorithms_agree() {
    let dir = TempDir::new().unwrap();
    let input = generated(&dir, "cm", 2000, 2.5, 3);
    let prefix = dir.path().join("run");
    let r = ok_json(&["analyze", "--input", p(&input), "--algo", "all", "--out-prefix", p(&prefix)]);
    assert_eq!(r["exact_agree"], true);
    let (g, _) = load_edge_list(&input).unwrap();
    let d = (0..g.n() as u32).map(|s| bfs(&g, s).into_iter().max().unwrap()).max().unwrap();
    for row in r["table"].as_array().unwrap() {
        if row["measure"] == "diameter" {
            let v = row["value"].as_u64().unwrap();
            if row["exact"] == true {
                assert_eq!(v, d as u64, "{row}");
            } else {
                assert!(v <= d as u64, "{row}");
            }
        }
    }
    let csv = std::fs::read_to_string(dir.path().join("run.analyze.csv")).unwrap();
    assert_eq!(csv.lines().count(), r["table"].as_array().unwrap().len() + 1);
}

#[test]
fn verify_touch_histogram_csv_matches_reference() {
    let dir = TempDir::new().unwrap();
    let input = generated(&dir, "cm", 3000, 2.5, 1);
    let prefix = dir.path().join("touch");
    let r = ok_json(&[
        "verify", "--input", p(&input), "--property", "2", "--x", "0.6", "--y", "0.6", "--pairs", "2000", "--seed", "4",
        "--out-prefix", p(&prefix),
    ]);
    let (g, _) = load_edge_list(&input).unwrap();
    let k = (g.n() as f64).powf(0.6).ceil() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut hist: BTreeMap<i64, u64> = BTreeMap::new();
    for _ in 0..2000 {
        let s = rng.random_range(0..g.n() as u32);
        let t = rng.random_range(0..g.n() as u32);
        if let (Some(a), Some(b)) = (tau(&g, s, k), tau(&g, t, k)) {
            *hist.entry(a as i64 + b as i64 - bfs(&g, s)[t as usize] as i64).or_default() += 1;
        }
    }
    let mut want = String::from("slack,pairs\n");
    for (slack, c) in &hist {
        want.push_str(&format!("{slack},{c}\n"));
    }
    assert_eq!(std::fs::read_to_string(dir.path().join("touch.property2.csv")).unwrap(), want);
    assert_eq!(r["report"]["property_id"], 2);
}

#[test]
fn verify_degree_reports_reference_slope() {
    let dir = TempDir::new().unwrap();
    let input = generated(&dir, "cl", 20_000, 2.5, 2);
    let r = ok_json(&["verify", "--input", p(&input), "--property", "4", "--beta", "2.5"]);
    let (g, _) = load_edge_list(&input).unwrap();
    let deg = g.degrees();
    let max = *deg.iter().max().unwrap() as f64;
    let mut ds: Vec<f64> = (0..).map(|i| (4.0 * 2f64.powf(i as f64 / 4.0)).round()).take_while(|&d| d <= max / 4.0).collect();
    ds.dedup();
    let pts: Vec<(f64, f64)> = ds
        .iter()
        .map(|&d| (d, deg.iter().filter(|&&x| x as f64 > d).count() as f64))
        .filter(|p| p.1 > 0.0)
        .map(|(d, c)| (d.ln(), c.ln()))
        .collect();
    let k = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / k, pts.iter().map(|p| p.1).sum::<f64>() / k);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let got = r["report"]["fit"]["slope"].as_f64().unwrap();
    assert!((got - slope).abs() < 1e-9, "{got} vs {slope}");
    assert_eq!(r["report"]["pass"], (slope + 1.5).abs() <= 0.3);
    usage_error(&["verify", "--input", p(&input), "--property", "4"]);
    usage_error(&["verify", "--input", p(&input), "--property", "5"]);
}

#[test]
fn predict_regimes() {
    let r = ok_json(&["predict", "--beta", "1.5", "--n", "100000"]);
    assert_eq!(r["prediction"]["d_avg_tilde"], 3.0);
    assert_eq!(r["prediction"]["c_exponent"], -1.0);
    let err = usage_error(&["predict", "--beta", "2.0"]);
    assert!(err.contains("open case"), "{err}");
    let r = ok_json(&["predict", "--beta", "3.5", "--n", "100000"]);
    let want = theory::predict_for_model(3.5, 100_000).unwrap();
    assert_eq!(r["prediction"]["m1_mu"].as_f64(), want.m1_mu);
    assert_eq!(r["prediction"]["eta1"].as_f64(), want.eta1);
}

#[test]
fn oracle_build_query_stats() {
    let dir = TempDir::new().unwrap();
    let labels = dir.path().join("p4.pll");
    ok_json(&["oracle", "build", "--input", p(&p4(&dir)), "--labels", p(&labels)]);
    let r = ok_json(&["oracle", "query", "--labels", p(&labels), "0", "3", "1", "1"]);
    assert_eq!(r["queries"][0]["distance"], 3);
    assert_eq!(r["queries"][1]["distance"], 0);
    usage_error(&["oracle", "query", "--labels", p(&dir.path().join("missing.pll")), "0", "3"]);
    usage_error(&["oracle", "query", "--labels", p(&labels), "0", "9"]);

    let stats = ok_json(&["oracle", "stats", "--labels", p(&labels)])["stats"].clone();
    let (g, _) = load_edge_list(p4(&dir)).unwrap();
    assert_eq!(stats, serde_json::to_value(label_stats(&build_labels(&g, None).unwrap())).unwrap());
    let keys: Vec<&str> = stats.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["avg_label_size", "bytes", "max_label_size", "n", "total_entries"]);
}

#[test]
fn replay_reproduces_reports() {
    let dir = TempDir::new().unwrap();
    let input = generated(&dir, "nr", 2000, 2.5, 5);
    let runs: [&[&str]; 4] = [
        &["analyze", "--input", p(&input), "--algo", "all", "--seed", "2", "--no-timing"],
        &["verify", "--input", p(&input), "--property", "3", "--targets", "500", "--seed", "2"],
        &["stats", "--input", p(&input), "--distances", "--tau-x", "0.4"],
        &["predict", "--beta", "2.5", "--n", "5000"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let out = mgraph(args);
        assert!(out.status.success(), "{args:?}");
        let report = dir.path().join(format!("report{i}.json"));
        std::fs::write(&report, &out.stdout).unwrap();
        let again = mgraph(&["replay", p(&report)]);
        assert!(again.status.success(), "{args:?}");
        assert_eq!(out.stdout, again.stdout, "{args:?}");
    }
}

#[test]
fn thread_setting_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_mgraph"))
        .args(["predict", "--beta", "2.5"])
        .env("MGRAPH_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(mgraph(&["--threads", "2", "predict", "--beta", "2.5"]).status.code(), Some(0));
}
