use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

struct Bundle {
    _dir: tempfile::TempDir,
    root: PathBuf,
    space: PathBuf,
}

fn lsaw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsaw")).args(args).output().unwrap()
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(o: Output) -> Output {
    assert!(o.status.success(), "status {:?}\n{}", o.status, stderr(&o));
    o
}

/// Example bundle plus a space built from its corpus, shared by all tests.
fn bundle() -> &'static Bundle {
    static B: OnceLock<Bundle> = OnceLock::new();
    B.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().join("ex");
        ok(lsaw(&["synth", "--seed", "2", "--out", &s(&root)]));
        let out = dir.path().join("build");
        ok(lsaw(&["build", "--manifest", &s(&root.join("corpus/manifest.tsv")), "--k", "40", "--out", &s(&out)]));
        Bundle { space: out.join("space.lsa"), root, _dir: dir }
    })
}

fn first_vocab_word() -> String {
    let vocab = std::fs::read_to_string(bundle().root.join("vocab.tsv")).unwrap();
    vocab.lines().nth(1).unwrap().split('\t').next().unwrap().to_string()
}

#[test]
fn build_writes_space_report_and_manifest() {
    let b = bundle();
    let out = b.space.parent().unwrap();
    for f in ["space.lsa", "corpus.tsv", "build_report.json", "build_report.txt", "run_manifest.json"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("run_manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "build");
    assert_eq!(m["params"]["k"], "40");
    assert!(m["inputs"].as_array().unwrap().len() > 2);
    let outputs: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|o| o["path"].as_str().unwrap()).collect();
    assert!(outputs.contains(&"space.lsa"));
}

#[test]
fn self_cosine_and_neighbor_rows() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let w = first_vocab_word();
    let o = ok(lsaw(&["query", "--space", &s(&b.space), "--out", &s(dir.path()), "cosine", &w, &w]));
    assert_eq!(stdout(&o).trim(), format!("{w}\t{w}\t1.000000"));
    let o = ok(lsaw(&["query", "--space", &s(&b.space), "--out", &s(dir.path()), "neighbors", &w, "--n", "7"]));
    assert_eq!(stdout(&o).lines().count(), 7);
    let o = ok(lsaw(&["query", "--space", &s(&b.space), "--out", &s(dir.path()), "--format", "json", "neighbors", &w, "--n", "3"]));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 3);
}

#[test]
fn unknown_word_exits_with_data_error() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let o = lsaw(&["query", "--space", &s(&b.space), "--out", &s(dir.path()), "cosine", "zzzzqx", "man"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("zzzzqx"));
}

#[test]
fn missing_manifest_exits_with_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nowhere.tsv");
    let o = lsaw(&["build", "--manifest", &s(&missing), "--out", &s(&dir.path().join("o"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nowhere.tsv"));
}

#[test]
fn rank_above_matrix_size_is_an_input_error() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let o = lsaw(&["build", "--manifest", &s(&b.root.join("gardener/manifest.tsv")), "--k", "5000", "--out", &s(dir.path())]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn eval_vocab_reports_four_classes() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let o = ok(lsaw(&["eval", "--space", &s(&b.space), "--out", &s(dir.path()), "vocab", "--dataset", &s(&b.root.join("vocab.tsv"))]));
    let percent_rows = stdout(&o).lines().filter(|l| l.trim_end().ends_with('%')).count();
    assert_eq!(percent_rows, 4);
    assert!(dir.path().join("eval_vocab.json").is_file());
}

#[test]
fn eval_recall_hashes_referenced_texts() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    ok(lsaw(&["eval", "--space", &s(&b.space), "--out", &s(dir.path()), "recall", "--dataset", &s(&b.root.join("recall.tsv"))]));
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("run_manifest.json")).unwrap()).unwrap();
    let inputs = m["inputs"].as_array().unwrap();
    assert!(inputs.iter().any(|i| i["path"].as_str().unwrap().ends_with("text0.txt")));
}

#[test]
fn eval_with_no_usable_items_exits_with_data_error() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let dataset = dir.path().join("oov.tsv");
    std::fs::write(&dataset, "qqqa\tcorrect\tqqqb\nqqqa\tclose\tqqqc\nqqqa\tdistant\tqqqd\nqqqa\tunrelated\tqqqe\n").unwrap();
    let o = lsaw(&["eval", "--space", &s(&b.space), "--out", &s(&dir.path().join("o")), "vocab", "--dataset", &s(&dataset)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn assoc_filter_is_validated() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let norms = s(&b.root.join("norms.tsv"));
    let o = ok(lsaw(&["eval", "--space", &s(&b.space), "--out", &s(dir.path()), "assoc", "--dataset", &norms, "--filter", "weight:0.5"]));
    assert!(stdout(&o).contains("items: 6 of 12"));
    let o = lsaw(&["eval", "--space", &s(&b.space), "--out", &s(dir.path()), "assoc", "--dataset", &norms, "--filter", "size:2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stratify_orders_levels_by_readability() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let o = ok(lsaw(&[
        "stratify",
        "--manifest",
        &s(&b.root.join("corpus/manifest.tsv")),
        "--words",
        &s(&b.root.join("corpus/words.txt")),
        "--out",
        &s(dir.path()),
    ]));
    assert!(stdout(&o).contains("readability increases with level: true"));
    assert!(dir.path().join("corpus.tsv").is_file());
}

#[test]
fn trace_on_example_corpus_telescopes() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let o = ok(lsaw(&[
        "trace",
        "--manifest",
        &s(&b.root.join("trace/manifest.tsv")),
        "--pairs",
        &s(&b.root.join("pairs.tsv")),
        "--start",
        "50",
        "--k",
        "20",
        "--out",
        &s(dir.path()),
    ]));
    assert!(stdout(&o).contains("telescoping check: PASS"));
    let tsv = std::fs::read_to_string(dir.path().join("trajectory.tsv")).unwrap();
    assert_eq!(tsv.lines().count(), 1 + 5 * 151);
    let ledgers: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("ledger.json")).unwrap()).unwrap();
    assert_eq!(ledgers.as_array().unwrap().len(), 5);
}

#[test]
fn trace_requires_start() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let o = lsaw(&["trace", "--manifest", &s(&b.root.join("trace/manifest.tsv")), "--pairs", &s(&b.root.join("pairs.tsv")), "--out", &s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn comprehend_gardener_text() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let space_dir = dir.path().join("g");
    ok(lsaw(&["build", "--manifest", &s(&b.root.join("gardener/manifest.tsv")), "--k", "8", "--min-count", "1", "--out", &s(&space_dir)]));
    let out = dir.path().join("c");
    let o = ok(lsaw(&[
        "comprehend",
        "--space",
        &s(&space_dir.join("space.lsa")),
        "--propositions",
        &s(&b.root.join("propositions.txt")),
        "--out",
        &s(&out),
    ]));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("Cycle ")).count(), 3);
    let trace: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("comprehension.json")).unwrap()).unwrap();
    assert_eq!(trace["cycles"].as_array().unwrap().len(), 3);

    let o = lsaw(&["comprehend", "--space", &s(&space_dir.join("space.lsa")), "--propositions", &s(&b.root.join("propositions.txt")), "--wm", "fixed", "--out", &s(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_values_yield_to_flags() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(&config, "# example\nk = 6\nmin-count = 1\nunused_key = 3\n").unwrap();
    let manifest = s(&b.root.join("gardener/manifest.tsv"));
    let read_params = |out: &Path| -> serde_json::Value {
        let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("run_manifest.json")).unwrap()).unwrap();
        m["params"].clone()
    };
    let a = dir.path().join("a");
    let o = ok(lsaw(&["build", "--manifest", &manifest, "--config", &s(&config), "--out", &s(&a)]));
    assert!(stderr(&o).contains("unused_key"));
    assert_eq!(read_params(&a)["k"], "6");
    assert_eq!(read_params(&a)["min_count"], "1");
    let b2 = dir.path().join("b");
    ok(lsaw(&["build", "--manifest", &manifest, "--config", &s(&config), "--k", "4", "--out", &s(&b2)]));
    assert_eq!(read_params(&b2)["k"], "4");
}

#[test]
fn repeated_builds_hash_identically() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let manifest = s(&b.root.join("gardener/manifest.tsv"));
    let mut spaces = Vec::new();
    for run in ["x", "y"] {
        let out = dir.path().join(run);
        ok(lsaw(&["build", "--manifest", &manifest, "--k", "8", "--min-count", "1", "--seed", "9", "--out", &s(&out)]));
        spaces.push(std::fs::read(out.join("space.lsa")).unwrap());
    }
    assert_eq!(spaces[0], spaces[1]);
}

#[test]
fn foldin_reports_coverage() {
    let b = bundle();
    let dir = tempfile::tempdir().unwrap();
    let o = ok(lsaw(&["query", "--space", &s(&b.space), "--out", &s(dir.path()), "--format", "json", "foldin", &s(&b.root.join("recall/text0.txt"))]));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vector"].as_array().unwrap().len(), 40);
    assert!(v["coverage"].as_f64().unwrap() > 0.0);
}
