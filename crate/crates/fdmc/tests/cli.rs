//! End-to-end checks of the `fdmc` binary: exit codes, file round trips,
//! and deterministic outputs.

use std::path::Path;
use std::process::{Command, Output};

fn fdmc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdmc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_inst_a(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("inst_a.txt");
    std::fs::write(&path, "4 2 2 1 2\n1 2 1 2\n0 0\n0 1\n1 1\n1 1\n").unwrap();
    path
}

#[test]
fn solve_writes_and_reverifies_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    write_inst_a(dir.path());
    for algo in ["auto", "bruteforce", "large-fairlet", "k-plus-r", "treewidth", "approx"] {
        let out = fdmc(
            &["solve", "--algo", algo, "--in", "inst_a.txt", "--out", "w.json"],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "algo {algo}: {out:?}");
        let report: serde_json::Value =
            serde_json::from_slice(&out.stdout).expect("report is JSON");
        assert_eq!(report["status"], "YES");
        assert_eq!(report["edits"], 1);

        let verify = fdmc(&["verify", "--in", "inst_a.txt", "--solution", "w.json"], dir.path());
        assert_eq!(verify.status.code(), Some(0));
    }
}

#[test]
fn zero_budget_answers_no() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("no.txt"), "4 2 2 0 2\n1 2 1 2\n0 0\n0 1\n1 1\n1 1\n").unwrap();
    let out = fdmc(&["solve", "--algo", "auto", "--in", "no.txt", "--out", "w.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("w.json").exists());
}

#[test]
fn invalid_input_and_inapplicable_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.txt"), "4 2 2 1\n").unwrap();
    let out =
        fdmc(&["solve", "--algo", "auto", "--in", "broken.txt", "--out", "w.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // domain 3 entries cannot go to the treewidth solver
    std::fs::write(dir.path().join("ternary.txt"), "2 1 3 1 2\n1 2\n2\n0\n").unwrap();
    let out = fdmc(
        &["solve", "--algo", "treewidth", "--in", "ternary.txt", "--out", "w.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));

    // c̃ = 2 is not > k = 2
    std::fs::write(dir.path().join("cap.txt"), "4 2 2 2 2\n1 2 1 2\n0 0\n0 1\n1 1\n1 1\n").unwrap();
    let out = fdmc(
        &["solve", "--algo", "large-fairlet", "--in", "cap.txt", "--out", "w.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));

    // a starved cap makes the approximate search report unresolved
    std::fs::write(
        dir.path().join("hard.txt"),
        "4 2 2 2 2\n1 2 2 1\n0 0\n0 1\n1 0\n1 1\n",
    )
    .unwrap();
    let out = fdmc(
        &["solve", "--algo", "approx", "--in", "hard.txt", "--out", "w.json", "--cap", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4), "{out:?}");
}

#[test]
fn verify_detects_violations() {
    let dir = tempfile::tempdir().unwrap();
    write_inst_a(dir.path());
    std::fs::write(
        dir.path().join("bad.json"),
        serde_json::json!({
            "edited_rows": [[0,0],[0,1],[1,1],[1,1]],
            "cluster_of": [0,1,2,2],
            "edit_count": 0,
            "distinct_types": 3
        })
        .to_string(),
    )
    .unwrap();
    let out = fdmc(&["verify", "--in", "inst_a.txt", "--solution", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("violation"));
}

#[test]
fn external_tree_decompositions_are_honored_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    write_inst_a(dir.path());
    // rows 2, 3, 4 share 1-columns (a triangle); row 1 is isolated
    std::fs::write(dir.path().join("good.td"), "s td 2 3 4\nb 1 1\nb 2 2 3 4\n1 2\n").unwrap();
    let out = fdmc(
        &["solve", "--algo", "treewidth", "--in", "inst_a.txt", "--out", "w.json", "--td", "good.td"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    std::fs::write(dir.path().join("bad.td"), "s td 1 2 4\nb 1 1 2\n").unwrap();
    let out = fdmc(
        &["solve", "--algo", "treewidth", "--in", "inst_a.txt", "--out", "w.json", "--td", "bad.td"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generators_are_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    for (name, seed) in [("a.json", "5"), ("b.json", "5"), ("c.json", "6")] {
        let out = fdmc(
            &[
                "gen", "random", "--m", "6", "--n", "3", "--color-counts", "3,3", "--k", "2",
                "--r", "2", "--seed", seed, "--out", name,
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    let c = std::fs::read(dir.path().join("c.json")).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn planted_generation_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = fdmc(
        &[
            "gen",
            "planted",
            "--n",
            "3",
            "--cluster-fairlets",
            "2,1",
            "--fairlet-profile",
            "1,1",
            "--noise",
            "2",
            "--seed",
            "9",
            "--out",
            "planted.json",
            "--solution-out",
            "sol.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let verify = fdmc(&["verify", "--in", "planted.json", "--solution", "sol.json"], dir.path());
    assert_eq!(verify.status.code(), Some(0), "{verify:?}");
}

#[test]
fn bench_emits_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite");
    std::fs::create_dir(&suite).unwrap();
    write_inst_a(&suite);
    std::fs::write(suite.join("tiny.txt"), "2 1 2 1 1\n1 2\n0\n1\n").unwrap();

    for csv in ["one.csv", "two.csv"] {
        let out = fdmc(
            &[
                "bench",
                "--suite",
                "suite",
                "--algos",
                "bruteforce,k-plus-r,approx",
                "--csv",
                csv,
                "--deterministic",
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    }
    let one = std::fs::read(dir.path().join("one.csv")).unwrap();
    let two = std::fs::read(dir.path().join("two.csv")).unwrap();
    assert_eq!(one, two, "deterministic mode must be byte-identical");

    let text = String::from_utf8(one).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance,algo,status,edits,opt,ratio,seconds,counters"
    );
    // 2 instances x 3 algorithms, all exact solvers agree on the edits column
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    let mut exact_edits: std::collections::BTreeMap<&str, Vec<&str>> = Default::default();
    for row in &rows {
        assert!(row.contains(",YES,"), "row: {row}");
        let fields: Vec<&str> = row.split(',').collect();
        let (instance, algo, edits) = (fields[0], fields[1], fields[3]);
        if algo != "approx" {
            exact_edits.entry(instance).or_default().push(edits);
        }
    }
    for (instance, edits) in exact_edits {
        assert!(
            edits.windows(2).all(|w| w[0] == w[1]),
            "exact solvers disagree on {instance}: {edits:?}"
        );
    }
}

#[test]
fn empty_suite_yields_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("suite")).unwrap();
    let out = fdmc(
        &["bench", "--suite", "suite", "--algos", "bruteforce", "--csv", "empty.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("empty.csv")).unwrap();
    assert_eq!(text, "instance,algo,status,edits,opt,ratio,seconds,counters\n");
}

#[test]
fn clique_reduction_streams_to_disk_for_a_tiny_graph() {
    // Full q = 4 output is gigabytes; check the plumbing by interrupting at
    // the file level instead: generate the graph file, run with a clique
    // audit, and only require the command to start streaming successfully.
    let dir = tempfile::tempdir().unwrap();
    let graph = "colors 1 2 3 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
    std::fs::write(dir.path().join("g.txt"), graph).unwrap();
    let out = fdmc(
        &[
            "gen",
            "clique-reduction",
            "--graph",
            "g.txt",
            "--out",
            "huge.txt",
            "--clique",
            "1,2,3,4",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let log = String::from_utf8_lossy(&out.stderr);
    assert!(log.contains("clique witness verified at exactly 2664 edits"), "{log}");
    let written = std::fs::metadata(dir.path().join("huge.txt")).unwrap().len();
    assert!(written > 1_000_000, "streamed output present ({written} bytes)");
}
