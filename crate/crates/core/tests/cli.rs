mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use common::{fixture, stub_scorer_bin};

fn pairprobe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairprobe"))
        .args(args)
        .output()
        .expect("run pairprobe")
}

fn report(dir: &Path) -> Value {
    serde_json::from_slice(&fs::read(dir.join("report.json")).unwrap()).unwrap()
}

fn metric(report: &Value, name: &str) -> f64 {
    report["metrics"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["name"] == name)
        .unwrap_or_else(|| panic!("no metric {name}"))["value"]
        .as_f64()
        .unwrap()
}

fn tiny() -> String {
    fixture("tiny.tsv").display().to_string()
}

#[test]
fn bow_probe_on_tiny_fixture() {
    let out = tempfile::tempdir().unwrap();
    let dir = out.path().to_str().unwrap();
    let o = pairprobe(&["probe", "--data", &tiny(), "--format", "canonical", "--out", dir]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let r = report(out.path());
    // tp: t1 (1.0), fn: t2 (1/3), fp: t3 (3/sqrt(15)), tn: t4 (0)
    assert_eq!(r["classification"]["tp"], 1);
    assert_eq!(r["classification"]["fn"], 1);
    assert_eq!(r["classification"]["fp"], 1);
    assert_eq!(r["classification"]["tn"], 1);
    assert_eq!(metric(&r, "accuracy"), 0.5);
    assert_eq!(metric(&r, "f1"), 0.5);
    assert_eq!(metric(&r, "reverse_disagreement"), 0.0);
    assert_eq!(metric(&r, "identical_error"), 0.0);
    assert_eq!(metric(&r, "paraphrase_gt_identical"), 0.0);

    let digest = r["config_digest"].as_str().unwrap();
    let table = fs::read_to_string(out.path().join("tables/classification.csv")).unwrap();
    assert_eq!(
        table,
        format!("# config_digest: {digest}\ndataset,model,acc,f1,n\ntiny,bow,50.00,50.00,4\n")
    );
    let asym = fs::read_to_string(out.path().join("tables/asymmetry.csv")).unwrap();
    assert!(asym.ends_with("tiny,bow,0.00,0.00,4,7\n"), "{asym}");
    assert!(out.path().join("tables/rank_violation.csv").exists());

    let hist = fs::read_to_string(out.path().join("hist/score.csv")).unwrap();
    let identical: Vec<&str> = hist
        .lines()
        .filter(|l| l.starts_with("identical,") && !l.ends_with(",0"))
        .collect();
    assert_eq!(identical, ["identical,0.98,1,7"]);
    let diff = fs::read_to_string(out.path().join("hist/score_diff.csv")).unwrap();
    for line in diff.lines().skip(2) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols[3] != "0" {
            assert!(cols[1].parse::<f64>().unwrap() <= 0.0, "{line}");
        }
    }
}

#[test]
fn unit_scale_prints_raw_values() {
    let out = tempfile::tempdir().unwrap();
    let dir = out.path().to_str().unwrap();
    let o = pairprobe(&[
        "probe", "--data", &tiny(), "--format", "canonical", "--out", dir, "--scale", "unit", "--probes",
        "classification",
    ]);
    assert!(o.status.success());
    let table = fs::read_to_string(out.path().join("tables/classification.csv")).unwrap();
    assert!(table.ends_with("tiny,bow,0.5,0.5,4\n"), "{table}");
    assert!(!out.path().join("tables/asymmetry.csv").exists());
    assert!(!out.path().join("hist").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = pairprobe(&[
            "probe",
            "--data",
            fixture("qqp.tsv").to_str().unwrap(),
            "--format",
            "qqp",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for file in [
        "report.json",
        "tables/classification.csv",
        "tables/asymmetry.csv",
        "tables/rank_violation.csv",
        "hist/score.csv",
        "hist/score_diff.csv",
    ] {
        assert_eq!(
            fs::read(a.path().join(file)).unwrap(),
            fs::read(b.path().join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn external_stub_scores_flow_into_report() {
    let out = tempfile::tempdir().unwrap();
    let cmd = format!("'{}' --constant 0.75", stub_scorer_bin());
    let o = pairprobe(&[
        "probe", "--data", &tiny(), "--format", "canonical", "--out", out.path().to_str().unwrap(), "--scorer",
        "external", "--external-cmd", &cmd,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(out.path());
    assert_eq!(r["scorer"], "external");
    // everything is predicted paraphrase
    assert_eq!(r["classification"]["tp"], 2);
    assert_eq!(r["classification"]["fp"], 2);
    assert_eq!(metric(&r, "identical_error"), 0.0);
    assert_eq!(metric(&r, "paraphrase_gt_identical"), 0.0);
    let random_bin: Vec<Value> = r["histograms"]["score"][0]["counts"].as_array().unwrap().clone();
    assert_eq!(random_bin[37], 8); // 0.75 with 50 bins
}

#[test]
fn protocol_violation_exit_code() {
    let out = tempfile::tempdir().unwrap();
    let target = out.path().join("run");
    let cmd = format!("'{}' --bad-at 0", stub_scorer_bin());
    let o = pairprobe(&[
        "probe", "--data", &tiny(), "--format", "canonical", "--out", target.to_str().unwrap(), "--scorer",
        "external", "--external-cmd", &cmd,
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("protocol violation"));
    assert!(!target.exists());
}

#[test]
fn missing_file_fails_without_output() {
    let out = tempfile::tempdir().unwrap();
    let target = out.path().join("run");
    let o = pairprobe(&[
        "probe", "--data", "/nonexistent/data.tsv", "--format", "qqp", "--out", target.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!target.exists());
}

#[test]
fn config_errors_exit_2() {
    let out = tempfile::tempdir().unwrap();
    let dir = out.path().join("run");
    let dir = dir.to_str().unwrap();
    let bad_threshold = pairprobe(&["probe", "--data", &tiny(), "--format", "canonical", "--out", dir, "--threshold", "1.5"]);
    assert_eq!(bad_threshold.status.code(), Some(2));
    let no_cmd = pairprobe(&["probe", "--data", &tiny(), "--format", "canonical", "--out", dir, "--scorer", "external"]);
    assert_eq!(no_cmd.status.code(), Some(2));
    let zero_bins = pairprobe(&["hist", "--data", &tiny(), "--format", "canonical", "--out", dir, "--bins", "0"]);
    assert_eq!(zero_bins.status.code(), Some(2));
    assert!(!out.path().join("run").exists());
}

#[test]
fn unlabeled_corpus_rejects_classification() {
    let out = tempfile::tempdir().unwrap();
    let data = out.path().join("u.tsv");
    fs::write(&data, "id\ts1\ts2\tlabel\na\tx y\tx z\t-\n").unwrap();
    let args = ["--data", data.to_str().unwrap(), "--format", "canonical", "--out"];
    let target = out.path().join("run");
    let mut full = vec!["probe"];
    full.extend(args);
    full.push(target.to_str().unwrap());
    assert_eq!(pairprobe(&full).status.code(), Some(3));
    // probes that ignore gold labels still run
    full.extend(["--probes", "reverse,identical"]);
    assert!(pairprobe(&full).status.success());
}

#[test]
fn rank_and_hist_subcommands() {
    let out = tempfile::tempdir().unwrap();
    let rank = out.path().join("rank");
    let o = pairprobe(&["rank", "--data", &tiny(), "--format", "canonical", "--out", rank.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(rank.join("tables/rank_violation.csv").exists());
    assert!(!rank.join("tables/classification.csv").exists());
    let r = report(&rank);
    assert_eq!(r["rank"]["groups"], 7);
    assert_eq!(r["rank"]["excluded_self_pairs"], 2);

    let hist = out.path().join("hist");
    let o = pairprobe(&["hist", "--data", &tiny(), "--format", "canonical", "--out", hist.to_str().unwrap(), "--bins", "4"]);
    assert!(o.status.success());
    let csv = fs::read_to_string(hist.join("hist/score.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2 + 4 * 4);
    let diff = fs::read_to_string(hist.join("hist/score_diff.csv")).unwrap();
    assert_eq!(diff.lines().count(), 2 + 3 * 8);
}

#[test]
fn ingest_and_augment() {
    let out = tempfile::tempdir().unwrap();
    let ingest = out.path().join("ingest");
    let twitter = fixture("twitter.tsv");
    let o = pairprobe(&["ingest", "--data", twitter.to_str().unwrap(), "--format", "twitter", "--out", ingest.to_str().unwrap()]);
    assert!(o.status.success());
    let canonical = fs::read_to_string(ingest.join("corpus.tsv")).unwrap();
    assert_eq!(canonical.lines().count(), 6);
    let r = report(&ingest);
    assert_eq!(r["corpus"]["discarded"], 2);
    assert_eq!(r["corpus"]["skipped"], 1);

    let aug = out.path().join("aug");
    let o = pairprobe(&["augment", "--data", &tiny(), "--format", "canonical", "--out", aug.to_str().unwrap()]);
    assert!(o.status.success());
    let rev = fs::read_to_string(aug.join("augmented/reverse_augmented.tsv")).unwrap();
    assert_eq!(rev.lines().count(), 1 + 8);
    assert!(rev.contains("t3:rev\tred blue green\tred blue\t0\n"));
    let ident = fs::read_to_string(aug.join("augmented/identical_augmented.tsv")).unwrap();
    assert_eq!(ident.lines().count(), 1 + 4 + 7);
    assert!(ident.ends_with("identical:6\tz w\tz w\t1\n"));
}
