use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use snpassoc::config::Config;
use snpassoc::corpus_io::{read_jsonl, write_jsonl};
use snpassoc::models::ModelFile;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/synthetic30.jsonl")
}

fn snpassoc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snpassoc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = snpassoc(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    let f = fixture();
    assert_eq!(snpassoc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(snpassoc(&["stats", s(&f), "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(snpassoc(&["eval", s(&f)]).status.code(), Some(1));
    assert_eq!(snpassoc(&["--help"]).status.code(), Some(0));
    assert_eq!(snpassoc(&["stats", "/nonexistent.jsonl"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"id\":\"a\",\"sentences\":[]}\n{not json\n").unwrap();
    let out = snpassoc(&["stats", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn stats_counts_fixture() {
    let text = std::fs::read_to_string(fixture()).unwrap();
    let (mut sentences, mut pairs) = (0, 0);
    for line in text.lines() {
        let doc: Value = serde_json::from_str(line).unwrap();
        for sentence in doc["sentences"].as_array().unwrap() {
            sentences += 1;
            pairs += sentence["pairs"].as_array().unwrap().len();
        }
    }
    let report: Value = serde_json::from_str(&ok(&["stats", s(&fixture())])).unwrap();
    assert_eq!(report["stats"]["n_sentences"], sentences);
    assert_eq!(report["stats"]["n_candidates"], pairs);
    assert_eq!(report["provenance"]["lexicons"].as_object().unwrap().len(), 5);
    let tsv = ok(&["--format", "tsv", "stats", s(&fixture())]);
    assert!(tsv.contains(&format!("n_candidates\t{pairs}\n")));
}

#[test]
fn extract_then_eval_matches_cv_fold_zero() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n);
    let f = fixture();
    ok(&[
        "--seed",
        "7",
        "split",
        s(&f),
        "--k",
        "5",
        "--fold",
        "0",
        "--out",
        s(&d("split.jsonl")),
    ]);
    ok(&[
        "--seed",
        "7",
        "train",
        s(&d("split.jsonl")),
        "--model",
        "neutral",
        "--out",
        s(&d("neutral.json")),
    ]);
    ok(&[
        "--seed",
        "7",
        "extract",
        s(&d("split.jsonl")),
        "--part",
        "test",
        "--neutral-model",
        s(&d("neutral.json")),
        "-o",
        s(&d("pred.jsonl")),
    ]);
    let eval: Value = serde_json::from_str(&ok(&[
        "--seed",
        "7",
        "eval",
        s(&d("split.jsonl")),
        "--predictions",
        s(&d("pred.jsonl")),
        "--part",
        "test",
    ]))
    .unwrap();
    let cv: Value = serde_json::from_str(&ok(&["--seed", "7", "cv", s(&f), "--k", "5"])).unwrap();
    let fold0: Vec<&Value> = cv["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["fold"] == 0)
        .collect();
    let got = eval["rows"].as_array().unwrap();
    assert_eq!(fold0.len(), got.len());
    for (a, b) in fold0.iter().zip(got) {
        for key in ["class", "precision", "recall", "f1", "support"] {
            assert_eq!(a[key], b[key], "{key}");
        }
    }
}

#[test]
fn model_files_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["neutral", "mms"] {
        let path = dir.path().join(format!("{kind}.json"));
        ok(&[
            "train",
            s(&fixture()),
            "--model",
            kind,
            "--part",
            "all",
            "--out",
            s(&path),
        ]);
        let bytes = std::fs::read_to_string(&path).unwrap();
        assert_eq!(ModelFile::load(&path).unwrap().to_json(), bytes);
    }
    let mms = dir.path().join("mms.json");
    let err = ModelFile::load_neutral(&mms).unwrap_err();
    assert!(err.to_string().contains("confidence model"));
}

#[test]
fn jsonl_round_trip() {
    let text = std::fs::read_to_string(fixture()).unwrap();
    let corpus = read_jsonl(&text, &Config::default()).unwrap();
    let again = read_jsonl(&write_jsonl(&corpus), &Config::default()).unwrap();
    assert_eq!(corpus, again);
}

#[test]
fn tables_have_every_method() {
    let t1: Value = serde_json::from_str(&ok(&["eval", s(&fixture()), "--table", "1"])).unwrap();
    let methods: Vec<&str> = t1["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["method"].as_str().unwrap())
        .collect();
    for m in ["nnb", "lck", "subtree"] {
        assert!(methods.contains(&m), "{m}");
    }
    assert_eq!(t1["provenance"]["heuristic_trees"], true);

    let t3 = ok(&["--format", "tsv", "eval", s(&fixture()), "--table", "3"]);
    let rows: Vec<&str> = t3
        .lines()
        .filter(|l| l.starts_with("bow\t") || l.starts_with("mms\t"))
        .collect();
    assert_eq!(rows.len(), 6);

    // an untagged corpus cannot produce the held-out table
    let dir = tempfile::tempdir().unwrap();
    let untagged = dir.path().join("untagged.jsonl");
    let mut corpus = read_jsonl(&std::fs::read_to_string(fixture()).unwrap(), &Config::default()).unwrap();
    for d in &mut corpus.documents {
        d.split = Default::default();
    }
    std::fs::write(&untagged, write_jsonl(&corpus)).unwrap();
    assert_eq!(snpassoc(&["eval", s(&untagged), "--table", "1"]).status.code(), Some(2));
}

#[test]
fn raw_text_extraction_is_ranked() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n);
    ok(&[
        "train",
        s(&fixture()),
        "--model",
        "neutral",
        "--part",
        "all",
        "--out",
        s(&d("n.json")),
    ]);
    ok(&[
        "train",
        s(&fixture()),
        "--model",
        "mms",
        "--part",
        "all",
        "--out",
        s(&d("m.json")),
    ]);
    std::fs::write(
        d("abstract.txt"),
        "The rs7412 variant may be associated with asthma. \
         The rs429358 variant was significantly associated with obesity (p < 0.001). \
         We found no association between rs12345 and migraine.\n",
    )
    .unwrap();
    let out = ok(&[
        "--emit-neutral",
        "extract",
        "--text",
        s(&d("abstract.txt")),
        "--neutral-model",
        s(&d("n.json")),
        "--mms-model",
        s(&d("m.json")),
    ]);
    let preds: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(preds.len(), 3);
    assert_eq!(preds[0]["snp"], "rs429358");
    assert_eq!(preds[0]["confidence"], "high");
    assert_eq!(preds[1]["confidence"], "low");
    assert_eq!(preds[2]["verdict"], "not_associated");
    assert_eq!(preds[2]["confidence"], Value::Null);
}

#[test]
fn xml_corpus_via_config() {
    let dir = tempfile::tempdir().unwrap();
    let xml = dir.path().join("c.xml");
    std::fs::write(
        &xml,
        r#"<corpus>
  <document id="d1" split="train">
    <sentence id="d1.s1" text="We found no association between rs1 and asthma.">
      <entity id="e1" type="SNP" charOffset="32-34"/>
      <entity id="e2" type="Phenotype" charOffset="40-45"/>
      <pair id="p1" e1="e1" e2="e2" type="negated"/>
    </sentence>
  </document>
</corpus>
"#,
    )
    .unwrap();
    let config = dir.path().join("c.toml");
    std::fs::write(&config, "label_map = { negated = \"negative\" }\n").unwrap();
    let report: Value = serde_json::from_str(&ok(&["--config", s(&config), "stats", s(&xml)])).unwrap();
    assert_eq!(report["stats"]["n_candidates"], 1);
    assert_eq!(snpassoc(&["stats", s(&xml)]).status.code(), Some(2));
}
