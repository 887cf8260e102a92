use std::process::{Command, Output};

fn prodint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodint"))
        .args(args)
        .env_remove("PRODINT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn truncadd_exclusion() {
    let out = prodint(&["single-exclusion", "--family", "truncadd", "--n", "2", "--hmax", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["report"]["resolved"], "all-except:2");
    assert_eq!(doc["witness"], 10);
}

#[test]
fn wordcap_exclusion() {
    let out = prodint(&["single-exclusion", "--family", "wordcap", "--n", "3", "--hmax", "8", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["resolved"], "all-except:3");
}

#[test]
fn text_mode_marks_exclusions() {
    let out = prodint(&["single-exclusion", "--family", "truncadd", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("1 ✓ 2 ✓ 3 ✗ 4 ✓ 5 ✓ 6 ✓"), "{text}");
    assert!(text.contains("H = all-except:3"));
}

#[test]
fn usage_errors() {
    let out = prodint(&["single-exclusion", "--family", "wordcap", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // horizon below n + 1
    let out = prodint(&["single-exclusion", "--family", "truncadd", "--n", "4", "--hmax", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = prodint(&["realize", "--setting", "hq", "--target", "1,,3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = prodint(&["realize", "--setting", "hq", "--target", "all", "--q-count", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = prodint(&["selftest", "--table-budget", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn explicit_hq_product() {
    let out = prodint(&[
        "realize", "--setting", "hq", "--target", "all-except:2,3", "--q-count", "2", "--explicit", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["mode"], "TruncAddProduct");
    assert_eq!(doc["explicit_product_size"], 481);
    assert_eq!(doc["certificate"]["resolved"], "all-except:2,3");
}

#[test]
fn full_target_uses_multiplicative_monoid() {
    let out = prodint(&["realize", "--setting", "hnstar", "--target", "all", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["mode"], "FullN");
    assert!(doc["certificate"]["verdicts"].as_array().unwrap().iter().all(|v| v == true));
}

#[test]
fn missing_one_is_infeasible() {
    let out = prodint(&["realize", "--setting", "hnstar", "--target", "2,3"]);
    assert_eq!(out.status.code(), Some(3));
    let out = prodint(&["realize", "--setting", "hq", "--target", "none"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn tuple_budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_prodint"))
        .args(["single-exclusion", "--family", "truncadd", "--n", "3"])
        .env("PRODINT_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_prodint"))
        .args(["single-exclusion", "--family", "truncadd", "--n", "3", "--tuple-budget", "1000"])
        .env("PRODINT_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn json_round_trips() {
    use prodint_core::algebra::HReport;
    use prodint_core::realizer::RealizationRecord;
    for args in [
        &["realize", "--setting", "hq", "--target", "1,3,4", "--q-count", "5", "--format", "json"][..],
        &["realize", "--setting", "hnstar", "--target", "all-except:2,5", "--format", "json"],
    ] {
        let out = prodint(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let text = stdout(&out);
        let record: RealizationRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&record).unwrap(), text.trim_end());
    }
    let out = prodint(&["single-exclusion", "--family", "wordcap", "--n", "4", "--format", "json"]);
    let doc = json(&out);
    let report: HReport = serde_json::from_value(doc["report"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), doc["report"]);
    assert!(stdout(&out).starts_with(r#"{"family":"wordcap","n":4,"report":{"hmax":7,"#));
}

#[test]
fn realization_schema_parses_back() {
    use prodint_core::realizer::RealizationRecord;
    let out = prodint(&["realize", "--setting", "hnstar", "--target", "1,2,5", "--format", "json"]);
    let text = stdout(&out);
    let record: RealizationRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(record.target.to_string(), "1,2,5");
    assert_eq!(serde_json::to_string(&record).unwrap(), text.trim_end());
}

#[test]
fn selftest_quick() {
    let out = prodint(&["selftest", "--level", "quick"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("✓ box power")), "{text}");
    assert!(text.contains("15/15 passed"));
}

#[test]
fn selftest_is_reproducible() {
    let a = prodint(&["selftest", "--seed", "99", "--format", "json"]);
    let b = prodint(&["selftest", "--seed", "99", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 99);
}
