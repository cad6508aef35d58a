use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn apportion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apportion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn outcomes(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    json(out)["outcomes"].clone()
}

#[test]
fn dhondt_example() {
    let out = apportion(&["apportion", "--method", "dhondt", "--votes", "6,7,39,48", "--seats", "10"]);
    assert_eq!(outcomes(&out), serde_json::json!([[0, 0, 4, 6]]));
    assert_eq!(json(&out)["exact"], true);
    assert_eq!(json(&out)["rule"], "dhondt");
}

#[test]
fn largest_remainder_example() {
    let out = apportion(&[
        "apportion", "--method", "largest-remainder", "--votes", "6,7,39,48", "--seats", "10",
    ]);
    assert_eq!(outcomes(&out), serde_json::json!([[0, 1, 4, 5]]));
}

#[test]
fn ties_list_every_outcome() {
    let out = apportion(&["apportion", "--method", "dhondt", "--votes", "1,1", "--seats", "1"]);
    assert_eq!(outcomes(&out), serde_json::json!([[0, 1], [1, 0]]));
}

#[test]
fn input_file_and_custom_divisors() {
    let out = apportion(&["apportion", "--method", "sainte-lague", "-i", &data("parties.json")]);
    assert_eq!(outcomes(&out), serde_json::json!([[1, 1, 4, 4]]));
    let out = apportion(&[
        "apportion", "--method", "divisor:1;slope=2;intercept=1", "-i", &data("parties.json"),
    ]);
    assert_eq!(outcomes(&out), serde_json::json!([[1, 1, 4, 4]]));
}

#[test]
fn elect_examples() {
    let pav = apportion(&["elect", "--rule", "pav", "-i", &data("twelve_voters.json"), "-k", "3"]);
    assert_eq!(outcomes(&pav), serde_json::json!([[1, 3, 6]]));
    assert_eq!(json(&pav)["scores"]["optimum"], "27/2");

    // {c1,c3,c6} ties {c1,c3,c4} at 11
    let monroe = apportion(&["elect", "--rule", "monroe", "-i", &data("twelve_voters.json")]);
    assert_eq!(outcomes(&monroe), serde_json::json!([[1, 3, 4], [1, 3, 6]]));
    assert_eq!(json(&monroe)["scores"]["optimum"], "11");

    let var = apportion(&["elect", "--rule", "var-phragmen", "-i", &data("five_voters.json")]);
    assert_eq!(outcomes(&var), serde_json::json!([[1, 2, 4]]));
    assert_eq!(json(&var)["scores"]["optimum"], "2");

    let seq = apportion(&["elect", "--rule", "seq-pav", "-i", &data("twelve_voters.json"), "--no-clones"]);
    assert_eq!(outcomes(&seq), serde_json::json!([[1, 3, 5], [1, 3, 6]]));
}

#[test]
fn induce_matches_dhondt() {
    for route in ["closed-form", "committees"] {
        let out = apportion(&[
            "induce", "--rule", "pav", "--votes", "6,7,39,48", "--seats", "10", "--route", route,
        ]);
        assert_eq!(outcomes(&out), serde_json::json!([[0, 0, 4, 6]]), "{route}");
    }
    // without clone merging the 40-candidate search is over the cap
    let out = apportion(&[
        "induce", "--rule", "pav", "--votes", "6,7,39,48", "--seats", "10", "--route", "committees-plain",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = apportion(&[
        "induce", "--rule", "pav", "--votes", "1,2,4", "--seats", "3", "--route", "committees-plain",
    ]);
    assert_eq!(outcomes(&out), serde_json::json!([[0, 1, 2]]));
}

#[test]
fn check_reports_per_party() {
    let out = apportion(&[
        "check", "--property", "quota", "--votes", "6,7,39,48", "--seats", "10", "--alloc", "0,1,4,5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["parties"].as_array().unwrap().len(), 4);
    assert_eq!(doc["parties"][3]["lower"], 4);
    assert_eq!(doc["parties"][3]["upper"], 5);

    let out = apportion(&[
        "check", "--property", "lower-quota", "--votes", "6,7,39,48", "--seats", "10", "--alloc", "3,3,2,2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn check_pjr() {
    let file = data("twelve_voters.json");
    let pass = apportion(&["check", "--property", "pjr", "-i", &file, "--committee", "1,3,5"]);
    assert_eq!(pass.status.code(), Some(0));
    let fail = apportion(&["check", "--property", "pjr", "-i", &file, "--committee", "2,4,6"]);
    assert_eq!(fail.status.code(), Some(1));
}

#[test]
fn verify_sweep() {
    let out = apportion(&[
        "verify", "--claim", "varphrag-sl", "--exhaustive", "--max-parties", "3", "--max-votes", "10",
        "--max-seats", "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let doc = json(&out);
    assert_eq!(doc["holds"], true);
    assert_eq!(doc["failures"], serde_json::json!([]));
    assert!(doc["instances"].as_u64().unwrap() > 0);
}

#[test]
fn verify_failure_exits_one() {
    let out = apportion(&[
        "verify", "--claim", "topk-plurality", "--weights", "cc", "--exhaustive", "--max-votes", "4",
        "--max-seats", "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["holds"], false);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["apportion", "--method", "plurality", "--votes", "1,2", "--seats", "1"][..],
        &["apportion", "--method", "dhondt", "--votes", "1,0", "--seats", "1"],
        &["apportion", "--method", "dhondt", "--votes", "1,x", "--seats", "1"],
        &["apportion", "--method", "dhondt", "--votes", "1,2"],
        &["elect", "--rule", "monroe", "-i", &data("twelve_voters.json"), "-k", "5"],
        &["elect", "--rule", "pav", "-i", &data("parties.json")],
        &["verify", "--claim", "no-such-claim"],
        &["check", "--property", "threshold", "--votes", "1,2", "--seats", "2", "--alloc", "1,1", "--t", "2"],
        &["frobnicate"],
    ] {
        let out = apportion(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let runs = [
        &["apportion", "--method", "adams", "--votes", "5,5,5", "--seats", "4"][..],
        &["elect", "--rule", "mav", "-i", &data("twelve_voters.json")],
        &["verify", "--claim", "pav-dhondt", "--trials", "30", "--seed", "7", "--timing"],
        &["gen", "--kind", "profile", "--seed", "3"],
    ];
    for args in runs {
        let a = apportion(args);
        let b = apportion(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn table_output() {
    let out = apportion(&[
        "--output", "table", "elect", "--rule", "pav", "-i", &data("twelve_voters.json"),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("{c1,c3,c6}"), "{text}");
    assert!(text.contains("optimum: 27/2"), "{text}");
}

#[test]
fn generated_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("apportion-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for seed in 0..5 {
        let gen = apportion(&["gen", "--seed", &seed.to_string(), "--max-seats", "4"]);
        assert_eq!(gen.status.code(), Some(0));
        let path = dir.join(format!("a{seed}.json"));
        std::fs::write(&path, &gen.stdout).unwrap();
        let seats = json(&gen)["seats"].as_u64().unwrap();
        let committee: Vec<String> = (1..=seats).map(|c| c.to_string()).collect();
        let committee = committee.join(",");
        let path = path.display().to_string();
        for args in [
            &["apportion", "--method", "dhondt", "-i", &path][..],
            &["induce", "--rule", "var-phragmen", "-i", &path],
            &["check", "--property", "pjr", "-i", &path, "--committee", &committee],
        ] {
            let code = apportion(args).status.code();
            assert!(matches!(code, Some(0) | Some(1)), "{args:?}: {code:?}");
        }

        let gen = apportion(&["gen", "--kind", "profile", "--seed", &seed.to_string()]);
        let path = dir.join(format!("p{seed}.json"));
        std::fs::write(&path, &gen.stdout).unwrap();
        let path = path.display().to_string();
        for rule in ["pav", "seq-cc", "max-phragmen", "sav"] {
            let out = apportion(&["elect", "--rule", rule, "-i", &path]);
            assert_eq!(out.status.code(), Some(0), "{rule}: {}", String::from_utf8_lossy(&out.stderr));
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
