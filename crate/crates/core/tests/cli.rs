use std::process::{Command, Output};

use serde_json::Value;

fn pairpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairpoly")).args(args).env_remove("PAIRPOLY_TRUNC").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn betti_json_contract() {
    let o = pairpoly(&["betti", "--g", "2", "--d", "5", "--N", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["dim"], 7);
    assert_eq!(v["N"], 5);
    let betti: Vec<i64> = v["betti"].as_array().unwrap().iter().map(|b| b.as_i64().unwrap()).collect();
    assert_eq!(betti, [1, 4, 7, 8, 8, 8, 8, 8, 8, 8, 8, 8, 7, 4, 1]);
    assert_eq!(v["checks"]["duality"], true);
    assert!(v.get("ledger").is_none());
    // canonical key order, no floats: re-serializing is byte-identical
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again, text);
    assert!(!text.contains('.'));
}

#[test]
fn ledger_json_round_trips() {
    let o = pairpoly(&["ledger", "--g", "3", "--d", "6", "--N", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    let ledger = v["ledger"].as_array().unwrap();
    assert_eq!(ledger[0]["class"], "Ia_SS");
    assert!(ledger[0]["j"].is_null());
    assert!(ledger.iter().all(|e| e["delta"].as_str().unwrap().contains('/')));
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn window_errors_are_usage_errors() {
    let o = pairpoly(&["betti", "--g", "2", "--d", "5", "--N", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("d/2 < N"));
    assert_eq!(pairpoly(&["betti", "--g", "1", "--d", "5", "--N", "3"]).status.code(), Some(2));
    assert_eq!(pairpoly(&["betti", "--g", "2"]).status.code(), Some(2));
    assert_eq!(pairpoly(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pairpoly(&["--help"]).status.code(), Some(0));
}

#[test]
fn strata_listing_and_csv() {
    let o = pairpoly(&["strata", "--g", "2", "--d", "5", "--tau", "22/5", "--jmax", "6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "class,j,delta,sigma");
    assert_eq!(
        &rows[1..],
        [
            "OPEN,,0/1,",
            "IIplus,1,2/5,1",
            "IIminus,5,3/5,6",
            "IIplus,2,7/5,2",
            "Ia_SS,,19/10,",
            "Ia,3,12/5,",
            "Ia,4,17/5,",
            "Ib,5,22/5,6",
            "Ib,6,27/5,8",
        ]
    );
}

#[test]
fn strata_rejects_walls() {
    let o = pairpoly(&["strata", "--g", "2", "--d", "5", "--tau", "9/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("4 tau_c in Z if d odd"), "{}", stderr(&o));
    let o = pairpoly(&["strata", "--g", "2", "--d", "5", "--tau", "nine"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn strata_json_has_exact_deltas() {
    let o = pairpoly(&["strata", "--g", "2", "--d", "5", "--tau", "22/5", "--jmax", "6", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let strata = v["strata"].as_array().unwrap();
    assert_eq!(strata.len(), 9);
    assert_eq!(strata[2]["class"], "IIminus");
    assert_eq!(strata[2]["delta"], "3/5");
    assert_eq!(strata[2]["sigma"], 6);
    assert!(strata[0]["critical_series"].is_null());
    assert_eq!(strata[1]["critical_series"][1], 8);
}

#[test]
fn flip_report() {
    let o = pairpoly(&["flip", "--g", "2", "--d", "5", "--N", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equal"], true);
    assert_eq!(v["closed_form_string"], "-t^2 - 8t^3 - 24t^4 - 40t^5 - 47t^6 - 48t^7 - 47t^8 - 40t^9 - 24t^10 - 8t^11 - t^12");
    let c = &v["correspondence"];
    assert_eq!(c["annihilated"][0], "IIminus(4)");
    assert_eq!(c["created"][0], "IIplus(1)");
    assert_eq!(c["retyped"][0], serde_json::json!(["Ib(4)", "Ia(4)"]));

    let o = pairpoly(&["flip", "--fixed-det", "--g", "2", "--d", "5", "--N", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["closed_form_string"], "-t^2 - 4t^3 - 2t^4 - 4t^5 - 2t^6 - 4t^7 - t^8");

    assert_eq!(pairpoly(&["flip", "--g", "2", "--d", "5", "--N", "5"]).status.code(), Some(2));
}

#[test]
fn truncation_precedence() {
    let rows = |o: &Output| stdout(o).lines().count();
    let base = ["flip", "--g", "2", "--d", "5", "--N", "4", "--format", "csv"];
    // header + degrees 0..=14+buffer
    assert_eq!(rows(&pairpoly(&base)), 1 + 15 + 8);
    let env = Command::new(env!("CARGO_BIN_EXE_pairpoly")).args(base).env("PAIRPOLY_TRUNC", "3").output().unwrap();
    assert_eq!(rows(&env), 1 + 15 + 3);
    let both = Command::new(env!("CARGO_BIN_EXE_pairpoly"))
        .args(base)
        .args(["--trunc", "5"])
        .env("PAIRPOLY_TRUNC", "3")
        .output()
        .unwrap();
    assert_eq!(rows(&both), 1 + 15 + 5);
    let zero = pairpoly(&["betti", "--g", "2", "--d", "5", "--N", "5", "--trunc", "0"]);
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn verify_filters_and_reports() {
    let o = pairpoly(&["verify", "--g", "2", "--d", "5", "--only", "dual-path", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "g,d,N,check,pass\n2,5,3,dual-path,true\n2,5,4,dual-path,true\n2,5,5,dual-path,true\n");
    let o = pairpoly(&["verify", "--g", "2..3", "--d", "3..5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all pass"));
    assert_eq!(pairpoly(&["verify", "--g", "2", "--d", "5", "--only", "bogus"]).status.code(), Some(2));
    assert_eq!(pairpoly(&["verify", "--g", "3..2", "--d", "5"]).status.code(), Some(2));
}

#[cfg(debug_assertions)]
#[test]
fn verify_catches_a_corrupted_contribution() {
    let o = pairpoly(&["verify", "--g", "2", "--d", "5", "--perturb", "Ia_SS"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("first failing check: dual-path (g=2, d=5, N=3)"), "{}", stderr(&o));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("pairpoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("b.json");
    let o = pairpoly(&["betti", "--g", "2", "--d", "4", "--N", "3", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["d"], 4);
    std::fs::remove_dir_all(dir).unwrap();
}
