use std::process::Command;

fn run(args: &[&str]) -> (bool, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_autoplexity"))
        .args(args)
        .env_remove("AUTOPLEXITY_CACHE")
        .output()
        .expect("binary runs");
    (
        output.status.success(),
        String::from_utf8_lossy(&output.stdout).into_owned(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
    )
}

#[test]
fn complexity_of_unary_word() {
    let (ok, stdout, _) = run(&["complexity", "00000"]);
    assert!(ok);
    assert!(stdout.contains("A_N = 1"));
}

#[test]
fn complexity_json_round_trips() {
    let (ok, stdout, _) = run(&["complexity", "0101", "--json"]);
    assert!(ok);
    let value: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(value["word"], "0101");
    assert_eq!(value["a_n"], 2);
    assert_eq!(value["b"], 3);
    assert_eq!(value["d"], 1);
}

#[test]
fn deficiency_of_square_free_word() {
    let (ok, stdout, _) = run(&["deficiency", "0102010"]);
    assert!(ok);
    assert!(stdout.contains("D = 0"));
}

#[test]
fn deficiency_decision() {
    let (ok, stdout, _) = run(&["deficiency", "0101", "--decide", "0", "--json"]);
    assert!(ok);
    let value: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(value["exceeds"], true);
}

#[test]
fn decode_ten_state_code() {
    let (ok, stdout, _) = run(&[
        "codec",
        "--decode",
        "0[1000[11+0[0+]1]1]1",
        "--word",
        "0100011001010101111100",
    ]);
    assert!(ok);
    assert!(stdout.contains("states: 10"));
    assert!(stdout.contains("uniquely accepts at length 22: 0100011001010101111100"));
}

#[test]
fn encode_run_file() {
    let dir = std::env::temp_dir().join(format!("autoplexity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.txt");
    std::fs::write(&path, "010\n0 1 1 0\n").unwrap();
    let (ok, stdout, _) = run(&["codec", "--encode", path.to_str().unwrap()]);
    assert!(ok);
    assert!(stdout.contains("code: *[0[+]1]0"));
    assert!(stdout.contains("shape: [0[+]]"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn table_small() {
    let (ok, stdout, _) = run(&["table", "--exhaustive-max", "4"]);
    assert!(ok);
    assert!(stdout.contains("0.500"));
    assert!(stdout.contains("0.250"));
}

#[test]
fn thue_and_ternary_prefixes() {
    let (ok, stdout, _) = run(&["thue", "--length", "16"]);
    assert!(ok);
    assert_eq!(stdout.trim(), "0110100110010110");

    let (ok, stdout, _) = run(&["ternary", "--length", "7"]);
    assert!(ok);
    assert_eq!(stdout.trim(), "2102012");
}

#[test]
fn verify_theorem_small() {
    let (ok, stdout, _) = run(&["verify", "square_free_d0", "--max-length", "5"]);
    assert!(ok);
    assert!(stdout.contains("PASS"));
}

#[test]
fn construct_ceiling_witness() {
    let (ok, stdout, _) = run(&["construct", "--fig1", "010"]);
    assert!(ok);
    assert!(stdout.contains("states: 2 = b(3)"));
    assert!(stdout.contains("code: *[0[+]1]0"));
}

#[test]
fn malformed_word_fails_with_message() {
    let (ok, _, stderr) = run(&["complexity", "01a"]);
    assert!(!ok);
    assert!(stderr.contains("malformed word"));
}

#[test]
fn dfa_length_limit_enforced() {
    let (ok, _, stderr) = run(&["complexity", "010101010101010", "--deterministic"]);
    assert!(!ok);
    assert!(stderr.contains("exceeds the DFA search limit"));
}

#[test]
fn hereditary_counts_small() {
    let (ok, stdout, _) = run(&["hereditary", "--length", "3", "--json"]);
    assert!(ok);
    let lines: Vec<serde_json::Value> = stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["words"], 2);
    assert_eq!(lines[1]["words"], 2);
    assert_eq!(lines[2]["words"], 4);
    assert_eq!(lines[2]["classes"], 2);
}

#[test]
fn cache_file_is_written_and_reused() {
    let dir = std::env::temp_dir().join(format!("autoplexity-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cache = dir.join("cache.txt");
    let (ok, _, _) = run(&["complexity", "0101", "--cache", cache.to_str().unwrap()]);
    assert!(ok);
    let content = std::fs::read_to_string(&cache).unwrap();
    assert!(content.contains("0101 2 "));
    let (ok, stdout, _) = run(&["complexity", "0101", "--cache", cache.to_str().unwrap()]);
    assert!(ok);
    assert!(stdout.contains("A_N = 2"));
    std::fs::remove_dir_all(&dir).unwrap();
}
