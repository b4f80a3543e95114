use std::process::Command;

use khconcord::cli::run;

fn khc(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("khc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn manifest(path: &str) -> String {
    format!("{}/{path}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn kh_json_for_the_trefoil() {
    let (code, out, _) = khc(&["kh", "trefoil"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"[{"i":0,"j":2,"dim":1},{"i":2,"j":6,"dim":1},{"i":3,"j":8,"dim":1}]"#);
}

#[test]
fn knot_inputs_agree() {
    let by_name = khc(&["kh", "trefoil"]).1;
    assert_eq!(khc(&["kh", "--braid", "[1,1,1]"]).1, by_name);
    assert_eq!(khc(&["kh", "--knot", "T(2,3)"]).1, by_name);
    let dir = std::env::temp_dir().join(format!("khc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pd = dir.join("trefoil.pd");
    std::fs::write(&pd, khconcord::cli::resolve("trefoil").unwrap().to_pd_string()).unwrap();
    assert_eq!(khc(&["kh", "--pd", pd.to_str().unwrap()]).1, by_name);
    let json = dir.join("out.json");
    assert_eq!(khc(&["kh", "trefoil", "--json", json.to_str().unwrap()]).0, 0);
    assert_eq!(std::fs::read_to_string(&json).unwrap(), by_name);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn lee_and_s() {
    let (code, out, _) = khc(&["s", "T(2,5)"]);
    assert_eq!((code, out.trim()), (0, "4"));
    let (code, out, _) = khc(&["lee", "figure-eight"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["s"], 0);
    assert_eq!(v["pages"][0]["r"], 2);
}

#[test]
fn movie_report() {
    let dir = std::env::temp_dir().join(format!("khc-movie-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("cap.mov");
    std::fs::write(&file, "START trefoil\nBIRTH 50\nDEATH 50\n").unwrap();
    let (code, out, err) = khc(&["movie", file.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["total_rank"], 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn movie_starting_from_a_pd_file() {
    let dir = std::env::temp_dir().join(format!("khc-pdmovie-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("k.pd"), "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]\n").unwrap();
    let file = dir.join("kink.mov");
    std::fs::write(&file, "START k.pd\nR1 2 + L\n").unwrap();
    let (code, out, err) = khc(&["movie", file.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["total_rank"], 3);
    assert_eq!(v["bidegree"], serde_json::json!([0, 0]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn obstruct_exit_codes() {
    let (code, out, _) = khc(&["obstruct", "unknot", "trefoil"]);
    assert_eq!(code, 3);
    assert!(out.contains("\"obstructed\""));
    let (code, out, _) = khc(&["obstruct", "trefoil", "trefoil"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"not-obstructed\""));
}

#[test]
fn bad_input_and_budget() {
    let (code, _, err) = khc(&["kh", "no-such-knot"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
    assert_eq!(khc(&["kh"]).0, 1);
    let (code, _, err) = khc(&["--budget", "10", "kh", "T(3,4)"]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(khc(&["movie", "/no/such/file.mov"]).0, 1);
}

#[test]
fn replay_needs_a_t45_movie() {
    let dir = std::env::temp_dir().join(format!("khc-replay-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("trefoil.mov");
    std::fs::write(&file, "START trefoil\n").unwrap();
    let (code, _, err) = khc(&["replay", file.to_str().unwrap(), &manifest("data/t45_constraints.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("T(4,5)"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn catalog_lists_every_entry() {
    let (code, out, _) = khc(&["catalog"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), khconcord::cli::CATALOG.len());
    assert!(out.contains("T(4,5)"));
}

#[test]
fn svg_grid() {
    let (code, out, _) = khc(&["kh", "T(3,4)", "--grid", "svg"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("<circle").count(), 5);
}

#[test]
fn t45_grid_matches_golden_file() {
    let out = Command::new(env!("CARGO_BIN_EXE_khc")).args(["kh", "T(4,5)", "--grid", "text"]).output().unwrap();
    assert!(out.status.success());
    let golden = std::fs::read_to_string(manifest("tests/golden/t45_grid.txt")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}
