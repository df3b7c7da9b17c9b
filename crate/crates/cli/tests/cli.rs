use schur_sigma::classify::{Catalog, MASSEY_HEADER};
use std::fmt::Write as _;
use std::path::Path;
use std::process::{Command, Output};

/// Reference counts by alias, summing to 461925.
const COUNTS: [(&str, u64); 19] = [
    ("[243,2]", 3184),
    ("[243,3]", 19298),
    ("[243,4]", 40968),
    ("[243,5]", 83353),
    ("[243,6]", 40125),
    ("[243,7]", 41398),
    ("[243,8]", 40807),
    ("[243,9]", 10426),
    ("[243,13]", 13288),
    ("[243,14]", 13705),
    ("[243,15]", 13474),
    ("[243,17]", 39425),
    ("[243,18]", 81494),
    ("[729,9]", 1979),
    ("[729,10]", 6555),
    ("[729,11]", 6172),
    ("[729,12]", 4299),
    ("[729,26]", 1929),
    ("[2187,33]", 46),
];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schur-sigma")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn catalog_json_has_19_entries_and_is_deterministic() {
    let a = run(&["catalog"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 19);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("catalog.json");
    assert_eq!(run(&["catalog", "--out", path(&out)]).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout(&a));
}

#[test]
fn classify_records() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("records.csv");
    let out = dir.path().join("labels.csv");
    std::fs::write(&input, format!("{}\n-3896,0,0,0,0,0,0,0,0\n-3299,1,0,0,1,0,1,1,0\n", MASSEY_HEADER.join(","))).unwrap();
    let o = run(&["classify", "--in", path(&input), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "discriminant,label");
    assert_eq!(lines[1], "-3896,\"[2187,33]\"");
    assert_eq!(lines.len(), 3);
}

#[test]
fn classify_reports_bad_rows_by_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("records.csv");
    let out = dir.path().join("labels.csv");
    std::fs::write(&input, format!("{}\n-3299,0,0,0,0,0,0,0,0\n-3299,0,0,x,0,0,0,0,0\n", MASSEY_HEADER.join(","))).unwrap();
    let o = run(&["classify", "--in", path(&input), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let missing = dir.path().join("absent.csv");
    let o = run(&["classify", "--in", path(&missing), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("does not exist"));
}

fn labels_file(dir: &Path, rows: &[(&str, u64)]) -> std::path::PathBuf {
    let mut text = String::from("discriminant,label\n");
    let mut d = -3299i64;
    for (label, n) in rows {
        for _ in 0..*n {
            let _ = writeln!(text, "{d},\"{label}\"");
            d -= 1;
        }
    }
    let p = dir.join("labels.csv");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn report_on_reference_counts() {
    let dir = tempfile::tempdir().unwrap();
    let input = labels_file(dir.path(), &COUNTS);
    let o = run(&["report", "--in", path(&input)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let row = text.lines().find(|l| l.starts_with("[243,5]\t")).unwrap();
    let cells: Vec<&str> = row.split('\t').collect();
    assert_eq!(&cells[3..5], ["83353", "0.18045"]);
    // Exact model ratio; the reference column reads 1.02724.
    assert_eq!(cells[5], "1.02770");
    assert!(text.lines().last().unwrap().contains("461925"));

    let md = stdout(&run(&["report", "--in", path(&input), "--format", "markdown"]));
    assert!(md.contains("| [2187,33] | [9,9] |"), "{md}");
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&["report", "--in", path(&input), "--format", "json"]))).unwrap();
    assert_eq!(json["total"], 461925);
}

#[test]
fn report_rejects_unknown_labels() {
    let dir = tempfile::tempdir().unwrap();
    let input = labels_file(dir.path(), &[("[243,5]", 2), ("[243,1]", 1)]);
    let o = run(&["report", "--in", path(&input)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("[243,1]") && err.contains("[2187,33]"), "{err}");
}

#[test]
fn ipad_and_descendants() {
    let cat = Catalog::build().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    std::fs::write(&g, cat.lookup("[243,5]").unwrap().group.to_text()).unwrap();
    let o = run(&["ipad", "--group", path(&g)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "[3,3]; [3,3,3], [9,3]^3");

    std::fs::write(&g, "pcgroup p=3 n=2\n").unwrap();
    let o = run(&["descendants", "--group", path(&g), "--step", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // C9 x C3 and the two non-abelian groups of order 27.
    assert_eq!(stdout(&o).matches("pcgroup p=3 n=3").count(), 3);
    let o = run(&["--p", "5", "ipad", "--group", path(&g)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn powerful_exit_codes() {
    let o = run(&["powerful", "--type", "[243,4]", "--subgroup", "d2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "all_powerful");
    let o = run(&["--max-class", "3", "powerful", "--type", "[243,3]", "--subgroup", "d2"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let o = run(&["powerful", "--type", "[729,9]", "--subgroup", "d2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--p", "5", "catalog"]).status.code(), Some(1));
    assert_eq!(run(&["--threads", "0", "catalog"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn selfcheck_passes() {
    let o = run(&["selfcheck"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
