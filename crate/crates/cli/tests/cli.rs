use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn grassnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grassnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = grassnet(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b, c) = (path(&dir, "a"), path(&dir, "b"), path(&dir, "c"));
    ok(&["generate", "--seed", "1", "--out", s(&a)]);
    ok(&["generate", "--seed", "1", "--out", s(&b)]);
    ok(&["generate", "--seed", "2", "--out", s(&c)]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
    let stdout = ok(&["generate", "--seed", "1"]);
    assert_eq!(stdout.as_bytes(), fs::read(&a).unwrap());
}

#[test]
fn generated_walls_verify() {
    let dir = TempDir::new().unwrap();
    for (rank, dim) in [("0", "3"), ("1", "7")] {
        let walls = path(&dir, &format!("walls{rank}"));
        ok(&["generate", "--rank", rank, "--dim", dim, "--seed", "4", "--out", s(&walls)]);
        let report = ok(&["verify", "--in", s(&walls)]);
        assert!(report.contains("squares=12 passed=12 failed=0"), "{report}");
        assert!(report.ends_with("status=pass\n"));
    }
}

#[test]
fn pipeline_verifies() {
    let dir = TempDir::new().unwrap();
    let (walls, net, edges) = (path(&dir, "walls"), path(&dir, "net"), path(&dir, "edges"));
    ok(&["generate", "--rank", "1", "--seed", "9", "--out", s(&walls)]);
    ok(&["propagate", "--in", s(&walls), "--out", s(&net)]);
    let report = ok(&["verify", "--in", s(&net), "--report", "full"]);
    assert!(report.contains("squares=36 passed=36 failed=0"));
    assert_eq!(report.lines().filter(|l| l.starts_with("square ")).count(), 36);
    assert_eq!(report.lines().filter(|l| l.starts_with("cube ") && l.contains("span=7")).count(), 8);

    ok(&["slice", "--in", s(&net), "--seed", "5", "--out", s(&edges)]);
    assert!(ok(&["verify", "--in", s(&edges)]).contains("kind=edgenet squares=36 passed=36"));
}

#[test]
fn extracted_coefficients_match_evolution() {
    let dir = TempDir::new().unwrap();
    let (walls, net, b, initial, evolved) = (
        path(&dir, "walls"),
        path(&dir, "net"),
        path(&dir, "b"),
        path(&dir, "initial"),
        path(&dir, "evolved"),
    );
    ok(&["generate", "--seed", "2", "--out", s(&walls)]);
    ok(&["propagate", "--in", s(&walls), "--out", s(&net)]);
    ok(&["extract", "--in", s(&net), "--coeffs", "b", "--out", s(&b)]);

    // keep only the initial plaquettes (n_k = 0 off the plaquette) and evolve them
    let text = fs::read_to_string(&b).unwrap();
    let mut kept = String::new();
    let mut keep = true;
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("square ") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            let coords: Vec<i64> = words[..3].iter().map(|w| w.parse().unwrap()).collect();
            let (i, j): (usize, usize) = (words[4].parse().unwrap(), words[5].parse().unwrap());
            keep = (0..3).all(|k| k == i || k == j || coords[k] == 0);
        }
        let matrix_row = line.starts_with(|c: char| c == '-' || c.is_ascii_digit());
        if keep || !(matrix_row || line.starts_with("square ")) {
            kept.push_str(line);
            kept.push('\n');
        }
    }
    fs::write(&initial, kept).unwrap();
    ok(&["evolve", "--in", s(&initial), "--region", "2x2x2", "--out", s(&evolved)]);
    assert_eq!(fs::read_to_string(&evolved).unwrap(), text);
}

#[test]
fn corrupted_vertex_fails_at_incident_squares() {
    let dir = TempDir::new().unwrap();
    let (net, bad) = (path(&dir, "net"), path(&dir, "bad"));
    ok(&["generate", "--n", "2", "--region", "2x2", "--seed", "6", "--out", s(&net)]);
    assert!(ok(&["verify", "--in", s(&net)]).contains("squares=4 passed=4 failed=0"));

    let text = fs::read_to_string(&net).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let at = lines.iter().position(|l| *l == "vertex 1 1").unwrap();
    let mut corrupted: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
    corrupted[at + 1] = "7 -3 5 1".into();
    fs::write(&bad, corrupted.join("\n") + "\n").unwrap();

    let out = grassnet(&["verify", "--in", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.contains("squares=4 passed=0 failed=4"), "{report}");
    let mut failing: Vec<&str> = report.lines().filter(|l| l.contains("pass=false")).collect();
    failing.sort();
    assert_eq!(
        failing,
        [
            "square base=(0,0) axes=0,1 dim=3 bound=2 pass=false",
            "square base=(0,1) axes=0,1 dim=3 bound=2 pass=false",
            "square base=(1,0) axes=0,1 dim=3 bound=2 pass=false",
            "square base=(1,1) axes=0,1 dim=3 bound=2 pass=false",
        ]
    );
    assert!(report.ends_with("status=fail\n"));
}

#[test]
fn corrupted_vertex_in_a_3d_net() {
    let dir = TempDir::new().unwrap();
    let (walls, net, bad) = (path(&dir, "walls"), path(&dir, "net"), path(&dir, "bad"));
    ok(&["generate", "--seed", "8", "--out", s(&walls)]);
    ok(&["propagate", "--in", s(&walls), "--out", s(&net)]);
    let text = fs::read_to_string(&net).unwrap().replace("vertex 1 1 1\n", "vertex 1 1 1\n#");
    // the commented row is replaced by a fresh point
    let text = text.replacen("\n#", "\n3 1 -4 1\n#", 1);
    fs::write(&bad, text).unwrap();
    let out = grassnet(&["verify", "--in", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let report = String::from_utf8(out.stdout).unwrap();
    // an interior vertex of a 2x2x2 box lies on 12 squares
    assert!(report.contains("squares=36 passed=24 failed=12"), "{report}");
    for line in report.lines().filter(|l| l.contains("pass=false")) {
        let base = line.split_whitespace().nth(1).unwrap();
        let coords: Vec<i64> = base
            .trim_start_matches("base=(")
            .trim_end_matches(')')
            .split(',')
            .map(|c| c.parse().unwrap())
            .collect();
        assert!(coords.iter().all(|&c| c <= 1), "{line}");
    }
}

#[test]
fn consistency_holds() {
    for rank in ["0", "1", "2"] {
        let report = ok(&["consistency", "--rank", rank, "--seed", "11"]);
        assert!(report.ends_with("consistent=true\n"), "{report}");
        let report = ok(&["consistency", "--kind", "darboux", "--rank", rank, "--count", "3"]);
        assert!(report.ends_with("consistent=true\n"), "{report}");
    }
}

#[test]
fn consistency_of_files() {
    let dir = TempDir::new().unwrap();
    let (walls, net, field) = (path(&dir, "walls"), path(&dir, "net"), path(&dir, "field"));
    ok(&["generate", "--n", "4", "--region", "1x1x1x1", "--dim", "4", "--out", s(&walls)]);
    ok(&["propagate", "--in", s(&walls), "--out", s(&net)]);
    assert!(ok(&["consistency", "--in", s(&net)]).ends_with("consistent=true\n"));
    ok(&["generate", "--kind", "darboux", "--n", "4", "--region", "1x1x1x1", "--out", s(&field)]);
    assert!(ok(&["consistency", "--kind", "darboux", "--in", s(&field)]).ends_with("consistent=true\n"));
}

#[test]
fn mesh_export() {
    let dir = TempDir::new().unwrap();
    let (walls, net) = (path(&dir, "walls"), path(&dir, "net"));
    ok(&["generate", "--seed", "3", "--out", s(&walls)]);
    ok(&["propagate", "--in", s(&walls), "--out", s(&net)]);
    let low = ok(&["export-mesh", "--in", s(&net), "--region", "2x2x0"]);
    let high = ok(&["export-mesh", "--in", s(&net), "--region", "2x2x0@0,0,1"]);
    let faces = |t: &str| t.lines().filter(|l| l.starts_with("f ")).map(String::from).collect::<Vec<_>>();
    assert_eq!(low.lines().filter(|l| l.starts_with("v ")).count(), 9);
    assert_eq!(faces(&low).len(), 4);
    assert_eq!(faces(&low), faces(&high));
    assert_ne!(low, high);

    let out = grassnet(&["export-mesh", "--in", s(&net), "--region", "2x0x0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_inputs_exit_with_errors() {
    let out = grassnet(&["generate", "--rank", "1", "--dim", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound 7"));

    let dir = TempDir::new().unwrap();
    let junk = path(&dir, "junk");
    fs::write(&junk, "grassnet qnet\nN 2\nr 0\nd 3\nvertex 0 0\n1 2 x 4\n").unwrap();
    let out = grassnet(&["verify", "--in", s(&junk)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 6"));
}
