use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use syzproj_cli::corpus::{default_fixture_dir, load_cases, Provenance};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_syzproj"));
    c.env_remove("SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn syzproj")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("syzproj-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_make(dir: &Path, file: &str, args: &[&str]) -> PathBuf {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let path = dir.join(file);
    std::fs::write(&path, &o.stdout).unwrap();
    path
}

fn fixture(name: &str) -> String {
    default_fixture_dir().join("ideals").join(name).to_string_lossy().into_owned()
}

#[test]
fn betti_of_the_twisted_cubic() {
    let o = run(&["betti", "--ideal", &fixture("rnc3.id"), "--max-i", "3", "--max-d", "5", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("1\t2\t3\n"), "{out}");
    assert!(out.contains("2\t3\t2\n"), "{out}");
}

#[test]
fn scroll_has_a_two_linear_resolution() {
    let o = run(&["ndp", "--ideal", &fixture("s114.id"), "--d", "2", "--p", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("N_{2,5}: pass"));
}

#[test]
fn exit_codes_distinguish_outcomes() {
    // the twisted cubic has no linear forms: N_{1,1} fails on beta_{1,2}
    let o = run(&["ndp", "--ideal", &fixture("rnc3.id"), "--d", "1", "--p", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["betti"]).status.code(), Some(3));
    assert_eq!(run(&["betti", "--ideal", "/nonexistent/x.id"]).status.code(), Some(3));
    let dir = scratch_dir("codes");
    let bad = dir.join("bad.id");
    std::fs::write(&bad, "field F 32003\nvars x y\ngen x +\n").unwrap();
    let o = run(&["betti", "--ideal", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    // a center on X violates the secant-locus precondition
    let on_x = dir.join("on_x.pts");
    std::fs::write(&on_x, "point 1 0 0 0\n").unwrap();
    let o = run(&["secant-locus", "--ideal", &fixture("rnc3.id"), "--center", on_x.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lies on X"));
}

#[test]
fn inconclusive_is_its_own_exit_code() {
    let dir = scratch_dir("inconclusive");
    std::fs::write(
        dir.join("c.toml"),
        r#"[[case]]
name = "window-too-small"
kind = "betti"
variety = "rnc:3"
max_i = 2
max_d = 2
expect = [{ key = "beta_2_3", value = 2, provenance = "DERIVED" }]
"#,
    )
    .unwrap();
    let o = run(&["corpus", "--fixtures", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("INCONCLUSIVE"));
}

#[test]
fn projection_pipeline_on_files() {
    let dir = scratch_dir("pipeline");
    let ideal = write_make(&dir, "rnc4.id", &["make", "rnc", "--d", "4"]);
    let center = write_make(&dir, "q.pts", &["make", "center", "--variety", "rnc:4", "--stratum", "secant", "--seed", "3"]);
    let ideal = ideal.to_str().unwrap();
    let center = center.to_str().unwrap();
    let o = run(&["project", "--ideal", ideal, "--center", center, "--betti", "2", "3", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("center vs X\tdisjoint"), "{out}");
    assert!(out.contains("image ndp\tN_{3,2}: pass"), "{out}");
    let o = run(&["secant-locus", "--ideal", ideal, "--center", center]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("s: 0") && out.contains("sigma length: 2") && out.contains("K_1 linear: true"), "{out}");
    // fiber through a point of the curve: the image point's preimage
    let o = run(&["fiber", "--ideal", ideal, "--center", center, "--at", "1,1,1,1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("within bound: pass"));
    let span = dir.join("span.pts");
    std::fs::write(&span, "point 1 1 1 1 1\npoint 1 2 4 8 16\npoint 1 3 9 27 81\n").unwrap();
    let o = run(&["section", "--ideal", ideal, "--span", span.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("length=3 reg=2"), "{}", stdout(&o));
    let o = run(&["les-check", "--ideal", ideal, "--t", "1", "--max-i", "2", "--max-d", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["pei", "--ideal", ideal, "--level", "2", "--oracle-check", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("oracle: pass"));
    let o = run(&["reg", "--ideal", ideal]);
    assert!(stdout(&o).contains("regularity: 1"));
}

#[test]
fn output_is_reproducible_and_seed_controlled() {
    let a = run(&["make", "center", "--stratum", "secant", "--seed", "17"]);
    let b = run(&["make", "center", "--stratum", "secant", "--seed", "17"]);
    assert_eq!(a.stdout, b.stdout);
    let env = bin().args(["make", "center", "--stratum", "secant"]).env("SEED", "17").output().unwrap();
    assert_eq!(a.stdout, env.stdout);
    let other = run(&["make", "center", "--stratum", "secant", "--seed", "18"]);
    assert_ne!(a.stdout, other.stdout);
    let c1 = run(&["corpus", "thm29", "--format", "tsv"]);
    let c2 = run(&["corpus", "thm29", "--format", "tsv"]);
    assert_eq!(c1.status.code(), Some(0));
    assert_eq!(c1.stdout, c2.stdout);
}

#[test]
fn corpus_filter_selects_by_group() {
    let o = run(&["corpus", "thm29", "--format", "tsv"]);
    let out = stdout(&o);
    let names: std::collections::BTreeSet<&str> = out.lines().skip(1).filter_map(|l| l.split('\t').next()).collect();
    assert!(!names.is_empty());
    assert!(names.iter().all(|n| n.starts_with("thm29")), "{names:?}");
    assert_eq!(run(&["corpus", "--case", "no-such-case"]).status.code(), Some(3));
}

#[test]
fn missing_fixture_is_reported_and_others_still_run() {
    let dir = scratch_dir("missing");
    std::fs::write(
        dir.join("c.toml"),
        r#"[[case]]
name = "gone"
kind = "betti"
ideal = "nowhere.id"
expect = [{ key = "beta_1_2", value = 3, provenance = "DERIVED" }]

[[case]]
name = "present"
kind = "betti"
variety = "rnc:3"
expect = [{ key = "beta_1_2", value = 3, provenance = "DERIVED" }]

[[case]]
name = "uncited"
kind = "betti"
variety = "rnc:3"
expect = [{ key = "beta_1_2", value = 3, provenance = "PAPER" }]
"#,
    )
    .unwrap();
    let o = run(&["corpus", "--fixtures", dir.to_str().unwrap(), "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(4));
    let out = stdout(&o);
    assert!(out.contains("gone\t-\t-\t-\t-\terror: missing fixture"), "{out}");
    assert!(out.contains("present\t*\t-\t-\t-\tpass"), "{out}");
    assert!(out.contains("uncited\t-\t-\t-\t-\terror: bad fixture: PAPER value"), "{out}");
}

#[test]
fn shipped_fixtures_are_well_formed() {
    let cases = load_cases(&default_fixture_dir()).unwrap();
    assert!(cases.len() >= 20);
    let mut names = std::collections::BTreeSet::new();
    for (_, c) in &cases {
        assert!(names.insert(c.name.clone()), "duplicate case {}", c.name);
        c.validate().unwrap_or_else(|e| panic!("{}: {e}", c.name));
        for e in &c.expect {
            if e.provenance == Provenance::Paper {
                assert!(e.citation.as_deref().is_some_and(|s| !s.is_empty()));
            }
        }
    }
    assert!(cases.iter().any(|(_, c)| c.long), "the long case is gated, not absent");
    for g in ["s114-all", "thm29"] {
        assert!(cases.iter().any(|(_, c)| c.groups.iter().any(|x| x == g)), "{g}");
    }
}

#[test]
fn s114_strata_replay() {
    let o = run(&["corpus", "--case", "s114-all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 5);
}
