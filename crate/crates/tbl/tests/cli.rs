use std::path::PathBuf;
use std::process::{Command, Output};

fn tbl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tbl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenario(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "scenarios", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn summary(o: &Output) -> Vec<String> {
    stdout(o)
        .lines()
        .filter(|l| l.contains('\t'))
        .map(String::from)
        .collect()
}

fn temp_scenario(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("tbl-cli-{}-{name}.scn", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn every_repro_target_exits_zero() {
    for name in [
        "example-1-1",
        "example-1-2",
        "counterexample-s1",
        "example-1-4",
        "example-3-13",
        "remark-3-14",
    ] {
        let o = tbl(&["repro", name]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn counterexample_shows_both_invariants() {
    let o = tbl(&["repro", "counterexample-s1"]);
    let s = summary(&o);
    assert!(s.contains(&"QUAT[p=7].AT_P\t1/2".to_string()));
    assert!(s.contains(&"QUAT[p=7].AT_MINUS_P\t0".to_string()));
}

#[test]
fn kernel_and_converse_failure() {
    let s = summary(&tbl(&["repro", "example-3-13"]));
    assert!(s.contains(&"KERNEL[p=7,n=3].KERNEL\tZ/3".to_string()));
    let s = summary(&tbl(&["repro", "remark-3-14"]));
    assert!(s.contains(&"LINE.EVALUATIONS_EQUAL\ttrue".to_string()));
    assert!(s.contains(&"LINE.DATA_EQUAL\tfalse".to_string()));
}

#[test]
fn eval_and_intersect_on_bundled_scenario() {
    let o = tbl(&["eval", "--scenario", &scenario("counterexample-p7.scn")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(summary(&o).contains(&"EVAL[c0,x1]\t0".to_string()));
    let o = tbl(&[
        "intersect",
        "--scenario",
        &scenario("counterexample-p7.scn"),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn sampling_commands_are_seeded() {
    let path = scenario("diagram-p5-n3.scn");
    let a = tbl(&[
        "verify-thm16",
        "--scenario",
        &path,
        "--samples",
        "20",
        "--seed",
        "4",
    ]);
    let b = tbl(&[
        "verify-thm16",
        "--scenario",
        &path,
        "--samples",
        "20",
        "--seed",
        "4",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lo = tbl(&[
        "equiv",
        "--scenario",
        &scenario("equiv-line-p5.scn"),
        "--samples",
        "30",
        "--precision",
        "24",
    ]);
    let hi = tbl(&[
        "equiv",
        "--scenario",
        &scenario("equiv-line-p5.scn"),
        "--samples",
        "30",
        "--precision",
        "48",
    ]);
    assert_eq!(lo.status.code(), Some(0));
    assert_eq!(summary(&lo), summary(&hi));
}

#[test]
fn exit_codes() {
    assert_eq!(
        tbl(&["eval", "--scenario", "/nonexistent.scn"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(tbl(&["repro", "example-9-9"]).status.code(), Some(2));
    assert_eq!(tbl(&["frobnicate"]).status.code(), Some(2));

    let bad = temp_scenario("bad", "[field]\np = 5\n[scheme]\nboundary = x1 +\n");
    let o = tbl(&["eval", "--scenario", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    let unseeded = temp_scenario(
        "unseeded",
        "[field]\np = 5\n[scheme]\nboundary = x1\n[options]\nn = 3\n",
    );
    assert_eq!(
        tbl(&["equiv", "--scenario", &unseeded]).status.code(),
        Some(2)
    );

    let hypothesis = temp_scenario(
        "hyp",
        "[field]\np = 7\n[scheme]\nboundary = x1\n[options]\nn = 3\nseed = 1\n",
    );
    assert_eq!(
        tbl(&["verify-thm16", "--scenario", &hypothesis])
            .status
            .code(),
        Some(2)
    );

    // x1 = 1 + 5^12 meets x1 - 1 beyond three digits of precision
    let deep = temp_scenario(
        "deep",
        "[field]\np = 5\nprecision = 3\n[scheme]\nboundary = x1 - 1\n[points]\npoint = 244140626\n",
    );
    assert_eq!(
        tbl(&["intersect", "--scenario", &deep]).status.code(),
        Some(3)
    );
    assert_eq!(
        tbl(&["intersect", "--scenario", &deep, "--precision", "20"])
            .status
            .code(),
        Some(0)
    );
}
