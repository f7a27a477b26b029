use std::fs;
use std::path::Path;

use tbl::{parse_scenario, run, RunOptions, Subcommand};

#[test]
fn bundled_scenarios_parse_and_evaluate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let s = parse_scenario(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        run(Subcommand::Eval, &s, &RunOptions::default()).unwrap();
        run(Subcommand::Intersect, &s, &RunOptions::default()).unwrap();
        seen += 1;
    }
    assert!(seen >= 8);
}

#[test]
fn documented_example_parses() {
    let text = "# G_m over Z_5\n[field]\np = 5\nprecision = 32\n\n[scheme]\ndim = 1\nvertical = true\nboundary = x1\n\n\
                [classes]\nclass = (cyclic x1 2 4)\n\n[points]\npoint = 5\npoint = 10\n\n\
                [options]\nn = 3\nsamples = 100\nseed = 7\nresidue_degree = 1\n";
    let s = parse_scenario(text).unwrap();
    assert_eq!(
        (s.p, s.points.len(), s.orders.as_slice(), s.seed),
        (5, 2, &[3u64][..], Some(7))
    );
    let r = run(Subcommand::Eval, &s, &RunOptions::default()).unwrap();
    assert!(r.get("EVAL[c0,x1]").is_some());
}

#[test]
fn two_variable_scenario() {
    let text = "[field]\np = 3\n[scheme]\ndim = 2\nboundary = x1 x2 - 1\n[classes]\nclass = (quat (+ (* x1 x2) -1) 2)\n\
                [points]\npoint = 2, 2\npoint = 4, 1/2\n";
    let s = parse_scenario(text).unwrap();
    let r = run(Subcommand::Intersect, &s, &RunOptions::default()).unwrap();
    assert_eq!(
        r.get("INTERSECT[x0]"),
        Some("red=(2,2);Z0:m=1,r=1;V(p):m=1,r=1")
    );
    assert_eq!(
        r.get("INTERSECT[x1]"),
        Some("red=(1,2);Z0:m=0,r=1;V(p):m=1,r=1")
    );
}
