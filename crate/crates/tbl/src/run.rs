//! Subcommands over a parsed scenario.

use num_bigint::BigInt;
use num_rational::BigRational;
use tbl_core::arith::gcd;
use tbl_core::brauer::{check_residue_diagram, compare_evaluations, evaluate, BrauerError};
use tbl_core::finab::{
    leray_e2_orders, support_map_probe, FinAbError, SncConfig, SupportMapConfig,
};
use tbl_core::sample::Sampler;
use tbl_core::scheme::{Component, IntersectionData};
use tbl_core::{ClassExpr, OPoint, PAdicError, SchemeError, SchemeModel};

use crate::report::Report;
use crate::scenario::{Scenario, ScenarioError};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("p-adic precision exhausted: {0}")]
    Precision(String),
    #[error("assertion failed: {message}")]
    Assertion {
        message: String,
        report: Box<Report>,
    },
    #[error("{0}")]
    Computation(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Scenario(_) => 2,
            RunError::Precision(_) => 3,
            RunError::Assertion { .. } | RunError::Computation(_) => 1,
        }
    }
}

impl From<BrauerError> for RunError {
    fn from(e: BrauerError) -> Self {
        if e.is_precision_exhausted() {
            RunError::Precision(e.to_string())
        } else {
            RunError::Computation(e.to_string())
        }
    }
}

impl From<SchemeError> for RunError {
    fn from(e: SchemeError) -> Self {
        BrauerError::from(e).into()
    }
}

impl From<PAdicError> for RunError {
    fn from(e: PAdicError) -> Self {
        SchemeError::PAdic(e).into()
    }
}

impl From<FinAbError> for RunError {
    fn from(e: FinAbError) -> Self {
        RunError::Computation(e.to_string())
    }
}

/// Fail with the report attached unless `ok`.
pub fn ensure(ok: bool, message: impl Into<String>, report: &Report) -> Result<(), RunError> {
    if ok {
        Ok(())
    } else {
        Err(RunError::Assertion {
            message: message.into(),
            report: Box::new(report.clone()),
        })
    }
}

/// Command-line overrides.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub precision: Option<u32>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Eval,
    Intersect,
    Equiv,
    VerifyDiagram,
    Cohom,
}

pub const DEFAULT_SAMPLES: usize = 100;

pub fn run(cmd: Subcommand, scenario: &Scenario, opts: &RunOptions) -> Result<Report, RunError> {
    let precision = opts.precision.unwrap_or(scenario.precision);
    if precision == 0 {
        return Err(ScenarioError::Validation("precision must be positive".into()).into());
    }
    match cmd {
        Subcommand::Eval => eval(scenario, precision),
        Subcommand::Intersect => intersect(scenario, precision),
        Subcommand::Equiv => {
            let seed = scenario.require_seed(opts.seed, "equiv")?;
            equiv(scenario, precision, seed, samples(scenario, opts))
        }
        Subcommand::VerifyDiagram => {
            let seed = scenario.require_seed(opts.seed, "verify-thm16")?;
            verify_diagram(scenario, precision, seed, samples(scenario, opts))
        }
        Subcommand::Cohom => cohom(scenario),
    }
}

fn samples(scenario: &Scenario, opts: &RunOptions) -> usize {
    opts.samples.or(scenario.samples).unwrap_or(DEFAULT_SAMPLES)
}

pub fn describe_model(model: &SchemeModel) -> String {
    let mut parts: Vec<String> = model
        .horizontal()
        .iter()
        .map(|f| format!("V({f})"))
        .collect();
    if model.include_vertical() {
        parts.push(format!("V({})", model.p()));
    }
    if parts.is_empty() {
        parts.push("empty".into());
    }
    format!(
        "A^{} over Z_{}, boundary {}",
        model.dim(),
        model.p(),
        parts.join(" + ")
    )
}

fn header(report: &mut Report, scenario: &Scenario, precision: u32) {
    report.line(&format!("p = {}, precision = {precision}", scenario.p));
    report.line(&describe_model(&scenario.model));
    report.blank();
}

fn points(scenario: &Scenario, precision: u32) -> Result<Vec<OPoint>, RunError> {
    scenario
        .points
        .iter()
        .map(|c| Ok(OPoint::from_rationals(scenario.p, precision, c)?))
        .collect()
}

fn show_point(coords: &[BigRational]) -> String {
    let parts: Vec<String> = coords.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn component_name(c: Component) -> String {
    match c {
        Component::Horizontal(i) => format!("Z{i}"),
        Component::Vertical => "V(p)".into(),
    }
}

pub fn show_data(d: &IntersectionData) -> String {
    let red: Vec<String> = d.reduction.iter().map(ToString::to_string).collect();
    let mut out = format!("red=({})", red.join(","));
    for c in &d.components {
        out.push_str(&format!(
            ";{}:m={},r={}",
            component_name(c.component),
            c.multiplicity,
            c.residue
        ));
    }
    out
}

fn eval(scenario: &Scenario, precision: u32) -> Result<Report, RunError> {
    let mut report = Report::new("eval");
    header(&mut report, scenario, precision);
    let pts = points(scenario, precision)?;
    let mut headers = vec!["class".to_string(), "expression".to_string()];
    headers.extend((0..pts.len()).map(|j| format!("x{j}")));
    let mut rows = Vec::new();
    for (i, c) in scenario.classes.iter().enumerate() {
        let mut row = vec![format!("c{i}"), c.to_string()];
        for (j, x) in pts.iter().enumerate() {
            let v = evaluate(c, &scenario.model, x)?;
            report.kv(format!("EVAL[c{i},x{j}]"), v);
            row.push(v.to_string());
        }
        rows.push(row);
    }
    report.table(&headers, &rows);
    report.blank();
    for (j, c) in scenario.points.iter().enumerate() {
        report.line(&format!("x{j} = {}", show_point(c)));
    }
    Ok(report)
}

fn intersect(scenario: &Scenario, precision: u32) -> Result<Report, RunError> {
    let mut report = Report::new("intersect");
    header(&mut report, scenario, precision);
    let comps = scenario.model.components();
    let mut headers = vec![
        "point".to_string(),
        "coordinates".to_string(),
        "reduction".to_string(),
    ];
    headers.extend(
        comps
            .iter()
            .map(|&c| format!("{} (m, r)", component_name(c))),
    );
    let mut rows = Vec::new();
    for (j, (coords, x)) in scenario
        .points
        .iter()
        .zip(points(scenario, precision)?)
        .enumerate()
    {
        let d = scenario.model.intersection_data(&x)?;
        let red: Vec<String> = d.reduction.iter().map(ToString::to_string).collect();
        let mut row = vec![
            format!("x{j}"),
            show_point(coords),
            format!("({})", red.join(", ")),
        ];
        row.extend(
            d.components
                .iter()
                .map(|c| format!("({}, {})", c.multiplicity, c.residue)),
        );
        rows.push(row);
        report.kv(format!("INTERSECT[x{j}]"), show_data(&d));
    }
    report.table(&headers, &rows);
    for (i, f) in scenario.model.horizontal().iter().enumerate() {
        report.line(&format!("Z{i} = V({f})"));
    }
    Ok(report)
}

fn default_orders(p: u64) -> Vec<u64> {
    [2u64, 3, 4, 5].into_iter().filter(|n| n % p != 0).collect()
}

/// A second point congruent to `x` modulo `p^(M+1)`, `M` the largest multiplicity.
pub fn strong_neighbour(
    sampler: &mut Sampler,
    model: &SchemeModel,
    x: &OPoint,
    precision: u32,
) -> Result<OPoint, RunError> {
    let d = model.intersection_data(x)?;
    let max_m = d
        .components
        .iter()
        .map(|c| c.multiplicity)
        .max()
        .unwrap_or(0);
    let step = BigInt::from(model.p()).pow(max_m + 1);
    let coords: Vec<BigRational> = x
        .coords()
        .iter()
        .map(|c| {
            let base = c.exact_value().cloned().expect("sampled points are exact");
            let t = BigInt::from(sampler.below(model.p() * model.p()) + 1);
            base + BigRational::from_integer(&step * t)
        })
        .collect();
    Ok(OPoint::from_rationals(model.p(), precision, &coords)?)
}

pub const SAMPLE_DIGITS: u32 = 6;

fn equiv(
    scenario: &Scenario,
    precision: u32,
    seed: u64,
    samples: usize,
) -> Result<Report, RunError> {
    let model = &scenario.model;
    let p = scenario.p;
    let orders = if scenario.orders.is_empty() {
        default_orders(p)
    } else {
        scenario.orders.clone()
    };
    let mut report = Report::new("equiv");
    header(&mut report, scenario, precision);
    report.line(&format!(
        "seed = {seed}, samples = {samples}, orders = {orders:?}"
    ));
    let mut sampler = Sampler::new(seed);
    let (mut equivalent, mut random_strong, mut evaluations, mut violations) =
        (0usize, 0usize, 0usize, 0usize);
    let mut first_violation: Option<String> = None;
    let mut check = |x1: &OPoint, x2: &OPoint, classes: &[ClassExpr]| -> Result<bool, RunError> {
        let r = compare_evaluations(model, x1, x2, classes)?;
        evaluations += r.evaluations.len();
        violations += r.violations.len();
        if let (Some(&i), None) = (r.violations.first(), &first_violation) {
            first_violation = Some(format!(
                "class {} differs at a strong-equivalent pair",
                classes[i]
            ));
        }
        Ok(r.strong_equiv)
    };
    for _ in 0..samples {
        let x1 = sampler.point_off_boundary(model, precision, SAMPLE_DIGITS);
        let x2 = strong_neighbour(&mut sampler, model, &x1, precision)?;
        let mut classes = scenario.classes.clone();
        classes.extend((0..3).map(|_| sampler.class(model, &orders, p != 2)));
        if check(&x1, &x2, &classes)? {
            equivalent += 1;
        }
        let x3 = sampler.point_off_boundary(model, precision, SAMPLE_DIGITS);
        if check(&x1, &x3, &classes)? {
            random_strong += 1;
        }
    }
    let pts = points(scenario, precision)?;
    let mut rows = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let r = compare_evaluations(model, &pts[i], &pts[j], &scenario.classes)?;
            evaluations += r.evaluations.len();
            violations += r.violations.len();
            let agree = r.evaluations.iter().filter(|(a, b)| a == b).count();
            rows.push(vec![
                format!("x{i}, x{j}"),
                r.strong_equiv.to_string(),
                format!("{agree}/{}", r.evaluations.len()),
            ]);
            report.kv(
                format!("EQUIV[x{i},x{j}]"),
                format!(
                    "strong={};agree={agree}/{}",
                    r.strong_equiv,
                    r.evaluations.len()
                ),
            );
        }
    }
    if !rows.is_empty() {
        report.table(&["pair", "strong_equiv", "agreeing classes"], &rows);
    }
    report.kv("EQUIV_CONSTRUCTED_PAIRS", samples);
    report.kv("EQUIV_CONSTRUCTED_STRONG", equivalent);
    report.kv("EQUIV_RANDOM_PAIRS", samples);
    report.kv("EQUIV_RANDOM_STRONG", random_strong);
    report.kv("EQUIV_EVALUATIONS", evaluations);
    report.kv("EQUIV_VIOLATIONS", violations);
    ensure(
        equivalent == samples,
        "a constructed pair was not strong-equivalent",
        &report,
    )?;
    ensure(
        violations == 0,
        first_violation.unwrap_or_default(),
        &report,
    )?;
    Ok(report)
}

fn verify_diagram(
    scenario: &Scenario,
    precision: u32,
    seed: u64,
    samples: usize,
) -> Result<Report, RunError> {
    let model = &scenario.model;
    let p = scenario.p;
    let hypothesis = |n: u64| !n.is_multiple_of(p) && gcd(n, p - 1) == 1;
    if scenario.orders.is_empty() {
        return Err(ScenarioError::Validation("verify-thm16 needs [options] n".into()).into());
    }
    if let Some(n) = scenario.orders.iter().find(|&&n| !hypothesis(n)) {
        return Err(ScenarioError::Validation(format!(
            "n = {n} violates gcd(n, p - 1) = gcd(n, p) = 1 for p = {p}"
        ))
        .into());
    }
    if !model.include_vertical() {
        return Err(ScenarioError::Validation("verify-thm16 needs vertical = true".into()).into());
    }
    let mut report = Report::new("verify-thm16");
    header(&mut report, scenario, precision);
    report.line(&format!("seed = {seed}, samples per n = {samples}"));
    let mut sampler = Sampler::new(seed);
    let mut rows = Vec::new();
    let mut failures = 0usize;
    let mut first_failure = None;
    for &n in &scenario.orders {
        let mut fails = 0usize;
        for _ in 0..samples {
            let c = sampler.class(model, &[n], false);
            let x = sampler.point_off_boundary(model, precision, SAMPLE_DIGITS);
            let r = check_residue_diagram(&c, model, &x)?;
            if !r.equal {
                fails += 1;
                first_failure.get_or_insert_with(|| {
                    format!("{c}: lhs {} rhs {} mod {}", r.lhs, r.rhs, r.modulus)
                });
            }
        }
        rows.push(vec![n.to_string(), samples.to_string(), fails.to_string()]);
        report.kv(
            format!("DIAGRAM[n={n}]"),
            format!("checks={samples};failures={fails}"),
        );
        failures += fails;
    }
    let pts = points(scenario, precision)?;
    let mut fixed = 0usize;
    for (i, c) in scenario.classes.iter().enumerate() {
        if !c.orders().into_iter().all(hypothesis) {
            continue;
        }
        for (j, x) in pts.iter().enumerate() {
            let r = check_residue_diagram(c, model, x)?;
            fixed += 1;
            if !r.equal {
                failures += 1;
                first_failure.get_or_insert_with(|| format!("c{i} at x{j}"));
            }
            report.kv(
                format!("DIAGRAM[c{i},x{j}]"),
                format!("lhs={};rhs={};mod={}", r.lhs, r.rhs, r.modulus),
            );
        }
    }
    report.table(&["n", "checks", "failures"], &rows);
    report.kv("DIAGRAM_FIXED_CHECKS", fixed);
    report.kv("DIAGRAM_FAILURES", failures);
    ensure(failures == 0, first_failure.unwrap_or_default(), &report)?;
    Ok(report)
}

fn cohom(scenario: &Scenario) -> Result<Report, RunError> {
    let p = scenario.p;
    let k = scenario.residue_degree;
    let q = p
        .checked_pow(k)
        .ok_or_else(|| ScenarioError::Validation("p^residue_degree overflows".into()))?;
    let orders: Vec<u64> = if scenario.orders.is_empty() {
        (1..=12).filter(|n| n % p != 0).collect()
    } else {
        scenario.orders.clone()
    };
    let mut report = Report::new("cohom");
    report.line(&format!("p = {p}, residue degree = {k}, q = {q}"));
    report.line("two closed points over F_q; E2 terms for V(p) + V(x1) meeting in one point");
    report.blank();
    let mut rows = Vec::new();
    for &n in &orders {
        let probe = support_map_probe(p, n, &SupportMapConfig { residue_degree: k })?;
        let e2 = leray_e2_orders(&SncConfig::baby(q), n)?;
        rows.push(vec![
            n.to_string(),
            probe.g.to_string(),
            probe.source.to_string(),
            probe.kernel.to_string(),
            probe.injective.to_string(),
            probe.surjective.to_string(),
            e2.e02.to_string(),
            e2.e20.to_string(),
        ]);
        let key = |s: &str| format!("COHOM[n={n}].{s}");
        report.kv(key("G"), probe.g);
        report.kv(key("SUPPORTED"), &probe.source);
        report.kv(key("KERNEL"), &probe.kernel);
        report.kv(key("KERNEL_ORDER"), probe.kernel.order().unwrap_or(0));
        report.kv(key("INJECTIVE"), probe.injective);
        report.kv(key("SURJECTIVE"), probe.surjective);
        report.kv(key("E2_02"), e2.e02);
        report.kv(key("E2_20"), e2.e20);
    }
    report.table(
        &[
            "n",
            "g",
            "supported",
            "kernel",
            "injective",
            "surjective",
            "|E2^{0,2}|",
            "|E2^{2,0}|",
        ],
        &rows,
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    const GM: &str = "[field]\np = 7\n[scheme]\nboundary = x1\n[classes]\nclass = (quat p x1)\nclass = (cup-unram x1 8 1)\n[points]\npoint = 7\npoint = -7\npoint = 56\n[options]\nn = 2, 3\nseed = 11\nsamples = 20\n";

    #[test]
    fn eval_reports_counterexample() {
        let s = parse_scenario(GM).unwrap();
        let r = run(Subcommand::Eval, &s, &RunOptions::default()).unwrap();
        assert_eq!(r.get("EVAL[c0,x0]"), Some("1/2"));
        assert_eq!(r.get("EVAL[c0,x1]"), Some("0"));
        assert_eq!(r.get("EVAL[c1,x0]"), Some("1/8"));
    }

    #[test]
    fn intersect_reports_data() {
        let s = parse_scenario(GM).unwrap();
        let r = run(Subcommand::Intersect, &s, &RunOptions::default()).unwrap();
        assert_eq!(
            r.get("INTERSECT[x0]"),
            Some("red=(0);Z0:m=1,r=1;V(p):m=1,r=1")
        );
        assert_eq!(
            r.get("INTERSECT[x1]"),
            Some("red=(0);Z0:m=1,r=6;V(p):m=1,r=1")
        );
    }

    #[test]
    fn equiv_is_deterministic_and_clean() {
        let s = parse_scenario(GM).unwrap();
        let a = run(Subcommand::Equiv, &s, &RunOptions::default()).unwrap();
        let b = run(Subcommand::Equiv, &s, &RunOptions::default()).unwrap();
        assert_eq!(a.render(), b.render());
        assert_eq!(a.get("EQUIV_VIOLATIONS"), Some("0"));
        assert_eq!(a.get("EQUIV[x0,x2]"), Some("strong=true;agree=2/2"));
        assert_eq!(a.get("EQUIV[x0,x1]"), Some("strong=false;agree=1/2"));
    }

    #[test]
    fn diagram_hypothesis_is_enforced() {
        let s = parse_scenario(GM).unwrap();
        let err = run(Subcommand::VerifyDiagram, &s, &RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let ok = parse_scenario(
            "[field]\np = 5\n[scheme]\nboundary = x1\n[options]\nn = 3\nseed = 1\nsamples = 30\n",
        )
        .unwrap();
        let r = run(Subcommand::VerifyDiagram, &ok, &RunOptions::default()).unwrap();
        assert_eq!(r.get("DIAGRAM_FAILURES"), Some("0"));
    }

    #[test]
    fn sampling_needs_seed() {
        let s = parse_scenario("[field]\np = 5\n[scheme]\nboundary = x1\n").unwrap();
        let err = run(Subcommand::Equiv, &s, &RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn cohom_tables() {
        let s = parse_scenario("[field]\np = 7\n[options]\nn = 3\n").unwrap();
        let r = run(Subcommand::Cohom, &s, &RunOptions::default()).unwrap();
        assert_eq!(r.get("COHOM[n=3].KERNEL"), Some("Z/3"));
        assert_eq!(r.get("COHOM[n=3].INJECTIVE"), Some("false"));
        assert_eq!(r.get("COHOM[n=3].E2_02"), Some("3"));
    }
}
