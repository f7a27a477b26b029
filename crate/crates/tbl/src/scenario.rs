//! Scenario files.
//!
//! ```text
//! # G_m over Z_5
//! [field]
//! p = 5
//! precision = 32
//!
//! [scheme]
//! dim = 1
//! vertical = true
//! boundary = x1
//!
//! [classes]
//! class = (cyclic x1 2 4)
//!
//! [points]
//! point = 5
//! point = 10
//!
//! [options]
//! n = 3
//! samples = 100
//! seed = 7
//! residue_degree = 1
//! ```
//!
//! `boundary`, `class` and `point` may repeat. Everything after `#` is a
//! comment. Sections may come in any order; polynomials are read once `p`
//! and `dim` are known, and errors point at the offending line.

use num_rational::BigRational;
use num_traits::Zero;
use tbl_core::arith::is_prime;
use tbl_core::{ClassExpr, Poly, SchemeModel, DEFAULT_PRECISION};

use crate::syntax::{parse_class, parse_infix_poly, parse_point, parse_uint_list, Vars};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
}

fn parse_err(line: usize, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Parse {
        line,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub p: u64,
    pub precision: u32,
    pub model: SchemeModel,
    pub classes: Vec<ClassExpr>,
    pub points: Vec<Vec<BigRational>>,
    pub orders: Vec<u64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub residue_degree: u32,
}

impl Scenario {
    /// The seed from the command line, else from the file.
    pub fn require_seed(&self, cli: Option<u64>, command: &str) -> Result<u64, ScenarioError> {
        cli.or(self.seed).ok_or_else(|| {
            ScenarioError::Validation(format!(
                "`{command}` samples and needs a seed (--seed or [options] seed)"
            ))
        })
    }
}

#[derive(Default)]
struct Raw {
    p: Option<(usize, String)>,
    precision: Option<(usize, String)>,
    dim: Option<(usize, String)>,
    vertical: Option<(usize, String)>,
    boundary: Vec<(usize, String)>,
    classes: Vec<(usize, String)>,
    points: Vec<(usize, String)>,
    n: Option<(usize, String)>,
    samples: Option<(usize, String)>,
    seed: Option<(usize, String)>,
    residue_degree: Option<(usize, String)>,
}

const SECTIONS: [&str; 5] = ["field", "scheme", "classes", "points", "options"];

fn read_raw(text: &str) -> Result<Raw, ScenarioError> {
    let mut raw = Raw::default();
    let mut section: Option<&str> = None;
    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        let body = full.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| parse_err(line, "unterminated section header"))?
                .trim();
            section = Some(
                SECTIONS
                    .iter()
                    .copied()
                    .find(|s| *s == name)
                    .ok_or_else(|| parse_err(line, format!("unknown section `[{name}]`")))?,
            );
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| parse_err(line, "expected `key = value`"))?;
        let (key, value) = (key.trim(), (line, value.trim().to_string()));
        if value.1.is_empty() {
            return Err(parse_err(line, format!("`{key}` has no value")));
        }
        let sec = section.ok_or_else(|| parse_err(line, "key outside any section"))?;
        let once = |slot: &mut Option<(usize, String)>| -> Result<(), ScenarioError> {
            if slot.is_some() {
                return Err(parse_err(line, format!("`{key}` given twice")));
            }
            *slot = Some(value.clone());
            Ok(())
        };
        match (sec, key) {
            ("field", "p") => once(&mut raw.p)?,
            ("field", "precision") => once(&mut raw.precision)?,
            ("scheme", "dim") => once(&mut raw.dim)?,
            ("scheme", "vertical") => once(&mut raw.vertical)?,
            ("scheme", "boundary") => raw.boundary.push(value),
            ("classes", "class") => raw.classes.push(value),
            ("points", "point") => raw.points.push(value),
            ("options", "n") => once(&mut raw.n)?,
            ("options", "samples") => once(&mut raw.samples)?,
            ("options", "seed") => once(&mut raw.seed)?,
            ("options", "residue_degree") => once(&mut raw.residue_degree)?,
            _ => return Err(parse_err(line, format!("unknown key `{key}` in [{sec}]"))),
        }
    }
    Ok(raw)
}

fn number<T: std::str::FromStr>(
    slot: &Option<(usize, String)>,
    what: &str,
) -> Result<Option<T>, ScenarioError> {
    match slot {
        None => Ok(None),
        Some((line, v)) => v.parse().map(Some).map_err(|_| {
            parse_err(
                *line,
                format!("{what} must be a nonnegative integer, got `{v}`"),
            )
        }),
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let raw = read_raw(text)?;
    let p: u64 = number(&raw.p, "p")?
        .ok_or_else(|| ScenarioError::Validation("[field] p is required".into()))?;
    if !is_prime(p) {
        return Err(ScenarioError::Validation(format!("p = {p} is not prime")));
    }
    let precision = number(&raw.precision, "precision")?.unwrap_or(DEFAULT_PRECISION);
    if precision == 0 {
        return Err(ScenarioError::Validation(
            "precision must be positive".into(),
        ));
    }
    let dim: usize = number(&raw.dim, "dim")?.unwrap_or(1);
    if dim == 0 {
        return Err(ScenarioError::Validation("dim must be positive".into()));
    }
    let vertical = match &raw.vertical {
        None => true,
        Some((_, v)) if v == "true" => true,
        Some((_, v)) if v == "false" => false,
        Some((line, v)) => {
            return Err(parse_err(
                *line,
                format!("vertical must be true or false, got `{v}`"),
            ))
        }
    };
    let vars = Vars { dim, p };
    let boundary: Vec<Poly> = raw
        .boundary
        .iter()
        .map(|(line, v)| parse_infix_poly(v, &vars).map_err(|e| parse_err(*line, e)))
        .collect::<Result<_, _>>()?;
    let model = SchemeModel::new(p, dim, boundary, vertical)
        .map_err(|e| ScenarioError::Validation(e.to_string()))?;

    let orders = match &raw.n {
        None => Vec::new(),
        Some((line, v)) => parse_uint_list(v).map_err(|e| parse_err(*line, e))?,
    };
    if let Some(n) = orders.iter().find(|&&n| n % p == 0) {
        return Err(ScenarioError::Validation(format!(
            "n = {n} is not prime to p = {p}"
        )));
    }

    let mut classes = Vec::new();
    for (line, v) in &raw.classes {
        let c = parse_class(v, &vars).map_err(|e| parse_err(*line, e))?;
        c.validate(&model)
            .map_err(|e| ScenarioError::Validation(format!("line {line}: {e}")))?;
        classes.push(c);
    }

    let mut points = Vec::new();
    for (line, v) in &raw.points {
        let coords = parse_point(v).map_err(|e| parse_err(*line, e))?;
        if coords.len() != dim {
            return Err(parse_err(
                *line,
                format!("point has {} coordinates, dim is {dim}", coords.len()),
            ));
        }
        for c in &coords {
            if !tbl_core::localfield::is_p_integral(c, p) {
                return Err(ScenarioError::Validation(format!(
                    "line {line}: coordinate {c} is not {p}-integral"
                )));
            }
        }
        for (i, f) in model.horizontal().iter().enumerate() {
            if f.eval_rational(&coords).is_zero() {
                return Err(ScenarioError::Validation(format!(
                    "line {line}: point lies on boundary component {i}"
                )));
            }
        }
        points.push(coords);
    }

    let samples = number(&raw.samples, "samples")?;
    let seed = number(&raw.seed, "seed")?;
    let residue_degree = number(&raw.residue_degree, "residue_degree")?.unwrap_or(1);
    if residue_degree == 0 {
        return Err(ScenarioError::Validation(
            "residue_degree must be positive".into(),
        ));
    }
    Ok(Scenario {
        p,
        precision,
        model,
        classes,
        points,
        orders,
        samples,
        seed,
        residue_degree,
    })
}
