//! Symbolic Brauer classes on `U = X \ Z`, evaluation at points, residues
//! along the boundary, and the two comparison harnesses.
//!
//! A [`ClassExpr`] is a formal sum of symbol algebras `(f, g)_n`, unramified
//! cups `[f]_n ∪ χ^k` with `χ` the Frobenius character, and constant
//! classes from `Br(Q_p)`. Evaluation at `u in U(Q_p)` goes through the
//! p-adic values `f(u), g(u)`; residues go through the factorization of
//! `f, g` over the boundary. The harnesses compare the two routes.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::arith::{gcd, inv_mod, is_prime, lcm, mul_mod, pow_mod, primitive_root};
use crate::localfield::PAdicError;
use crate::poly::Poly;
use crate::scheme::{
    eval_poly, strong_equiv, BoundaryCause, Component, IntersectionData, OPoint, SchemeError,
    SchemeModel,
};
use crate::symbols::{
    hilbert_symbol, norm_residue_invariant, residue_character_index, BrauerInvariant, SymbolError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BrauerError {
    #[error("order must be positive")]
    ZeroOrder,
    #[error("p = {p} divides n = {n}")]
    PDividesN { p: u64, n: u64 },
    #[error("class polynomial has {got} variables, model has {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("class entry is not invertible on the complement of the boundary")]
    NonFactorable,
    #[error("constant class is ramified along the special fibre, which is not in the boundary")]
    RamifiedOffBoundary,
    #[error("residue function vanishes or has a pole at the reduction on {0:?}")]
    ResidueFunctionVanishes(Component),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("an odd prime is required, got {0}")]
    NotOddPrime(u64),
    #[error(transparent)]
    Scheme(SchemeError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

impl From<SchemeError> for BrauerError {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::NonFactorable => BrauerError::NonFactorable,
            other => BrauerError::Scheme(other),
        }
    }
}

impl From<PAdicError> for BrauerError {
    fn from(e: PAdicError) -> Self {
        BrauerError::Symbol(e.into())
    }
}

impl BrauerError {
    /// True when the failure is a p-adic precision shortfall.
    pub fn is_precision_exhausted(&self) -> bool {
        matches!(
            self,
            BrauerError::Symbol(SymbolError::PrecisionExhausted)
                | BrauerError::Scheme(SchemeError::PAdic(PAdicError::PrecisionExhausted))
                | BrauerError::Scheme(SchemeError::PointOnBoundaryGenerically {
                    cause: BoundaryCause::PrecisionExhausted,
                    ..
                })
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassExpr {
    /// The quaternion algebra `(f, g)_{-1}`.
    Quaternion(Poly, Poly),
    /// The degree-`n` cyclic algebra of `f, g`, via the norm from `Q_p(zeta_n)`.
    Cyclic(Poly, Poly, u64),
    /// `[f]_n ∪ k·χ` with `χ` the unramified character sending Frobenius to `1/n`.
    CupUnram(Poly, u64, u64),
    /// A constant class of `Br(Q_p)`.
    ConstantInv(BrauerInvariant),
    /// Formal sum.
    Product(Vec<ClassExpr>),
}

impl ClassExpr {
    /// Orders `n` of every symbol and constant in the expression.
    pub fn orders(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.collect_orders(&mut out);
        out
    }

    fn collect_orders(&self, out: &mut Vec<u64>) {
        match self {
            ClassExpr::Quaternion(..) => out.push(2),
            ClassExpr::Cyclic(_, _, n) | ClassExpr::CupUnram(_, n, _) => out.push(*n),
            ClassExpr::ConstantInv(q) => out.push(q.order()),
            ClassExpr::Product(parts) => parts.iter().for_each(|c| c.collect_orders(out)),
        }
    }

    /// Checks orders and that every entry is a unit on `U`.
    pub fn validate(&self, model: &SchemeModel) -> Result<(), BrauerError> {
        let p = model.p();
        let check_poly = |f: &Poly| -> Result<(), BrauerError> {
            if f.nvars() != model.dim() {
                return Err(BrauerError::ArityMismatch {
                    expected: model.dim(),
                    got: f.nvars(),
                });
            }
            model.factor(f)?;
            Ok(())
        };
        let check_order = |n: u64| -> Result<(), BrauerError> {
            match n {
                0 => Err(BrauerError::ZeroOrder),
                n if n % p == 0 => Err(BrauerError::PDividesN { p, n }),
                _ => Ok(()),
            }
        };
        match self {
            ClassExpr::Quaternion(f, g) => {
                check_order(2)?;
                check_poly(f)?;
                check_poly(g)
            }
            ClassExpr::Cyclic(f, g, n) => {
                check_order(*n)?;
                check_poly(f)?;
                check_poly(g)
            }
            ClassExpr::CupUnram(f, n, _) => {
                check_order(*n)?;
                check_poly(f)
            }
            ClassExpr::ConstantInv(_) => Ok(()),
            ClassExpr::Product(parts) => parts.iter().try_for_each(|c| c.validate(model)),
        }
    }
}

fn write_poly_prefix(f: &mut fmt::Formatter<'_>, poly: &Poly) -> fmt::Result {
    fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
        if c.is_integer() {
            write!(f, "{}", c.numer())
        } else {
            write!(f, "{}/{}", c.numer(), c.denom())
        }
    }
    fn write_term(f: &mut fmt::Formatter<'_>, mono: &[u32], c: &BigRational) -> fmt::Result {
        let factors: Vec<(usize, u32)> = mono
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i, e))
            .collect();
        let write_factor = |f: &mut fmt::Formatter<'_>, (i, e): (usize, u32)| {
            if e == 1 {
                write!(f, "x{}", i + 1)
            } else {
                write!(f, "(^ x{} {})", i + 1, e)
            }
        };
        if factors.is_empty() {
            return write_rational(f, c);
        }
        if c.is_one() && factors.len() == 1 {
            return write_factor(f, factors[0]);
        }
        write!(f, "(*")?;
        if !c.is_one() {
            write!(f, " ")?;
            write_rational(f, c)?;
        }
        for fac in factors {
            write!(f, " ")?;
            write_factor(f, fac)?;
        }
        write!(f, ")")
    }
    let terms: Vec<_> = poly.terms().collect();
    match terms.len() {
        0 => write!(f, "0"),
        1 => write_term(f, terms[0].0, terms[0].1),
        _ => {
            write!(f, "(+")?;
            for (m, c) in terms {
                write!(f, " ")?;
                write_term(f, m, c)?;
            }
            write!(f, ")")
        }
    }
}

/// Prints the s-expression form read by scenario files.
impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Quaternion(a, b) => {
                write!(f, "(quat ")?;
                write_poly_prefix(f, a)?;
                write!(f, " ")?;
                write_poly_prefix(f, b)?;
                write!(f, ")")
            }
            ClassExpr::Cyclic(a, b, n) => {
                write!(f, "(cyclic ")?;
                write_poly_prefix(f, a)?;
                write!(f, " ")?;
                write_poly_prefix(f, b)?;
                write!(f, " {n})")
            }
            ClassExpr::CupUnram(a, n, k) => {
                write!(f, "(cup-unram ")?;
                write_poly_prefix(f, a)?;
                write!(f, " {n} {k})")
            }
            ClassExpr::ConstantInv(q) => write!(f, "(const {} {})", q.numerator(), q.order()),
            ClassExpr::Product(parts) => {
                write!(f, "(prod")?;
                for c in parts {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// `u*(expr)` in `Br(Q_p)`, for `x` off the boundary.
pub fn evaluate(
    expr: &ClassExpr,
    model: &SchemeModel,
    x: &OPoint,
) -> Result<BrauerInvariant, BrauerError> {
    expr.validate(model)?;
    model.intersection_data(x)?;
    evaluate_unchecked(expr, x)
}

fn evaluate_unchecked(expr: &ClassExpr, x: &OPoint) -> Result<BrauerInvariant, BrauerError> {
    match expr {
        ClassExpr::Quaternion(f, g) => Ok(hilbert_symbol(&eval_poly(f, x)?, &eval_poly(g, x)?)?),
        ClassExpr::Cyclic(f, g, n) => Ok(norm_residue_invariant(
            &eval_poly(f, x)?,
            &eval_poly(g, x)?,
            *n,
        )?),
        ClassExpr::CupUnram(f, n, k) => {
            let v = eval_poly(f, x)?.valuation()?;
            let kv = (*k % *n) as i128 * v as i128;
            Ok(BrauerInvariant::new(kv.rem_euclid(*n as i128) as i64, *n))
        }
        ClassExpr::ConstantInv(q) => Ok(*q),
        ClassExpr::Product(parts) => parts.iter().try_fold(BrauerInvariant::ZERO, |acc, c| {
            Ok(acc + evaluate_unchecked(c, x)?)
        }),
    }
}

/// `±unit * p^p_exponent * prod f_j^e_j` restricted to one component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueFunction {
    pub negate: bool,
    pub unit: BigRational,
    pub p_exponent: i64,
    /// `(horizontal index, exponent)`, never the component itself.
    pub factors: Vec<(usize, i64)>,
}

impl ResidueFunction {
    fn rational_mod_p(c: &BigRational, p: u64) -> Option<u64> {
        let pb = BigInt::from(p);
        let reduce = |n: &BigInt| ((n % &pb + &pb) % &pb).to_u64();
        let d = inv_mod(reduce(c.denom())?, p)?;
        let v = mul_mod(reduce(c.numer())?, d, p);
        (v != 0).then_some(v)
    }

    /// Value at `reduction` on `component`, or `None` if zero or infinite there.
    pub fn value_at(
        &self,
        model: &SchemeModel,
        component: Component,
        reduction: &[u64],
    ) -> Option<u64> {
        let p = model.p();
        if self.p_exponent != 0 {
            return None;
        }
        let mut acc = ResidueFunction::rational_mod_p(&self.unit, p)?;
        for &(j, e) in &self.factors {
            debug_assert_ne!(Component::Horizontal(j), component);
            let v = model.horizontal()[j].eval_mod_p(reduction, p)?;
            if v == 0 {
                return None;
            }
            let base = if e < 0 { inv_mod(v, p)? } else { v };
            acc = mul_mod(acc, pow_mod(base, e.unsigned_abs(), p), p);
        }
        Some(if self.negate { (p - acc) % p } else { acc })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueKind {
    /// Tame residue of a symbol with vanishing orders `(a, b)` along the component.
    Tame {
        exponents: (i64, i64),
        function: ResidueFunction,
    },
    /// Constant character, given by its value on Frobenius.
    Unramified(BrauerInvariant),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueDescriptor {
    pub p: u64,
    pub component: Component,
    pub order: u64,
    pub kind: ResidueKind,
}

/// Residues of `expr` along the boundary components it meets.
pub fn residues(
    expr: &ClassExpr,
    model: &SchemeModel,
) -> Result<Vec<ResidueDescriptor>, BrauerError> {
    expr.validate(model)?;
    let mut out = Vec::new();
    collect_residues(expr, model, &mut out)?;
    Ok(out)
}

fn collect_residues(
    expr: &ClassExpr,
    model: &SchemeModel,
    out: &mut Vec<ResidueDescriptor>,
) -> Result<(), BrauerError> {
    let p = model.p();
    match expr {
        ClassExpr::Quaternion(f, g) => tame_residues(f, g, 2, model, out),
        ClassExpr::Cyclic(f, g, n) => tame_residues(f, g, *n, model, out),
        ClassExpr::CupUnram(f, n, k) => {
            let fac = model.factor(f)?;
            for component in model.components() {
                let a = fac.order_along(component);
                if a != 0 {
                    let kk = (*k % *n) as i128 * a as i128;
                    out.push(ResidueDescriptor {
                        p,
                        component,
                        order: *n,
                        kind: ResidueKind::Unramified(BrauerInvariant::new(
                            kk.rem_euclid(*n as i128) as i64,
                            *n,
                        )),
                    });
                }
            }
            Ok(())
        }
        ClassExpr::ConstantInv(q) => {
            if q.is_zero() {
                return Ok(());
            }
            if !model.include_vertical() {
                return Err(BrauerError::RamifiedOffBoundary);
            }
            out.push(ResidueDescriptor {
                p,
                component: Component::Vertical,
                order: q.order(),
                kind: ResidueKind::Unramified(*q),
            });
            Ok(())
        }
        ClassExpr::Product(parts) => parts
            .iter()
            .try_for_each(|c| collect_residues(c, model, out)),
    }
}

fn rational_pow(c: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { c.recip() } else { c.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

fn tame_residues(
    f: &Poly,
    g: &Poly,
    n: u64,
    model: &SchemeModel,
    out: &mut Vec<ResidueDescriptor>,
) -> Result<(), BrauerError> {
    let ff = model.factor(f)?;
    let gf = model.factor(g)?;
    for component in model.components() {
        let (a, b) = (ff.order_along(component), gf.order_along(component));
        if a == 0 && b == 0 {
            continue;
        }
        let unit = rational_pow(&ff.unit, b) * rational_pow(&gf.unit, -a);
        let factors = (0..model.horizontal().len())
            .filter(|&j| Component::Horizontal(j) != component)
            .map(|j| (j, ff.exponents[j] as i64 * b - gf.exponents[j] as i64 * a))
            .filter(|&(_, e)| e != 0)
            .collect();
        out.push(ResidueDescriptor {
            p: model.p(),
            component,
            order: n,
            kind: ResidueKind::Tame {
                exponents: (a, b),
                function: ResidueFunction {
                    negate: (a * b).rem_euclid(2) == 1,
                    unit,
                    p_exponent: ff.p_exponent * b - gf.p_exponent * a,
                    factors,
                },
            },
        });
    }
    Ok(())
}

/// Pull a residue back along the point with intersection data `data`.
///
/// A tame residue of order `n` with `gcd(n, p - 1) = 1` pulls back to `0`
/// without evaluating: its transfer to `F_p` lands in `H^1(F_p, mu_n) = 0`.
pub fn pullback_residue(
    rd: &ResidueDescriptor,
    model: &SchemeModel,
    data: &IntersectionData,
) -> Result<BrauerInvariant, BrauerError> {
    match &rd.kind {
        ResidueKind::Unramified(q) => Ok(*q),
        ResidueKind::Tame { function, .. } => {
            if gcd(rd.order, rd.p - 1) == 1 {
                return Ok(BrauerInvariant::ZERO);
            }
            let t = function
                .value_at(model, rd.component, &data.reduction)
                .ok_or(BrauerError::ResidueFunctionVanishes(rd.component))?;
            let k = residue_character_index(rd.p, t, rd.order)?;
            Ok(BrauerInvariant::new(k as i64, rd.order))
        }
    }
}

/// Both routes around the residue diagram, as classes mod `modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramReport {
    pub modulus: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub equal: bool,
}

/// Compare `n * inv(u*(expr))` with `sum_i m_i * x_i^* res_i(expr)`.
pub fn check_residue_diagram(
    expr: &ClassExpr,
    model: &SchemeModel,
    x: &OPoint,
) -> Result<DiagramReport, BrauerError> {
    let p = model.p();
    if !model.include_vertical() {
        return Err(BrauerError::HypothesisViolated(String::from(
            "the special fibre must be a boundary component",
        )));
    }
    let orders = expr.orders();
    for &n in &orders {
        if n % p == 0 || gcd(n, p - 1) != 1 {
            return Err(BrauerError::HypothesisViolated(alloc::format!(
                "need gcd(n, p) = gcd(n, p - 1) = 1, got n = {n}, p = {p}"
            )));
        }
    }
    let lhs = evaluate(expr, model, x)?;
    let data = model.intersection_data(x)?;
    let mut rhs = BrauerInvariant::ZERO;
    for rd in residues(expr, model)? {
        let m = data
            .multiplicity(rd.component)
            .expect("descriptor components come from the model");
        rhs = rhs + pullback_residue(&rd, model, &data)?.scale(m as i64);
    }
    let modulus = orders.iter().fold(1, |acc, &n| lcm(acc, n));
    let lhs = lhs
        .class_mod(modulus)
        .expect("evaluation is killed by the orders");
    let rhs = rhs
        .class_mod(modulus)
        .expect("residues are killed by the orders");
    Ok(DiagramReport {
        modulus,
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

/// Classes on `G_m` whose evaluations separate `v p^l` for `|l| <= l_bound`.
///
/// `CupUnram(X, n, 1)` reads `l mod n` with `n > 2 l_bound`,
/// `Cyclic(X, w, p - 1)` reads `l mod (p - 1)`, and `Cyclic(X, p, p - 1)`
/// reads the unit residue through `(-1)^l v mod p`.
pub fn spanning_classes(p: u64, l_bound: u64) -> Result<Vec<ClassExpr>, BrauerError> {
    if p == 2 || !is_prime(p) {
        return Err(BrauerError::NotOddPrime(p));
    }
    let n = (2 * l_bound + 1..)
        .find(|n| n % p != 0)
        .expect("unbounded range");
    let x = Poly::var(1, 0);
    let w = Poly::int(1, primitive_root(p) as i64);
    let pp = Poly::int(1, p as i64);
    Ok(alloc::vec![
        ClassExpr::CupUnram(x.clone(), n, 1),
        ClassExpr::Cyclic(x.clone(), w, p - 1),
        ClassExpr::Cyclic(x, pp, p - 1),
    ])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub strong_equiv: bool,
    /// `(u1*(c), u2*(c))` per class.
    pub evaluations: Vec<(BrauerInvariant, BrauerInvariant)>,
    /// Classes whose evaluations differ although the data agree.
    pub violations: Vec<usize>,
}

/// Evaluate every class at both points; flag disagreements under equal data.
pub fn compare_evaluations(
    model: &SchemeModel,
    x1: &OPoint,
    x2: &OPoint,
    classes: &[ClassExpr],
) -> Result<EquivalenceReport, BrauerError> {
    let d1 = model.intersection_data(x1)?;
    let d2 = model.intersection_data(x2)?;
    let same = strong_equiv(&d1, &d2);
    let mut evaluations = Vec::with_capacity(classes.len());
    let mut violations = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        c.validate(model)?;
        let e1 = evaluate_unchecked(c, x1)?;
        let e2 = evaluate_unchecked(c, x2)?;
        if same && e1 != e2 {
            violations.push(i);
        }
        evaluations.push((e1, e2));
    }
    Ok(EquivalenceReport {
        strong_equiv: same,
        evaluations,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(1, 0)
    }

    fn c(v: i64) -> Poly {
        Poly::int(1, v)
    }

    fn pt(p: u64, v: i64) -> OPoint {
        OPoint::from_ints(p, 32, &[v]).unwrap()
    }

    #[test]
    fn counterexample_values() {
        let m = SchemeModel::multiplicative_group(7).unwrap();
        let q = ClassExpr::Quaternion(c(7), x());
        assert_eq!(evaluate(&q, &m, &pt(7, 7)), Ok(BrauerInvariant::new(1, 2)));
        assert_eq!(evaluate(&q, &m, &pt(7, -7)), Ok(BrauerInvariant::ZERO));
    }

    #[test]
    fn cup_unram_values() {
        let m = SchemeModel::multiplicative_group(5).unwrap();
        let e = ClassExpr::CupUnram(x(), 7, 3);
        assert_eq!(
            evaluate(&e, &m, &pt(5, 2 * 125)),
            Ok(BrauerInvariant::new(9, 7))
        );
        assert_eq!(evaluate(&e, &m, &pt(5, 3)), Ok(BrauerInvariant::ZERO));
    }

    #[test]
    fn product_adds() {
        let m = SchemeModel::multiplicative_group(7).unwrap();
        let a = ClassExpr::Quaternion(c(7), x());
        let b = ClassExpr::ConstantInv(BrauerInvariant::new(1, 3));
        let prod = ClassExpr::Product(alloc::vec![a, b]);
        assert_eq!(
            evaluate(&prod, &m, &pt(7, 7)),
            Ok(BrauerInvariant::new(5, 6))
        );
    }

    #[test]
    fn validation() {
        let m = SchemeModel::multiplicative_group(5).unwrap();
        let bad = ClassExpr::Cyclic(x().add(&c(1)), x(), 3);
        assert_eq!(
            evaluate(&bad, &m, &pt(5, 5)),
            Err(BrauerError::NonFactorable)
        );
        let pn = ClassExpr::Cyclic(x(), c(2), 5);
        assert_eq!(
            evaluate(&pn, &m, &pt(5, 5)),
            Err(BrauerError::PDividesN { p: 5, n: 5 })
        );
        assert!(matches!(
            evaluate(&ClassExpr::Cyclic(x(), c(2), 4), &m, &pt(5, 0)),
            Err(BrauerError::Scheme(
                SchemeError::PointOnBoundaryGenerically { .. }
            ))
        ));
    }

    #[test]
    fn residues_of_cyclic() {
        let m = SchemeModel::multiplicative_group(5).unwrap();
        let rds = residues(&ClassExpr::Cyclic(c(5), x(), 3), &m).unwrap();
        assert_eq!(rds.len(), 2);
        let horizontal = &rds[0];
        assert_eq!(horizontal.component, Component::Horizontal(0));
        match &horizontal.kind {
            ResidueKind::Tame {
                exponents,
                function,
            } => {
                assert_eq!(*exponents, (0, 1));
                assert_eq!(function.p_exponent, 1);
                assert!(function.factors.is_empty());
            }
            _ => panic!("expected tame residue"),
        }
        let vertical = &rds[1];
        assert_eq!(vertical.component, Component::Vertical);
        match &vertical.kind {
            ResidueKind::Tame {
                exponents,
                function,
            } => {
                assert_eq!(*exponents, (1, 0));
                assert_eq!(function.factors, [(0, -1)]);
                assert!(!function.negate);
            }
            _ => panic!("expected tame residue"),
        }
        let unit = ClassExpr::Quaternion(c(2), c(3));
        assert!(residues(&unit, &m).unwrap().is_empty());
    }

    #[test]
    fn self_symbol_residue_is_sign() {
        let m = SchemeModel::multiplicative_group(7).unwrap();
        for rd in residues(&ClassExpr::Cyclic(x(), x(), 3), &m).unwrap() {
            match rd.kind {
                ResidueKind::Tame { function, .. } => {
                    assert!(function.factors.is_empty());
                    assert_eq!(function.p_exponent, 0);
                    assert!(function.unit.is_one());
                }
                _ => panic!("expected tame residue"),
            }
        }
    }

    #[test]
    fn pullback_examples() {
        let m = SchemeModel::multiplicative_group(7).unwrap();
        let data = m.intersection_data(&pt(7, 7)).unwrap();
        let rds = residues(&ClassExpr::Quaternion(c(7), x()), &m).unwrap();
        let vertical = rds
            .iter()
            .find(|r| r.component == Component::Vertical)
            .unwrap();
        assert_eq!(
            pullback_residue(vertical, &m, &data),
            Err(BrauerError::ResidueFunctionVanishes(Component::Vertical))
        );
        let one = ResidueDescriptor {
            p: 7,
            component: Component::Vertical,
            order: 3,
            kind: ResidueKind::Tame {
                exponents: (1, 0),
                function: ResidueFunction {
                    negate: false,
                    unit: BigRational::one(),
                    p_exponent: 0,
                    factors: Vec::new(),
                },
            },
        };
        assert_eq!(pullback_residue(&one, &m, &data), Ok(BrauerInvariant::ZERO));
    }

    #[test]
    fn diagram_examples() {
        let m = SchemeModel::multiplicative_group(5).unwrap();
        for (v, l) in [(1, 0), (2, 1), (3, 2), (4, 3)] {
            let x_pt = pt(5, v * 5i64.pow(l));
            for e in [
                ClassExpr::Cyclic(c(5), x(), 3),
                ClassExpr::CupUnram(x(), 3, 2),
                ClassExpr::Product(alloc::vec![
                    ClassExpr::CupUnram(x().mul(&c(5)), 3, 1),
                    ClassExpr::ConstantInv(BrauerInvariant::new(1, 3)),
                ]),
            ] {
                let r = check_residue_diagram(&e, &m, &x_pt).unwrap();
                assert!(r.equal, "{e} at {v}*5^{l}: {r:?}");
            }
        }
        let x_pt = pt(5, 5);
        assert!(matches!(
            check_residue_diagram(&ClassExpr::Cyclic(c(5), x(), 2), &m, &x_pt),
            Err(BrauerError::HypothesisViolated(_))
        ));
        let open = SchemeModel::new(5, 1, alloc::vec![x()], false).unwrap();
        assert!(matches!(
            check_residue_diagram(&ClassExpr::CupUnram(x(), 3, 1), &open, &x_pt),
            Err(BrauerError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn spanning_family() {
        let s = spanning_classes(5, 3).unwrap();
        assert!(s.contains(&ClassExpr::CupUnram(x(), 7, 1)));
        assert!(s.contains(&ClassExpr::Cyclic(x(), c(2), 4)));
        assert_eq!(
            spanning_classes(7, 3).unwrap()[0],
            ClassExpr::CupUnram(x(), 8, 1)
        );
        assert_eq!(spanning_classes(2, 3), Err(BrauerError::NotOddPrime(2)));
        let m = SchemeModel::multiplicative_group(5).unwrap();
        let cup = &s[0];
        assert_eq!(evaluate(cup, &m, &pt(5, 5)), Ok(BrauerInvariant::new(1, 7)));
        assert_eq!(
            evaluate(cup, &m, &pt(5, 25)),
            Ok(BrauerInvariant::new(2, 7))
        );
        let unit_reader = &s[2];
        assert_eq!(
            evaluate(unit_reader, &m, &pt(5, 5)),
            Ok(BrauerInvariant::new(1, 2))
        );
        assert_eq!(
            evaluate(unit_reader, &m, &pt(5, 10)),
            Ok(BrauerInvariant::new(3, 4))
        );
    }

    #[test]
    fn equivalence_check() {
        let m = SchemeModel::multiplicative_group(7).unwrap();
        let classes = spanning_classes(7, 3).unwrap();
        let r = compare_evaluations(&m, &pt(7, 7), &pt(7, 7 * 8), &classes).unwrap();
        assert!(r.strong_equiv);
        assert!(r.violations.is_empty());
        let q = [ClassExpr::Quaternion(c(7), x())];
        let r = compare_evaluations(&m, &pt(7, 7), &pt(7, -7), &q).unwrap();
        assert!(!r.strong_equiv);
        assert_eq!(
            r.evaluations[0],
            (BrauerInvariant::new(1, 2), BrauerInvariant::ZERO)
        );
    }

    #[test]
    fn display_is_sexpr() {
        let e = ClassExpr::Product(alloc::vec![
            ClassExpr::Cyclic(x(), x().add(&c(1)), 3),
            ClassExpr::CupUnram(x().pow(2).scale(&BigRational::from_integer(2.into())), 7, 1),
            ClassExpr::ConstantInv(BrauerInvariant::new(1, 2)),
        ]);
        assert_eq!(
            alloc::format!("{e}"),
            "(prod (cyclic x1 (+ 1 x1) 3) (cup-unram (* 2 (^ x1 2)) 7 1) (const 1 2))"
        );
    }
}
