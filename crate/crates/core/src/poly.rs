//! Sparse multivariate polynomials with rational coefficients.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::localfield::{split_p, PAdic, PAdicError};

type Monomial = Vec<u32>;

/// A polynomial in `nvars` variables `x1..xd`. Monomials are ordered
/// lexicographically with `x1 > x2 > ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Poly::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The variable `x_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut m = vec![0; nvars];
        m[index] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(m, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    /// The constant value if the polynomial has degree zero.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Highest power of `x_{index+1}` that occurs.
    pub fn degree_in(&self, index: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[index]).max()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(m.clone())
            .or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::int(self.nvars, 1);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder. Uses the lex-order division algorithm, which for a single
    /// divisor has zero remainder exactly when the divisor divides.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, divisor.nvars);
        let (dm, dc) = divisor.leading()?;
        let mut rest = self.clone();
        let mut quotient = Poly::zero(self.nvars);
        while let Some((m, c)) = rest.leading() {
            if m.iter().zip(dm).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Monomial = m.iter().zip(dm).map(|(a, b)| a - b).collect();
            let qc = c / dc;
            let mut t = Poly::zero(self.nvars);
            t.terms.insert(qm.clone(), qc.clone());
            quotient.add_term(qm, qc);
            rest = rest.sub(&t.mul(divisor));
        }
        Some(quotient)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Minimum p-adic valuation of the coefficients; `None` for zero.
    pub fn content_valuation(&self, p: u64) -> Option<i64> {
        self.terms
            .values()
            .map(|c| {
                let (vn, _) = split_p(c.numer(), p);
                let (vd, _) = split_p(c.denom(), p);
                vn as i64 - vd as i64
            })
            .min()
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                t *= num_traits::pow(x.clone(), e as usize);
            }
            acc += t;
        }
        acc
    }

    /// Evaluate at p-adic coordinates; coefficients are embedded at the
    /// smallest coordinate precision.
    pub fn eval_padic(&self, point: &[PAdic], p: u64, precision: u32) -> Result<PAdic, PAdicError> {
        assert_eq!(point.len(), self.nvars);
        let mut acc = PAdic::zero(p)?;
        for (m, c) in &self.terms {
            let mut t = PAdic::from_rational(p, precision, c)?;
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t = t.mul(&x.pow(e as i64)?)?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Value in `F_p` at a point of `F_p^d`; `None` if a coefficient has `p`
    /// in its denominator.
    pub fn eval_mod_p(&self, point: &[u64], p: u64) -> Option<u64> {
        assert_eq!(point.len(), self.nvars);
        let pb = BigInt::from(p);
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let den = (c.denom() % &pb + &pb) % &pb;
            let den = den.to_u64()?;
            let den_inv = crate::arith::inv_mod(den, p)?;
            let num = ((c.numer() % &pb + &pb) % &pb).to_u64()?;
            let mut t = crate::arith::mul_mod(num, den_inv, p);
            for (&x, &e) in point.iter().zip(m) {
                t = crate::arith::mul_mod(t, crate::arith::pow_mod(x, e as u64, p), p);
            }
            acc = (acc + t) % p;
        }
        Some(acc)
    }

    pub fn derivative(&self, index: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[index] == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[index] -= 1;
            out.add_term(dm, c * BigRational::from_integer(BigInt::from(m[index])));
        }
        out
    }

    /// Univariate remainder; both polynomials must be in one variable.
    fn rem_univariate(&self, divisor: &Poly) -> Poly {
        let (dm, dc) = divisor.leading().expect("nonzero divisor");
        let mut rest = self.clone();
        while let Some((m, c)) = rest.leading() {
            if m[0] < dm[0] {
                break;
            }
            let mut t = Poly::zero(1);
            t.terms.insert(vec![m[0] - dm[0]], c / dc);
            rest = rest.sub(&t.mul(divisor));
        }
        rest
    }

    /// Monic gcd of two univariate polynomials over `Q`.
    pub fn gcd_univariate(&self, other: &Poly) -> Poly {
        assert!(self.nvars == 1 && other.nvars == 1);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem_univariate(&b);
            a = b;
            b = r;
        }
        match a.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                a.scale(&inv)
            }
            None => a,
        }
    }

    /// Squarefree over `Q` (univariate only).
    pub fn is_squarefree_univariate(&self) -> bool {
        let g = self.gcd_univariate(&self.derivative(0));
        g.total_degree().unwrap_or(0) == 0
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &[u32]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "x{}", i + 1)?;
        if e > 1 {
            write!(f, "^{}", e)?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let constant = m.iter().all(|&e| e == 0);
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if constant {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}
