//! Tame symbols, Hilbert and norm-residue symbols, and local invariants.
//!
//! The tame symbol of `a, b in Q_p^x` is the residue of
//! `(-1)^(v(a)v(b)) * a^v(b) * b^(-v(a))` in `F_p^x`. Degree-`n` invariants
//! are read off through the Kummer index of that residue inside
//! `F_p(zeta_n)` against the fixed root of unity of
//! [`RootsOfUnity`](crate::finitefield::RootsOfUnity). When `n` does not
//! divide `p - 1` this computes the invariant of the norm class through the
//! transfer to `F_p(zeta_n)`.

use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::arith::{gcd, inv_mod, is_square_mod, mul_mod, pow_mod};
use crate::finitefield::{FieldError, RootsOfUnity};
use crate::localfield::{PAdic, PAdicError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("symbol argument is exactly zero")]
    ExactZero,
    #[error("p-adic precision exhausted")]
    PrecisionExhausted,
    #[error("the Hilbert symbol formula needs an odd prime")]
    EvenP,
    #[error("p = {p} divides n = {n}")]
    PDividesN { p: u64, n: u64 },
    #[error("order must be positive")]
    ZeroOrder,
    #[error("zero residue has no Kummer class")]
    ZeroElement,
    #[error(transparent)]
    PAdic(PAdicError),
    #[error(transparent)]
    Field(FieldError),
}

impl From<PAdicError> for SymbolError {
    fn from(e: PAdicError) -> Self {
        match e {
            PAdicError::ExactZero => SymbolError::ExactZero,
            PAdicError::PrecisionExhausted => SymbolError::PrecisionExhausted,
            other => SymbolError::PAdic(other),
        }
    }
}

impl From<FieldError> for SymbolError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::PDividesN { p, n } => SymbolError::PDividesN { p, n },
            FieldError::ZeroElement => SymbolError::ZeroElement,
            other => SymbolError::Field(other),
        }
    }
}

/// An element of `Q/Z`, kept as a reduced fraction in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerInvariant {
    num: u64,
    den: u64,
}

impl BrauerInvariant {
    pub const ZERO: BrauerInvariant = BrauerInvariant { num: 0, den: 1 };

    /// `numerator / order` reduced into `[0, 1)`.
    pub fn new(numerator: i64, order: u64) -> Self {
        assert!(order > 0, "order must be positive");
        let num = numerator.rem_euclid(order as i64) as u64;
        let g = gcd(num, order);
        BrauerInvariant {
            num: num / g,
            den: order / g,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    /// Exact order in `Q/Z` (the reduced denominator).
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `n * self` as a class mod `n`, when `self` is `n`-torsion.
    pub fn class_mod(&self, n: u64) -> Option<u64> {
        n.is_multiple_of(self.den)
            .then(|| self.num * (n / self.den))
    }

    pub fn scale(&self, k: i64) -> Self {
        let num = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        BrauerInvariant::new(num as i64, self.den)
    }
}

impl Add for BrauerInvariant {
    type Output = BrauerInvariant;

    fn add(self, rhs: Self) -> Self {
        let den = self.den / gcd(self.den, rhs.den) * rhs.den;
        let num =
            self.num as u128 * (den / self.den) as u128 + rhs.num as u128 * (den / rhs.den) as u128;
        BrauerInvariant::new((num % den as u128) as i64, den)
    }
}

impl Neg for BrauerInvariant {
    type Output = BrauerInvariant;

    fn neg(self) -> Self {
        BrauerInvariant::new(-(self.num as i64), self.den)
    }
}

impl Sub for BrauerInvariant {
    type Output = BrauerInvariant;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl fmt::Display for BrauerInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `x^e mod p` for a unit `x` and any integer `e`.
pub(crate) fn unit_pow(x: u64, e: i64, p: u64) -> u64 {
    let base = if e < 0 {
        inv_mod(x, p).expect("unit residue is invertible")
    } else {
        x
    };
    // x^(p-1) = 1, so reduce the exponent first
    let m = e.unsigned_abs() % (p - 1).max(1);
    pow_mod(base, m, p)
}

/// The tame symbol `(a, b)` in `F_p^x`.
pub fn tame_symbol(a: &PAdic, b: &PAdic) -> Result<u64, SymbolError> {
    if a.p() != b.p() {
        return Err(PAdicError::PrimeMismatch(a.p(), b.p()).into());
    }
    let p = a.p();
    let (va, vb) = (a.valuation()?, b.valuation()?);
    let (ua, ub) = (a.unit_residue()?, b.unit_residue()?);
    Ok(tame_from_parts(p, va, ua, vb, ub))
}

/// Tame symbol from the decompositions `a = ua * p^va`, `b = ub * p^vb`.
pub fn tame_from_parts(p: u64, va: i64, ua: u64, vb: i64, ub: u64) -> u64 {
    let odd = va.rem_euclid(2) == 1 && vb.rem_euclid(2) == 1;
    let sign = if odd { p - 1 } else { 1 };
    let t = mul_mod(unit_pow(ua, vb, p), unit_pow(ub, -va, p), p);
    mul_mod(sign, t, p)
}

/// The quaternion Hilbert symbol `(a, b)_p` for odd `p`, as `0` or `1/2`.
pub fn hilbert_symbol(a: &PAdic, b: &PAdic) -> Result<BrauerInvariant, SymbolError> {
    if a.p() == 2 {
        return Err(SymbolError::EvenP);
    }
    let t = tame_symbol(a, b)?;
    Ok(if is_square_mod(t, a.p()) {
        BrauerInvariant::ZERO
    } else {
        BrauerInvariant::new(1, 2)
    })
}

fn check_order(p: u64, n: u64) -> Result<(), SymbolError> {
    if n == 0 {
        return Err(SymbolError::ZeroOrder);
    }
    if n.is_multiple_of(p) {
        return Err(SymbolError::PDividesN { p, n });
    }
    Ok(())
}

/// Invariant of the degree-`n` cyclic algebra of `a, b`.
pub fn norm_residue_invariant(
    a: &PAdic,
    b: &PAdic,
    n: u64,
) -> Result<BrauerInvariant, SymbolError> {
    check_order(a.p(), n)?;
    let roots = RootsOfUnity::new(a.p(), n)?;
    norm_residue_invariant_with(&roots, a, b)
}

/// [`norm_residue_invariant`] with a prebuilt `F_p(zeta_n)`.
pub fn norm_residue_invariant_with(
    roots: &RootsOfUnity,
    a: &PAdic,
    b: &PAdic,
) -> Result<BrauerInvariant, SymbolError> {
    let t = tame_symbol(a, b)?;
    let k = roots.kummer_index_of_prime_field(t)?;
    Ok(BrauerInvariant::new(k as i64, roots.n()))
}

/// Index in `Z/n` of the character attached to `t in F_p^x`.
pub fn residue_character_index(p: u64, t: u64, n: u64) -> Result<u64, SymbolError> {
    check_order(p, n)?;
    if t.is_multiple_of(p) {
        return Err(SymbolError::ZeroElement);
    }
    let roots = RootsOfUnity::new(p, n)?;
    Ok(roots.kummer_index_of_prime_field(t)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pa(p: u64, v: i64) -> PAdic {
        PAdic::from_int(p, 32, v).unwrap()
    }

    #[test]
    fn invariant_arithmetic() {
        let a = BrauerInvariant::new(2, 4);
        assert_eq!(a, BrauerInvariant::new(1, 2));
        assert_eq!(a + a, BrauerInvariant::ZERO);
        assert_eq!(
            BrauerInvariant::new(1, 3) + BrauerInvariant::new(1, 2),
            BrauerInvariant::new(5, 6)
        );
        assert_eq!(BrauerInvariant::new(-1, 3), BrauerInvariant::new(2, 3));
        assert_eq!(BrauerInvariant::new(1, 2).class_mod(6), Some(3));
        assert_eq!(BrauerInvariant::new(1, 4).class_mod(6), None);
        assert_eq!(alloc::format!("{}", BrauerInvariant::new(3, 6)), "1/2");
        assert_eq!(alloc::format!("{}", BrauerInvariant::new(6, 6)), "0");
    }

    #[test]
    fn tame_examples() {
        assert_eq!(tame_symbol(&pa(7, 7), &pa(7, 7)), Ok(6));
        assert_eq!(tame_symbol(&pa(7, 7), &pa(7, -7)), Ok(1));
        assert_eq!(tame_symbol(&pa(7, 3), &pa(7, 5)), Ok(1));
        assert_eq!(
            tame_symbol(&pa(7, 0), &pa(7, 5)),
            Err(SymbolError::ExactZero)
        );
        // a = 2 * 5, b = 3: (-1)^0 * 10^0 * 3^-1 = 2 mod 5
        assert_eq!(tame_symbol(&pa(5, 10), &pa(5, 3)), Ok(2));
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(
            hilbert_symbol(&pa(7, 7), &pa(7, 7)),
            Ok(BrauerInvariant::new(1, 2))
        );
        assert_eq!(
            hilbert_symbol(&pa(7, 7), &pa(7, -7)),
            Ok(BrauerInvariant::ZERO)
        );
        assert_eq!(
            hilbert_symbol(&pa(7, 21), &pa(7, 1)),
            Ok(BrauerInvariant::ZERO)
        );
        assert_eq!(
            hilbert_symbol(&pa(2, 3), &pa(2, 1)),
            Err(SymbolError::EvenP)
        );
    }

    #[test]
    fn norm_residue_examples() {
        let a = norm_residue_invariant(&pa(7, 7), &pa(7, 7), 2).unwrap();
        assert_eq!(a, hilbert_symbol(&pa(7, 7), &pa(7, 7)).unwrap());
        assert_eq!(
            norm_residue_invariant(&pa(7, 7), &pa(7, 3), 1),
            Ok(BrauerInvariant::ZERO)
        );
        assert_eq!(
            norm_residue_invariant(&pa(5, 7), &pa(5, 3), 10),
            Err(SymbolError::PDividesN { p: 5, n: 10 })
        );
    }

    #[test]
    fn character_index_examples() {
        assert_eq!(residue_character_index(7, 1, 2), Ok(0));
        assert_eq!(residue_character_index(7, 6, 2), Ok(1));
        assert_eq!(
            residue_character_index(7, 0, 2),
            Err(SymbolError::ZeroElement)
        );
        assert_eq!(
            residue_character_index(7, 3, 7),
            Err(SymbolError::PDividesN { p: 7, n: 7 })
        );
    }
}
