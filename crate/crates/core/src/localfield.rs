//! Finite-precision arithmetic in `Q_p`.
//!
//! A nonzero [`PAdic`] is stored as `p^valuation * unit` where `unit` is an
//! integer in `[1, p^precision)` coprime to `p`, known modulo `p^precision`.
//! Exact zero is a separate state, so a value whose digits all cancelled
//! (reported as [`PAdicError::PrecisionExhausted`]) is never confused with a
//! true zero.
//!
//! Values built from rationals also carry the exact rational they came from,
//! as long as every operation on the way had exact inputs. The witness is only
//! consulted to certify an exact zero; the digits themselves are always the
//! truncated ones.

use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PAdicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least one digit")]
    ZeroPrecision,
    #[error("denominator is divisible by p")]
    DenominatorDivisibleByP,
    #[error("division by zero")]
    DivisionByZero,
    #[error("p-adic precision exhausted")]
    PrecisionExhausted,
    #[error("value is exactly zero")]
    ExactZero,
    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Zero,
    Unit {
        valuation: i64,
        unit: BigUint,
        precision: u32,
    },
}

/// A p-adic number at finite precision.
#[derive(Debug, Clone)]
pub struct PAdic {
    p: u64,
    repr: Repr,
    exact: Option<BigRational>,
}

impl PartialEq for PAdic {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.repr == other.repr
    }
}

impl Eq for PAdic {}

pub(crate) fn p_pow(p: u64, k: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), k as usize)
}

/// `(v_p(n), n / p^v)` for nonzero `n`.
pub(crate) fn split_p(n: &BigInt, p: u64) -> (u32, BigInt) {
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

fn reduce(n: &BigInt, modulus: &BigUint) -> BigUint {
    let m = BigInt::from_biguint(Sign::Plus, modulus.clone());
    n.mod_floor(&m)
        .to_biguint()
        .expect("mod_floor is nonnegative")
}

fn check_prime(p: u64) -> Result<(), PAdicError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(PAdicError::NotPrime(p))
    }
}

impl PAdic {
    /// Exact zero over `p`.
    pub fn zero(p: u64) -> Result<Self, PAdicError> {
        check_prime(p)?;
        Ok(PAdic {
            p,
            repr: Repr::Zero,
            exact: Some(BigRational::zero()),
        })
    }

    /// Canonical `(valuation, unit mod p^precision)` form of a rational
    /// whose denominator is prime to `p`.
    pub fn new(p: u64, precision: u32, value: &BigRational) -> Result<Self, PAdicError> {
        Self::build(p, precision, value, false)
    }

    /// Like [`PAdic::new`] but also accepts p-powers in the denominator.
    pub fn from_rational(p: u64, precision: u32, value: &BigRational) -> Result<Self, PAdicError> {
        Self::build(p, precision, value, true)
    }

    pub fn from_int(p: u64, precision: u32, value: i64) -> Result<Self, PAdicError> {
        Self::new(
            p,
            precision,
            &BigRational::from_integer(BigInt::from(value)),
        )
    }

    pub fn from_bigint(p: u64, precision: u32, value: &BigInt) -> Result<Self, PAdicError> {
        Self::new(p, precision, &BigRational::from_integer(value.clone()))
    }

    fn build(
        p: u64,
        precision: u32,
        value: &BigRational,
        allow_p_denominator: bool,
    ) -> Result<Self, PAdicError> {
        check_prime(p)?;
        if precision == 0 {
            return Err(PAdicError::ZeroPrecision);
        }
        if value.is_zero() {
            return Self::zero(p);
        }
        let (vn, num) = split_p(value.numer(), p);
        let (vd, den) = split_p(value.denom(), p);
        if vd > 0 && !allow_p_denominator {
            return Err(PAdicError::DenominatorDivisibleByP);
        }
        let modulus = p_pow(p, precision);
        let num = reduce(&num, &modulus);
        let den = reduce(&den, &modulus);
        let den_inv = den
            .modinv(&modulus)
            .expect("p-free denominator is invertible");
        let unit = (num * den_inv) % &modulus;
        Ok(PAdic {
            p,
            repr: Repr::Unit {
                valuation: vn as i64 - vd as i64,
                unit,
                precision,
            },
            exact: Some(value.clone()),
        })
    }

    /// A value known only through its digits, e.g. a sampled point.
    pub fn from_digits(
        p: u64,
        valuation: i64,
        unit: BigUint,
        precision: u32,
    ) -> Result<Self, PAdicError> {
        check_prime(p)?;
        if precision == 0 {
            return Err(PAdicError::ZeroPrecision);
        }
        let modulus = p_pow(p, precision);
        let unit = unit % &modulus;
        if (&unit % p).is_zero() {
            return Err(PAdicError::PrecisionExhausted);
        }
        Ok(PAdic {
            p,
            repr: Repr::Unit {
                valuation,
                unit,
                precision,
            },
            exact: None,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        self.repr == Repr::Zero
    }

    /// Relative precision in digits; `None` for exact zero.
    pub fn precision(&self) -> Option<u32> {
        match self.repr {
            Repr::Zero => None,
            Repr::Unit { precision, .. } => Some(precision),
        }
    }

    /// Exponent `k` such that the value is known modulo `p^k`; `None` for
    /// exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero => None,
            Repr::Unit {
                valuation,
                precision,
                ..
            } => Some(valuation + precision as i64),
        }
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn valuation(&self) -> Result<i64, PAdicError> {
        match self.repr {
            Repr::Zero => Err(PAdicError::ExactZero),
            Repr::Unit { valuation, .. } => Ok(valuation),
        }
    }

    /// The unit part modulo `p^precision`.
    pub fn unit(&self) -> Result<&BigUint, PAdicError> {
        match &self.repr {
            Repr::Zero => Err(PAdicError::ExactZero),
            Repr::Unit { unit, .. } => Ok(unit),
        }
    }

    /// The unit part reduced to `F_p^x`.
    pub fn unit_residue(&self) -> Result<u64, PAdicError> {
        let u = self.unit()?;
        Ok((u % self.p).to_u64().expect("residue fits in u64"))
    }

    /// Do the unit parts agree modulo `1 + pZ_p`?
    pub fn unit_class_equal(&self, other: &PAdic) -> Result<bool, PAdicError> {
        self.same_prime(other)?;
        Ok(self.unit_residue()? == other.unit_residue()?)
    }

    fn same_prime(&self, other: &PAdic) -> Result<(), PAdicError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(PAdicError::PrimeMismatch(self.p, other.p))
        }
    }

    fn combine_exact(
        &self,
        other: &PAdic,
        f: impl FnOnce(&BigRational, &BigRational) -> BigRational,
    ) -> Option<BigRational> {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(f(a, b)),
            _ => None,
        }
    }

    pub fn neg(&self) -> PAdic {
        let repr = match &self.repr {
            Repr::Zero => Repr::Zero,
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => Repr::Unit {
                valuation: *valuation,
                unit: p_pow(self.p, *precision) - unit,
                precision: *precision,
            },
        };
        PAdic {
            p: self.p,
            repr,
            exact: self.exact.as_ref().map(|e| -e),
        }
    }

    pub fn add(&self, other: &PAdic) -> Result<PAdic, PAdicError> {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &PAdic) -> Result<PAdic, PAdicError> {
        self.add_signed(other, true)
    }

    fn add_signed(&self, other: &PAdic, negate: bool) -> Result<PAdic, PAdicError> {
        self.same_prime(other)?;
        let rhs = if negate { other.neg() } else { other.clone() };
        let exact = self.combine_exact(&rhs, |a, b| a + b);
        let (la, ua, na, lb, ub, nb) = match (&self.repr, &rhs.repr) {
            (Repr::Zero, _) => return Ok(PAdic { exact, ..rhs }),
            (_, Repr::Zero) => {
                return Ok(PAdic {
                    exact,
                    ..self.clone()
                })
            }
            (
                Repr::Unit {
                    valuation: la,
                    unit: ua,
                    precision: na,
                },
                Repr::Unit {
                    valuation: lb,
                    unit: ub,
                    precision: nb,
                },
            ) => (*la, ua, *na, *lb, ub, *nb),
        };
        let p = self.p;
        let low = la.min(lb);
        let budget = (la + na as i64).min(lb + nb as i64) - low;
        let modulus = p_pow(p, budget as u32);
        let shifted = |l: i64, u: &BigUint| -> BigUint {
            let shift = l - low;
            if shift >= budget {
                BigUint::zero()
            } else {
                u * p_pow(p, shift as u32)
            }
        };
        let sum = (shifted(la, ua) + shifted(lb, ub)) % &modulus;
        if sum.is_zero() {
            return match exact {
                Some(e) if e.is_zero() => Self::zero(p),
                _ => Err(PAdicError::PrecisionExhausted),
            };
        }
        let (k, unit) = split_p(&BigInt::from(sum), p);
        let precision = (budget as u32 - k).min(na.min(nb));
        let unit = reduce(&unit, &p_pow(p, precision));
        Ok(PAdic {
            p,
            repr: Repr::Unit {
                valuation: low + k as i64,
                unit,
                precision,
            },
            exact,
        })
    }

    pub fn mul(&self, other: &PAdic) -> Result<PAdic, PAdicError> {
        self.same_prime(other)?;
        let exact = self.combine_exact(other, |a, b| a * b);
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Self::zero(self.p),
            (
                Repr::Unit {
                    valuation: la,
                    unit: ua,
                    precision: na,
                },
                Repr::Unit {
                    valuation: lb,
                    unit: ub,
                    precision: nb,
                },
            ) => {
                let precision = (*na).min(*nb);
                let unit = (ua * ub) % p_pow(self.p, precision);
                Ok(PAdic {
                    p: self.p,
                    repr: Repr::Unit {
                        valuation: la + lb,
                        unit,
                        precision,
                    },
                    exact,
                })
            }
        }
    }

    pub fn inv(&self) -> Result<PAdic, PAdicError> {
        match &self.repr {
            Repr::Zero => Err(PAdicError::DivisionByZero),
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => {
                let modulus = p_pow(self.p, *precision);
                let unit = unit.modinv(&modulus).expect("unit is invertible");
                Ok(PAdic {
                    p: self.p,
                    repr: Repr::Unit {
                        valuation: -valuation,
                        unit,
                        precision: *precision,
                    },
                    exact: self.exact.as_ref().map(|e| e.recip()),
                })
            }
        }
    }

    pub fn div(&self, other: &PAdic) -> Result<PAdic, PAdicError> {
        self.same_prime(other)?;
        if other.is_exact_zero() {
            return Err(PAdicError::DivisionByZero);
        }
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, exp: i64) -> Result<PAdic, PAdicError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = PAdic::from_int(self.p, self.precision().unwrap_or(1), 1)?;
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Decide `self ≡ other (mod p^k)` from the available digits.
    pub fn congruent_mod(&self, other: &PAdic, k: i64) -> Result<bool, PAdicError> {
        self.same_prime(other)?;
        match self.sub(other) {
            Ok(d) if d.is_exact_zero() => Ok(true),
            Ok(d) => Ok(d.valuation()? >= k),
            Err(PAdicError::PrecisionExhausted) => {
                let known = match (self.absolute_precision(), other.absolute_precision()) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => i64::MAX,
                };
                if known >= k {
                    Ok(true)
                } else {
                    Err(PAdicError::PrecisionExhausted)
                }
            }
            Err(e) => Err(e),
        }
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(e) = &self.exact {
            return write!(f, "{}", e);
        }
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => write!(
                f,
                "{}*{}^{} + O({}^{})",
                unit,
                self.p,
                valuation,
                self.p,
                valuation + *precision as i64
            ),
        }
    }
}

/// Is this rational in `Z_(p)` with nonnegative valuation?
pub fn is_p_integral(value: &BigRational, p: u64) -> bool {
    let pb = BigInt::from(p);
    value.is_zero() || !(value.denom().abs() % pb).is_zero()
}
