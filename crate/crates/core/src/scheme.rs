//! Affine models `X = A^d_{Z_p}` with a boundary divisor `Z`, integral
//! points, and the intersection data of a point with `Z`.
//!
//! The boundary is the union of horizontal components `V(f_i)` and, when
//! enabled, the special fibre `V(p)`. For a point `x in X(Z_p)` whose
//! generic point avoids `Z`, the multiplicity of `Z_i` along `x` is
//! `ord_p(f_i(x))` (and `1` for `V(p)`).
//!
//! [`IntersectionData`] records the reduction `x mod p` together with each
//! component's multiplicity and the residue of the unit part of `f_i(x)`.
//! Equality of this data ([`strong_equiv`]) is a sufficient stand-in for
//! equality of the cycle classes of `Z ∩ x`; nothing here claims it is
//! necessary. The residues depend on the chosen equations `f_i`, but
//! replacing `f_i` by a unit multiple `c f_i` scales the residue of every
//! point with the same reduction by the same `c(x mod p)`, so the
//! predicate itself does not depend on the choice.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::is_prime;
use crate::localfield::{split_p, PAdic, PAdicError};
use crate::poly::Poly;
use crate::DEFAULT_PRECISION;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension must be at least one")]
    ZeroDimension,
    #[error("boundary polynomial {0} is zero")]
    ZeroComponent(usize),
    #[error("boundary polynomial {0} is constant")]
    ConstantComponent(usize),
    #[error("boundary polynomial {0} uses variables outside x1..x{1}")]
    WrongArity(usize, usize),
    #[error("boundary polynomial {0} is not a primitive integer polynomial at p")]
    NotPrimitive(usize),
    #[error("boundary is not reduced (repeated factor)")]
    NotReduced,
    #[error("point has {got} coordinates, model has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {0} is not integral")]
    NotIntegral(usize),
    #[error("point lies on boundary component {component:?} ({cause:?})")]
    PointOnBoundaryGenerically {
        component: Component,
        cause: BoundaryCause,
    },
    #[error("polynomial is not a unit times boundary equations and powers of p")]
    NonFactorable,
    #[error(transparent)]
    PAdic(#[from] PAdicError),
}

/// Why a boundary value could not be separated from zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCause {
    ExactZero,
    PrecisionExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    /// `V(f_i)` for the `i`-th boundary polynomial.
    Horizontal(usize),
    /// The special fibre `V(p)`.
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeModel {
    p: u64,
    dim: usize,
    horizontal: Vec<Poly>,
    include_vertical: bool,
}

impl SchemeModel {
    pub fn new(
        p: u64,
        dim: usize,
        horizontal: Vec<Poly>,
        include_vertical: bool,
    ) -> Result<Self, SchemeError> {
        if !is_prime(p) {
            return Err(SchemeError::NotPrime(p));
        }
        if dim == 0 {
            return Err(SchemeError::ZeroDimension);
        }
        for (i, f) in horizontal.iter().enumerate() {
            if f.nvars() != dim {
                return Err(SchemeError::WrongArity(i, dim));
            }
            if f.is_zero() {
                return Err(SchemeError::ZeroComponent(i));
            }
            if f.as_constant().is_some() {
                return Err(SchemeError::ConstantComponent(i));
            }
            if !f.is_integral() || f.content_valuation(p) != Some(0) {
                return Err(SchemeError::NotPrimitive(i));
            }
        }
        if dim == 1 && !horizontal.is_empty() {
            let product = horizontal.iter().fold(Poly::int(1, 1), |acc, f| acc.mul(f));
            if !product.is_squarefree_univariate() {
                return Err(SchemeError::NotReduced);
            }
        }
        Ok(SchemeModel {
            p,
            dim,
            horizontal,
            include_vertical,
        })
    }

    /// `G_m ⊂ A^1` over `Z_p`: boundary `V(pX) = V(X) ∪ V(p)`.
    pub fn multiplicative_group(p: u64) -> Result<Self, SchemeError> {
        SchemeModel::new(p, 1, alloc::vec![Poly::var(1, 0)], true)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizontal(&self) -> &[Poly] {
        &self.horizontal
    }

    pub fn include_vertical(&self) -> bool {
        self.include_vertical
    }

    /// Horizontal components in order, then `V(p)` if present.
    pub fn components(&self) -> Vec<Component> {
        let mut out: Vec<Component> = (0..self.horizontal.len())
            .map(Component::Horizontal)
            .collect();
        if self.include_vertical {
            out.push(Component::Vertical);
        }
        out
    }

    /// Write `f = c * p^e * prod f_i^(e_i)` with `c` a `p`-adic unit.
    pub fn factor(&self, f: &Poly) -> Result<BoundaryFactorization, SchemeError> {
        if f.nvars() != self.dim || f.is_zero() {
            return Err(SchemeError::NonFactorable);
        }
        let mut rest = f.clone();
        let mut exponents = Vec::with_capacity(self.horizontal.len());
        for g in &self.horizontal {
            let mut e = 0u32;
            while let Some(q) = rest.div_exact(g) {
                rest = q;
                e += 1;
            }
            exponents.push(e);
        }
        let c = rest.as_constant().ok_or(SchemeError::NonFactorable)?;
        let (vn, num) = split_p(c.numer(), self.p);
        let (vd, den) = split_p(c.denom(), self.p);
        let p_exponent = vn as i64 - vd as i64;
        if p_exponent != 0 && !self.include_vertical {
            return Err(SchemeError::NonFactorable);
        }
        Ok(BoundaryFactorization {
            unit: BigRational::new(num, den),
            p_exponent,
            exponents,
        })
    }

    fn check_point(&self, x: &OPoint) -> Result<(), SchemeError> {
        if x.coords.len() != self.dim {
            return Err(SchemeError::DimensionMismatch {
                expected: self.dim,
                got: x.coords.len(),
            });
        }
        Ok(())
    }

    /// `ord_p` of the component's equation at `x`.
    pub fn multiplicity(&self, component: Component, x: &OPoint) -> Result<u32, SchemeError> {
        Ok(self.component_value(component, x)?.0)
    }

    /// Multiplicity and unit residue of the component's equation at `x`.
    fn component_value(&self, component: Component, x: &OPoint) -> Result<(u32, u64), SchemeError> {
        self.check_point(x)?;
        let f = match component {
            Component::Vertical => return Ok((1, 1)),
            Component::Horizontal(i) => &self.horizontal[i],
        };
        let on_boundary = |cause| SchemeError::PointOnBoundaryGenerically { component, cause };
        let value = match eval_poly(f, x) {
            Ok(v) if v.is_exact_zero() => return Err(on_boundary(BoundaryCause::ExactZero)),
            Ok(v) => v,
            Err(PAdicError::PrecisionExhausted) => {
                return Err(on_boundary(BoundaryCause::PrecisionExhausted))
            }
            Err(e) => return Err(e.into()),
        };
        let m = value.valuation()?;
        debug_assert!(m >= 0, "integral point on an integral polynomial");
        Ok((m as u32, value.unit_residue()?))
    }

    pub fn intersection_data(&self, x: &OPoint) -> Result<IntersectionData, SchemeError> {
        self.check_point(x)?;
        let components = self
            .components()
            .into_iter()
            .map(|c| {
                let (multiplicity, residue) = self.component_value(c, x)?;
                Ok(ComponentMeeting {
                    component: c,
                    multiplicity,
                    residue,
                })
            })
            .collect::<Result<Vec<_>, SchemeError>>()?;
        Ok(IntersectionData {
            reduction: x.reduction(),
            components,
        })
    }
}

/// `f = unit * p^p_exponent * prod f_i^(exponents[i])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryFactorization {
    pub unit: BigRational,
    pub p_exponent: i64,
    pub exponents: Vec<u32>,
}

impl BoundaryFactorization {
    /// Order of vanishing along a boundary component.
    pub fn order_along(&self, component: Component) -> i64 {
        match component {
            Component::Vertical => self.p_exponent,
            Component::Horizontal(i) => self.exponents[i] as i64,
        }
    }
}

/// A point of `X(Z_p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OPoint {
    coords: Vec<PAdic>,
}

impl OPoint {
    pub fn new(coords: Vec<PAdic>) -> Result<Self, SchemeError> {
        for (i, c) in coords.iter().enumerate() {
            if !c.is_exact_zero() && c.valuation()? < 0 {
                return Err(SchemeError::NotIntegral(i));
            }
        }
        Ok(OPoint { coords })
    }

    pub fn from_rationals(
        p: u64,
        precision: u32,
        coords: &[BigRational],
    ) -> Result<Self, SchemeError> {
        let coords = coords
            .iter()
            .map(|c| PAdic::new(p, precision, c))
            .collect::<Result<Vec<_>, _>>()?;
        OPoint::new(coords)
    }

    pub fn from_ints(p: u64, precision: u32, coords: &[i64]) -> Result<Self, SchemeError> {
        let coords: Vec<BigRational> = coords
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        OPoint::from_rationals(p, precision, &coords)
    }

    pub fn coords(&self) -> &[PAdic] {
        &self.coords
    }

    /// Working precision: the smallest coordinate precision.
    pub fn precision(&self) -> u32 {
        self.coords
            .iter()
            .filter_map(PAdic::precision)
            .min()
            .unwrap_or(DEFAULT_PRECISION)
    }

    /// `x mod p` in `F_p^d`.
    pub fn reduction(&self) -> Vec<u64> {
        self.coords
            .iter()
            .map(|c| match c.valuation() {
                Ok(0) => c.unit_residue().expect("nonzero"),
                _ => 0,
            })
            .collect()
    }
}

/// Evaluate a polynomial at an integral point.
pub fn eval_poly(f: &Poly, x: &OPoint) -> Result<PAdic, PAdicError> {
    let p = x
        .coords
        .first()
        .map(PAdic::p)
        .ok_or(PAdicError::ExactZero)?;
    f.eval_padic(&x.coords, p, x.precision())
}

/// How component `Z_i` meets a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ComponentMeeting {
    pub component: Component,
    pub multiplicity: u32,
    /// Residue of the unit part of `f_i(x)`; for `m = 0` this is `f_i(x mod p)`.
    pub residue: u64,
}

/// Reduction plus per-component multiplicity and unit residue.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntersectionData {
    pub reduction: Vec<u64>,
    pub components: Vec<ComponentMeeting>,
}

impl IntersectionData {
    pub fn multiplicity(&self, component: Component) -> Option<u32> {
        self.components
            .iter()
            .find(|c| c.component == component)
            .map(|c| c.multiplicity)
    }
}

/// Same reduction, multiplicities and unit residues.
pub fn strong_equiv(a: &IntersectionData, b: &IntersectionData) -> bool {
    a == b
}

/// Is `(pX, X - u1) = (pX, X - u2)` in `Z_p[X]`?
///
/// The ideal `(pX, X - u)` equals `(X - u, p^(v(u)+1))`, so this asks for
/// `u1 ≡ u2 mod p^(v(u1)+1)`.
pub fn ideal_equality_a1(u1: &PAdic, u2: &PAdic) -> Result<bool, PAdicError> {
    let l1 = u1.valuation()?;
    u2.valuation()?;
    u1.congruent_mod(u2, l1 + 1)
}

/// A point of `P^1(F_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjectivePoint {
    Affine(u64),
    Infinity,
}

/// How the lift of `u in Q_p` to `P^1(Z_p)` meets the boundary
/// `P^1_{F_p} ∪ {∞}` of `A^1_{Q_p} ⊂ P^1_{Z_p}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjectiveLineData {
    pub reduction: ProjectivePoint,
    /// Length of the intersection with the section at infinity.
    pub infinity_multiplicity: u64,
}

pub fn projective_line_data(u: &PAdic) -> ProjectiveLineData {
    match u.valuation() {
        Ok(v) if v < 0 => ProjectiveLineData {
            reduction: ProjectivePoint::Infinity,
            infinity_multiplicity: v.unsigned_abs(),
        },
        Ok(0) => ProjectiveLineData {
            reduction: ProjectivePoint::Affine(u.unit_residue().expect("nonzero")),
            infinity_multiplicity: 0,
        },
        _ => ProjectiveLineData {
            reduction: ProjectivePoint::Affine(0),
            infinity_multiplicity: 0,
        },
    }
}

impl BoundaryFactorization {
    /// The trivial factorization `1`.
    pub fn one(components: usize) -> Self {
        BoundaryFactorization {
            unit: BigRational::one(),
            p_exponent: 0,
            exponents: alloc::vec![0; components],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.p_exponent == 0 && self.exponents.iter().all(Zero::is_zero)
    }
}
