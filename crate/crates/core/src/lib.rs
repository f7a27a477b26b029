//! Tame Brauer class evaluation over `Q_p`.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`localfield`]: finite-precision p-adic numbers with tracked precision,
//! - [`finitefield`]: arithmetic in `F_{p^f}`, cyclotomic residue fields and
//!   discrete logarithms in `mu_n`,
//! - [`symbols`]: tame symbols, Hilbert and norm-residue symbols and Brauer
//!   invariants in `(1/n)Z/Z`,
//! - [`scheme`]: affine models over `Z_p` with a boundary divisor, integral
//!   points and their intersection data,
//! - [`brauer`]: symbolic Brauer classes, their evaluation and residues, and
//!   the two comparison harnesses (intersection-data invariance and the
//!   residue diagram),
//! - [`finab`]: finitely generated abelian groups via Smith normal form and
//!   the localisation-sequence group models,
//! - [`sample`]: the seeded generator used by every sampling harness.
#![no_std]

extern crate alloc;

pub mod arith;
pub mod brauer;
pub mod finab;
pub mod finitefield;
pub mod localfield;
pub mod poly;
pub mod sample;
pub mod scheme;
pub mod symbols;

pub use finitefield::{FieldError, FqElem, FqField};
pub use localfield::{PAdic, PAdicError};
pub use poly::Poly;

pub use brauer::{BrauerError, ClassExpr};
pub use scheme::{IntersectionData, OPoint, SchemeError, SchemeModel};
pub use symbols::{BrauerInvariant, SymbolError};

/// Default number of significant p-adic digits.
pub const DEFAULT_PRECISION: u32 = 32;
