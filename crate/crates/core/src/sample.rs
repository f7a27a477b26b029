//! The seeded generator behind every sampling harness.
//!
//! All randomness comes from a `ChaCha8Rng` seeded with a `u64`, so a
//! (scenario, seed) pair determines every sampled point and class.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::brauer::ClassExpr;
use crate::poly::Poly;
use crate::scheme::{OPoint, SchemeModel};
use crate::symbols::BrauerInvariant;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.gen_range(0..n)
    }

    /// Uniform in `1..p`.
    pub fn unit_residue(&mut self, p: u64) -> u64 {
        self.rng.gen_range(1..p)
    }

    /// A nonzero integer in `[-bound, bound]` prime to `p`.
    pub fn unit_integer(&mut self, p: u64, bound: i64) -> i64 {
        loop {
            let v = self.rng.gen_range(-bound..=bound);
            if v != 0 && v.unsigned_abs() % p != 0 {
                return v;
            }
        }
    }

    /// A p-adic integer with `digits` random base-`p` digits.
    pub fn integer_digits(&mut self, p: u64, digits: u32) -> BigInt {
        let mut acc = BigInt::from(0);
        for _ in 0..digits {
            acc = acc * p + self.below(p);
        }
        acc
    }

    /// `v * p^l` with `v` a random unit of `digits` digits and `l` in `0..=l_max`.
    pub fn gm_point(&mut self, p: u64, l_max: u32, digits: u32) -> BigInt {
        let l = self.rng.gen_range(0..=l_max);
        let v = loop {
            let v = self.integer_digits(p, digits.max(1));
            if &v % p != BigInt::from(0) {
                break v;
            }
        };
        if self.rng.gen_bool(0.5) {
            -v * num_traits::pow(BigInt::from(p), l as usize)
        } else {
            v * num_traits::pow(BigInt::from(p), l as usize)
        }
    }

    /// A point of `X(Z_p)` off the boundary, by rejection.
    pub fn point_off_boundary(
        &mut self,
        model: &SchemeModel,
        precision: u32,
        digits: u32,
    ) -> OPoint {
        loop {
            let coords: Vec<BigRational> = (0..model.dim())
                .map(|_| BigRational::from_integer(self.integer_digits(model.p(), digits)))
                .collect();
            let x = OPoint::from_rationals(model.p(), precision, &coords)
                .expect("integral coordinates");
            if model.intersection_data(&x).is_ok() {
                return x;
            }
        }
    }

    /// `c * p^e * prod f_i^(e_i)` with small exponents and `c` prime to `p`.
    pub fn boundary_monomial(&mut self, model: &SchemeModel, max_exp: u32) -> Poly {
        let p = model.p();
        let c = self.unit_integer(p, 3 * p as i64);
        let mut f = Poly::int(model.dim(), c);
        if model.include_vertical() {
            let e = self.rng.gen_range(0..=max_exp);
            f = f.mul(&Poly::int(model.dim(), p as i64).pow(e));
        }
        for g in model.horizontal() {
            let e = self.rng.gen_range(0..=max_exp);
            f = f.mul(&g.pow(e));
        }
        f
    }

    /// A single symbol or constant of order `n`.
    pub fn class_term(&mut self, model: &SchemeModel, n: u64, allow_quaternion: bool) -> ClassExpr {
        let kinds = if allow_quaternion { 4 } else { 3 };
        match self.below(kinds) {
            0 => ClassExpr::Cyclic(
                self.boundary_monomial(model, 2),
                self.boundary_monomial(model, 2),
                n,
            ),
            1 => ClassExpr::CupUnram(self.boundary_monomial(model, 2), n, self.below(n)),
            2 => ClassExpr::ConstantInv(BrauerInvariant::new(self.below(n) as i64, n)),
            _ => ClassExpr::Quaternion(
                self.boundary_monomial(model, 2),
                self.boundary_monomial(model, 2),
            ),
        }
    }

    /// A formal sum of one to three terms with orders drawn from `orders`.
    pub fn class(
        &mut self,
        model: &SchemeModel,
        orders: &[u64],
        allow_quaternion: bool,
    ) -> ClassExpr {
        let terms = 1 + self.below(3) as usize;
        let mut parts: Vec<ClassExpr> = (0..terms)
            .map(|_| {
                let n = orders[self.below(orders.len() as u64) as usize];
                self.class_term(model, n, allow_quaternion)
            })
            .collect();
        if parts.len() == 1 {
            parts.pop().expect("one term")
        } else {
            ClassExpr::Product(parts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let m = SchemeModel::multiplicative_group(5).unwrap();
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..20 {
            assert_eq!(a.class(&m, &[3], true), b.class(&m, &[3], true));
            assert_eq!(
                a.point_off_boundary(&m, 16, 4),
                b.point_off_boundary(&m, 16, 4)
            );
        }
    }

    #[test]
    fn sampled_classes_are_valid() {
        let m = SchemeModel::multiplicative_group(7).unwrap();
        let mut s = Sampler::new(1);
        for _ in 0..50 {
            assert_eq!(s.class(&m, &[2, 3], true).validate(&m), Ok(()));
        }
    }
}
