use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use tbl_core::arith::{gcd, is_square_mod};
use tbl_core::finitefield::{FqField, RootsOfUnity};
use tbl_core::symbols::{hilbert_symbol, tame_symbol};
use tbl_core::{BrauerInvariant, PAdic, PAdicError};

const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn nonzero_rational() -> impl Strategy<Value = (i64, i64)> {
    (
        (-5000i64..5000).prop_filter("nonzero", |n| *n != 0),
        1i64..5000,
    )
}

fn padic(p: u64, (n, d): (i64, i64)) -> PAdic {
    PAdic::from_rational(p, 24, &rat(n, d)).unwrap()
}

proptest! {
    #[test]
    fn valuation_and_residue_are_multiplicative(
        pi in 0usize..5, a in nonzero_rational(), b in nonzero_rational()
    ) {
        let p = PRIMES[pi];
        let (x, y) = (padic(p, a), padic(p, b));
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(xy.valuation().unwrap(), x.valuation().unwrap() + y.valuation().unwrap());
        prop_assert_eq!(
            xy.unit_residue().unwrap(),
            x.unit_residue().unwrap() * y.unit_residue().unwrap() % p
        );
        prop_assert_eq!(xy, padic(p, (a.0 * b.0, a.1 * b.1)));
    }

    #[test]
    fn exact_rationals_round_trip(pi in 0usize..5, a in nonzero_rational(), b in nonzero_rational()) {
        let p = PRIMES[pi];
        let (x, y) = (padic(p, a), padic(p, b));
        let sum = x.add(&y).unwrap();
        let expected = rat(a.0, a.1) + rat(b.0, b.1);
        prop_assert_eq!(sum.exact_value().cloned(), Some(expected));
        let back = sum.sub(&y).unwrap();
        prop_assert_eq!(back.exact_value(), x.exact_value());
        prop_assert_eq!(back.valuation().unwrap(), x.valuation().unwrap());
        prop_assert!(back.precision().unwrap() <= x.precision().unwrap());
        prop_assert!(back.congruent_mod(&x, back.absolute_precision().unwrap()).unwrap());
    }

    #[test]
    fn cancellation_never_invents_digits(p in prop::sample::select(vec![3u64, 5, 7]), k in 1u32..12) {
        let n = 6u32;
        let one = PAdic::from_digits(p, 0, num_bigint::BigUint::from(1u32), n).unwrap();
        let shifted = PAdic::from_digits(p, 0, num_bigint::BigUint::from(1u32) + num_bigint::BigUint::from(p).pow(k), n).unwrap();
        match shifted.sub(&one) {
            Ok(d) => {
                prop_assert!(k < n);
                prop_assert_eq!(d.valuation().unwrap(), k as i64);
                prop_assert!(d.precision().unwrap() <= n - k);
            }
            Err(e) => {
                prop_assert!(k >= n);
                prop_assert_eq!(e, PAdicError::PrecisionExhausted);
            }
        }
    }

    #[test]
    fn tame_symbol_is_bimultiplicative(
        pi in 0usize..5, a1 in nonzero_rational(), a2 in nonzero_rational(), b in nonzero_rational()
    ) {
        let p = PRIMES[pi];
        let (x1, x2, y) = (padic(p, a1), padic(p, a2), padic(p, b));
        let left = tame_symbol(&x1.mul(&x2).unwrap(), &y).unwrap();
        let right = tame_symbol(&x1, &y).unwrap() * tame_symbol(&x2, &y).unwrap() % p;
        prop_assert_eq!(left, right);
        let left = tame_symbol(&y, &x1.mul(&x2).unwrap()).unwrap();
        let right = tame_symbol(&y, &x1).unwrap() * tame_symbol(&y, &x2).unwrap() % p;
        prop_assert_eq!(left, right);
    }

    #[test]
    fn tame_symbol_is_skew_symmetric(pi in 0usize..5, a in nonzero_rational(), b in nonzero_rational()) {
        let p = PRIMES[pi];
        let (x, y) = (padic(p, a), padic(p, b));
        prop_assert_eq!(tame_symbol(&x, &y).unwrap() * tame_symbol(&y, &x).unwrap() % p, 1 % p);
        // (a, -a) = 1
        prop_assert_eq!(tame_symbol(&x, &x.neg()).unwrap(), 1 % p);
    }

    #[test]
    fn steinberg_relation(pi in 0usize..5, a in nonzero_rational()) {
        prop_assume!(a.0 != a.1);
        let p = PRIMES[pi];
        let x = padic(p, a);
        let one_minus = padic(p, (a.1 - a.0, a.1));
        prop_assert_eq!(tame_symbol(&x, &one_minus).unwrap(), 1 % p);
    }

    #[test]
    fn hilbert_symbol_is_bilinear(
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
        a1 in nonzero_rational(), a2 in nonzero_rational(), b in nonzero_rational()
    ) {
        let (x1, x2, y) = (padic(p, a1), padic(p, a2), padic(p, b));
        let left = hilbert_symbol(&x1.mul(&x2).unwrap(), &y).unwrap();
        let right = hilbert_symbol(&x1, &y).unwrap() + hilbert_symbol(&x2, &y).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(hilbert_symbol(&x1, &y).unwrap(), hilbert_symbol(&y, &x1).unwrap());
    }
}

/// `z^2 = a x^2 + b y^2` has a primitive solution mod `p^3`; the search
/// divides by the unit among `x, y`, so `t` ranges over squares.
fn conic_solvable_mod_p3(p: u64, a: u64, b: u64) -> bool {
    let m = p * p * p;
    let mut is_square = vec![false; m as usize];
    for z in 0..m {
        is_square[(z * z % m) as usize] = true;
    }
    (0..m)
        .filter(|&t| is_square[t as usize])
        .any(|t| is_square[((a + b * t) % m) as usize] || is_square[((a * t + b) % m) as usize])
}

#[test]
fn hilbert_matches_conic_oracle_small_primes() {
    for p in [3u64, 5, 7] {
        let classes: Vec<u64> = (1..p).flat_map(|u| [u, u * p]).collect();
        for &a in &classes {
            for &b in &classes {
                let pa = PAdic::from_int(p, 16, a as i64).unwrap();
                let pb = PAdic::from_int(p, 16, b as i64).unwrap();
                let expected = if conic_solvable_mod_p3(p, a, b) {
                    BrauerInvariant::ZERO
                } else {
                    BrauerInvariant::new(1, 2)
                };
                assert_eq!(
                    hilbert_symbol(&pa, &pb).unwrap(),
                    expected,
                    "p={p} a={a} b={b}"
                );
            }
        }
    }
}

fn small_fields() -> Vec<FqField> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11] {
        for f in 1..=7u32 {
            if p.pow(f) <= 121 {
                out.push(FqField::new(p, f).unwrap());
            }
        }
    }
    out
}

#[test]
fn kummer_index_is_a_homomorphism() {
    for field in small_fields() {
        let q = field.size();
        for n in (1..=8u64).filter(|n| (q - 1) % n == 0) {
            let zeta = field.primitive_nth_root(n).unwrap();
            let index: Vec<u64> = (1..q)
                .map(|i| {
                    field
                        .kummer_class_index(&field.from_index(i), &zeta, n)
                        .unwrap()
                })
                .collect();
            for s in 1..q {
                for t in 1..q {
                    let st = field.mul(&field.from_index(s), &field.from_index(t));
                    let k = index[(field.index(&st) - 1) as usize];
                    assert_eq!(k, (index[(s - 1) as usize] + index[(t - 1) as usize]) % n);
                }
            }
            // surjective onto Z/n
            let mut seen = vec![false; n as usize];
            index.iter().for_each(|&k| seen[k as usize] = true);
            assert!(seen.iter().all(|&b| b));
        }
    }
}

#[test]
fn discrete_log_round_trip() {
    for field in small_fields() {
        let q = field.size();
        for n in (1..=q - 1).filter(|n| (q - 1) % n == 0) {
            let zeta = field.primitive_nth_root(n).unwrap();
            assert_eq!(field.order(&zeta), Some(n));
            let mut power = field.one();
            for k in 0..n {
                assert_eq!(field.dlog_mu_n(&power, &zeta, n).unwrap(), k);
                power = field.mul(&power, &zeta);
            }
            // smallest index among elements of exact order n
            let smallest = (1..q)
                .map(|i| field.from_index(i))
                .find(|z| field.order(z) == Some(n))
                .unwrap();
            assert_eq!(zeta, smallest);
        }
    }
}

#[test]
fn norm_is_multiplicative_and_surjective() {
    for field in small_fields() {
        let (p, q) = (field.characteristic(), field.size());
        let mut hit = vec![false; p as usize];
        for s in 1..q {
            let a = field.from_index(s);
            let na = field.norm_to_prime_field(&a);
            assert_ne!(na, 0);
            hit[na as usize] = true;
            for t in (1..q).step_by(3) {
                let b = field.from_index(t);
                let nab = field.norm_to_prime_field(&field.mul(&a, &b));
                assert_eq!(nab, na * field.norm_to_prime_field(&b) % p);
            }
        }
        assert!(hit[1..].iter().all(|&h| h));
    }
}

#[test]
fn frobenius_fixes_exactly_the_prime_field() {
    for field in small_fields() {
        let q = field.size();
        let fixed: Vec<u64> = (0..q)
            .filter(|&i| {
                let a = field.from_index(i);
                field.frobenius(&a) == a
            })
            .collect();
        let prime: Vec<u64> = (0..field.characteristic()).collect();
        assert_eq!(fixed, prime);
    }
}

#[test]
fn kummer_index_in_prime_field_matches_power_residue() {
    for p in [5u64, 7, 11, 13] {
        for n in (2..=8u64).filter(|n| n % p != 0) {
            let roots = RootsOfUnity::new(p, n).unwrap();
            for t in 1..p {
                let k = roots.kummer_index_of_prime_field(t).unwrap();
                let g = gcd(n, p - 1);
                if g == 1 {
                    assert_eq!(k, 0);
                }
                if n == 2 {
                    assert_eq!(k == 0, is_square_mod(t, p));
                }
                // t is an n-th power in F_p(zeta_n) iff k = 0
                let f = roots.field();
                let e = f.from_prime_field(t);
                let is_nth_power = (1..f.size()).any(|i| f.pow(&f.from_index(i), n) == e);
                assert_eq!(k == 0, is_nth_power, "p={p} n={n} t={t}");
            }
        }
    }
}
