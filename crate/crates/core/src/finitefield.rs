//! Arithmetic in `F_{p^f}`.
//!
//! Elements are coefficient vectors (low degree first) modulo a monic
//! irreducible polynomial. Every field built by [`FqField::new`] uses the
//! lexicographically smallest monic irreducible of its degree, with
//! coefficients compared from the constant term up, so anything derived
//! from a fixed root of unity is reproducible across runs.
//!
//! Elements are enumerated by `index = c0 + c1*p + ... + c_{f-1}*p^{f-1}`;
//! "smallest element" always refers to this order.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{gcd, inv_mod, is_prime, mul_mod, multiplicative_order, prime_factors};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} divides n = {n}")]
    PDividesN { p: u64, n: u64 },
    #[error("no primitive {n}-th root of unity in a field of size {q}")]
    NoSuchRoot { n: u64, q: u64 },
    #[error("element is not an n-th root of unity")]
    NotInMuN,
    #[error("zero has no Kummer class")]
    ZeroElement,
    #[error("modulus is not a monic irreducible polynomial")]
    NotIrreducible,
    #[error("field of size {p}^{f} is too large")]
    TooLarge { p: u64, f: u32 },
}

/// An element of `F_{p^f}` as `f` coefficients in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    coeffs: Vec<u64>,
}

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

/// `F_{p^f} = F_p[x]/(modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqField {
    p: u64,
    degree: u32,
    modulus: Vec<u64>,
    size: u64,
}

const MAX_FIELD_BITS: u32 = 48;

// Polynomials over F_p, low degree first, no trailing zeros.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p).expect("nonzero leading coefficient");
    while r.len() > dm {
        let k = r.len() - 1;
        let c = mul_mod(r[k], lead_inv, p);
        for (i, &mi) in m.iter().enumerate() {
            let idx = k - dm + i;
            r[idx] = (r[idx] + p - mul_mod(c, mi, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    poly_rem(&poly_mul(a, b, p), m, p)
}

fn poly_powmod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = poly_rem(&[1], m, p);
    let mut b = poly_rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod m`.
fn frobenius_power_of_x(m: &[u64], p: u64, k: u32) -> Vec<u64> {
    let mut h = poly_rem(&[0, 1], m, p);
    for _ in 0..k {
        h = poly_powmod(&h, p, m, p);
    }
    h
}

/// Rabin's test for a monic polynomial of degree `f >= 1`.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let f = (m.len() - 1) as u32;
    let x = [0, 1];
    if !poly_rem(&poly_sub(&frobenius_power_of_x(m, p, f), &x, p), m, p).is_empty() {
        return false;
    }
    prime_factors(f as u64).into_iter().all(|l| {
        let h = frobenius_power_of_x(m, p, f / l as u32);
        let g = poly_gcd(&poly_sub(&h, &x, p), m, p);
        g.len() == 1
    })
}

impl FqField {
    /// `F_{p^f}` with the lexicographically smallest irreducible modulus.
    pub fn new(p: u64, degree: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let size = checked_size(p, degree)?;
        let f = degree as usize;
        // Enumerate (c0, ..., c_{f-1}) with c0 most significant.
        for idx in 0..size {
            let mut digits = vec![0u64; f];
            let mut rest = idx;
            for slot in digits.iter_mut().rev() {
                *slot = rest % p;
                rest /= p;
            }
            let mut modulus = digits;
            modulus.push(1);
            if is_irreducible(&modulus, p) {
                return Ok(FqField {
                    p,
                    degree,
                    modulus,
                    size,
                });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// A field with a caller-chosen modulus, checked for irreducibility.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if modulus.len() < 2 || modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::NotIrreducible);
        }
        let degree = (modulus.len() - 1) as u32;
        let size = checked_size(p, degree)?;
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::NotIrreducible);
        }
        Ok(FqField {
            p,
            degree,
            modulus,
            size,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn pack(&self, mut v: Vec<u64>) -> FqElem {
        v.resize(self.degree as usize, 0);
        FqElem { coeffs: v }
    }

    pub fn zero(&self) -> FqElem {
        self.pack(Vec::new())
    }

    pub fn one(&self) -> FqElem {
        self.pack(vec![1])
    }

    /// The image of `c mod p` under `F_p -> F_{p^f}`.
    pub fn from_prime_field(&self, c: u64) -> FqElem {
        self.pack(vec![c % self.p])
    }

    /// Element from coefficients (low degree first), reduced.
    pub fn element(&self, coeffs: &[u64]) -> FqElem {
        let c: Vec<u64> = coeffs.iter().map(|&x| x % self.p).collect();
        self.pack(poly_rem(&c, &self.modulus, self.p))
    }

    pub fn from_index(&self, mut index: u64) -> FqElem {
        let mut c = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            c.push(index % self.p);
            index /= self.p;
        }
        FqElem { coeffs: c }
    }

    pub fn index(&self, a: &FqElem) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    /// The value in `F_p` if `a` lies in the prime field.
    pub fn as_prime_field(&self, a: &FqElem) -> Option<u64> {
        a.coeffs[1..].iter().all(|&c| c == 0).then(|| a.coeffs[0])
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let c = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        FqElem { coeffs: c }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        let c = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FqElem { coeffs: c }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.pack(poly_mulmod(
            &trim(a.coeffs.clone()),
            &trim(b.coeffs.clone()),
            &self.modulus,
            self.p,
        ))
    }

    pub fn pow(&self, a: &FqElem, exp: u64) -> FqElem {
        self.pack(poly_powmod(
            &trim(a.coeffs.clone()),
            exp,
            &self.modulus,
            self.p,
        ))
    }

    pub fn inv(&self, a: &FqElem) -> Option<FqElem> {
        (!self.is_zero(a)).then(|| self.pow(a, self.size - 2))
    }

    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.p)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &FqElem) -> Option<u64> {
        if self.is_zero(a) {
            return None;
        }
        let mut order = self.size - 1;
        for l in prime_factors(order) {
            while order.is_multiple_of(l) && self.pow(a, order / l) == self.one() {
                order /= l;
            }
        }
        Some(order)
    }

    /// `N_{F_{p^f}/F_p}(t) = t^(1 + p + ... + p^(f-1))`.
    pub fn norm_to_prime_field(&self, t: &FqElem) -> u64 {
        let e = (self.size - 1) / (self.p - 1);
        let n = self.pow(t, e);
        self.as_prime_field(&n)
            .expect("norm lies in the prime field")
    }

    /// The smallest element of exact multiplicative order `n`.
    pub fn primitive_nth_root(&self, n: u64) -> Result<FqElem, FieldError> {
        if n == 0 || !(self.size - 1).is_multiple_of(n) {
            return Err(FieldError::NoSuchRoot { n, q: self.size });
        }
        let cofactor = (self.size - 1) / n;
        let factors = prime_factors(n);
        let has_exact_order =
            |z: &FqElem| factors.iter().all(|&l| self.pow(z, n / l) != self.one());
        let seed = (1..self.size)
            .map(|i| self.pow(&self.from_index(i), cofactor))
            .find(|z| has_exact_order(z))
            .expect("cyclic group has elements of every order dividing q - 1");
        Ok((1..=n)
            .filter(|&k| gcd(k, n) == 1)
            .map(|k| self.pow(&seed, k))
            .min_by_key(|z| self.index(z))
            .expect("phi(n) >= 1"))
    }

    /// Baby-step giant-step logarithm of `t` in `<zeta>`, `zeta` of exact
    /// order `n`.
    pub fn dlog_mu_n(&self, t: &FqElem, zeta: &FqElem, n: u64) -> Result<u64, FieldError> {
        if self.is_zero(t) || self.pow(t, n) != self.one() {
            return Err(FieldError::NotInMuN);
        }
        let m = ceil_sqrt(n);
        let mut baby = BTreeMap::new();
        let mut cur = self.one();
        for j in 0..m {
            baby.entry(self.index(&cur)).or_insert(j);
            cur = self.mul(&cur, zeta);
        }
        let giant = self
            .inv(&self.pow(zeta, m))
            .expect("roots of unity are nonzero");
        let mut gamma = t.clone();
        for i in 0..=m {
            if let Some(&j) = baby.get(&self.index(&gamma)) {
                return Ok((i * m + j) % n);
            }
            gamma = self.mul(&gamma, &giant);
        }
        Err(FieldError::NotInMuN)
    }

    /// Class of `t` in `F_q^x / (F_q^x)^n`, as `dlog_zeta(t^((q-1)/n))`.
    pub fn kummer_class_index(&self, t: &FqElem, zeta: &FqElem, n: u64) -> Result<u64, FieldError> {
        if self.is_zero(t) {
            return Err(FieldError::ZeroElement);
        }
        if n == 0 || !(self.size - 1).is_multiple_of(n) {
            return Err(FieldError::NoSuchRoot { n, q: self.size });
        }
        self.dlog_mu_n(&self.pow(t, (self.size - 1) / n), zeta, n)
    }
}

fn checked_size(p: u64, degree: u32) -> Result<u64, FieldError> {
    if degree == 0 {
        return Err(FieldError::NotIrreducible);
    }
    p.checked_pow(degree)
        .filter(|&s| s < (1u64 << MAX_FIELD_BITS))
        .ok_or(FieldError::TooLarge { p, f: degree })
}

fn ceil_sqrt(n: u64) -> u64 {
    let mut r = 0u64;
    while r * r < n {
        r += 1;
    }
    r.max(1)
}

/// `F_p(zeta_n)`: the field `F_{p^f}` with `f` the order of `p` mod `n`.
pub fn cyclotomic_extension(p: u64, n: u64) -> Result<FqField, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if n == 0 || n.is_multiple_of(p) {
        return Err(FieldError::PDividesN { p, n });
    }
    let f = multiplicative_order(p, n).expect("gcd(p, n) = 1");
    FqField::new(p, f as u32)
}

/// `mu_n` inside `F_p(zeta_n)` with its fixed generator.
#[derive(Debug, Clone)]
pub struct RootsOfUnity {
    field: FqField,
    n: u64,
    zeta: FqElem,
}

impl RootsOfUnity {
    pub fn new(p: u64, n: u64) -> Result<Self, FieldError> {
        let field = cyclotomic_extension(p, n)?;
        let zeta = field.primitive_nth_root(n)?;
        Ok(RootsOfUnity { field, n, zeta })
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn zeta(&self) -> &FqElem {
        &self.zeta
    }

    /// Kummer index of `t in F_p^x` computed inside `F_p(zeta_n)`.
    pub fn kummer_index_of_prime_field(&self, t: u64) -> Result<u64, FieldError> {
        let e = self.field.from_prime_field(t);
        self.field.kummer_class_index(&e, &self.zeta, self.n)
    }

    pub fn kummer_index(&self, t: &FqElem) -> Result<u64, FieldError> {
        self.field.kummer_class_index(t, &self.zeta, self.n)
    }
}
