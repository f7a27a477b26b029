//! Finitely generated abelian groups, Smith normal form, and the group
//! models behind the localisation-sequence computations.
//!
//! Groups are presented as direct sums of cyclic groups `Z/o_1 ⊕ ... ⊕ Z/o_k`
//! ([`CyclicSum`], with `o = 0` meaning `Z`). Homomorphisms are integer
//! matrices acting on generators, columns indexed by source generators.
//! Kernels and cokernels reduce to Smith normal forms of block matrices.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{gcd, is_prime, pow_mod};

pub type Matrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FinAbError {
    #[error("matrix does not define a homomorphism between the given groups")]
    InvalidHom,
    #[error("p = {p} divides n = {n}")]
    PDividesN { p: u64, n: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("order must be positive")]
    ZeroOrder,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// `U * A * V = D` with `U, V` unimodular and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.d[i][i]).collect()
    }
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

struct Reducer {
    a: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.u_inv {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: i64) {
        for k in 0..self.cols {
            self.a[i][k] += c * self.a[j][k];
        }
        for k in 0..self.rows {
            self.u[i][k] += c * self.u[j][k];
        }
        // inverse op on columns: col_j -= c * col_i
        for row in &mut self.u_inv {
            row[j] -= c * row[i];
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: i64) {
        for row in &mut self.a {
            row[i] += c * row[j];
        }
        for row in &mut self.v {
            row[i] += c * row[j];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -*x;
        }
        for x in &mut self.u[i] {
            *x = -*x;
        }
        for row in &mut self.u_inv {
            row[i] = -row[i];
        }
    }

    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.a[i][j].abs();
                if x != 0 && best.is_none_or(|(bi, bj)| x < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((i, j)) = self.smallest_nonzero(t) else {
                break;
            };
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            loop {
                let pivot = self.a[t][t];
                let mut clean = true;
                for i in t + 1..self.rows {
                    let q = self.a[i][t] / pivot;
                    if q != 0 {
                        self.add_row(i, t, -q);
                    }
                    clean &= self.a[i][t] == 0;
                }
                for j in t + 1..self.cols {
                    let q = self.a[t][j] / pivot;
                    if q != 0 {
                        self.add_col(j, t, -q);
                    }
                    clean &= self.a[t][j] == 0;
                }
                if !clean {
                    let (i, j) = self.smallest_nonzero(t).expect("nonzero entries remain");
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                // pivot must divide the rest of the block
                let bad = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| self.a[i][j] % pivot != 0));
                match bad {
                    Some(i) => self.add_row(t, i, 1),
                    None => break,
                }
            }
            if self.a[t][t] < 0 {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

/// Smith normal form of an integer matrix given as rows.
pub fn smith_normal_form(a: &Matrix) -> Snf {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut r = Reducer {
        a: a.clone(),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
        rows,
        cols,
    };
    let rank = r.run();
    Snf {
        u: r.u,
        u_inv: r.u_inv,
        d: r.a,
        v: r.v,
        rank,
    }
}

/// Canonical form: invariant factors `d_1 | ... | d_k` (each `>= 2`) and free rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup {
            invariant_factors: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn cyclic(n: u64) -> Self {
        FinAbGroup::from_orders(&[n])
    }

    /// `⊕ Z/o_i` with `o_i = 0` read as `Z`.
    pub fn from_orders(orders: &[u64]) -> Self {
        let k = orders.len();
        let diag: Matrix = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { orders[i] as i64 } else { 0 })
                    .collect()
            })
            .collect();
        FinAbGroup::from_relations(k, &diag)
    }

    /// `Z^k / (column span of relations)`.
    pub fn from_relations(k: usize, relations: &Matrix) -> Self {
        if relations.is_empty() || relations[0].is_empty() {
            return FinAbGroup {
                invariant_factors: Vec::new(),
                free_rank: k,
            };
        }
        let snf = smith_normal_form(relations);
        FinAbGroup {
            invariant_factors: snf
                .diagonal()
                .into_iter()
                .map(|d| d as u64)
                .filter(|&d| d > 1)
                .collect(),
            free_rank: k - snf.rank,
        }
    }

    /// `None` for infinite groups.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.invariant_factors.iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        for d in &self.invariant_factors {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Z/{d}")?;
            first = false;
        }
        if self.free_rank > 0 {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Z^{}", self.free_rank)?;
        }
        Ok(())
    }
}

/// A presentation `⊕ Z/o_i` on chosen generators; `0` means `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSum {
    pub orders: Vec<u64>,
}

impl CyclicSum {
    pub fn new(orders: Vec<u64>) -> Self {
        CyclicSum { orders }
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn group(&self) -> FinAbGroup {
        FinAbGroup::from_orders(&self.orders)
    }

    fn relation_matrix(&self) -> Matrix {
        let k = self.rank();
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { self.orders[i] as i64 } else { 0 })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: CyclicSum,
    target: CyclicSum,
    /// `target.rank()` rows, `source.rank()` columns.
    matrix: Matrix,
}

impl GroupHom {
    pub fn new(source: CyclicSum, target: CyclicSum, matrix: Matrix) -> Result<Self, FinAbError> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(FinAbError::InvalidHom);
        }
        for (j, &o) in source.orders.iter().enumerate() {
            if o == 0 {
                continue;
            }
            for (i, &t) in target.orders.iter().enumerate() {
                let image = o as i128 * matrix[i][j] as i128;
                let ok = if t == 0 {
                    image == 0
                } else {
                    image % t as i128 == 0
                };
                if !ok {
                    return Err(FinAbError::InvalidHom);
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn source(&self) -> &CyclicSum {
        &self.source
    }

    pub fn target(&self) -> &CyclicSum {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom, FinAbError> {
        if first.target != self.source {
            return Err(FinAbError::InvalidHom);
        }
        GroupHom::new(
            first.source.clone(),
            self.target.clone(),
            mat_mul(&self.matrix, &first.matrix),
        )
    }
}

/// Integer kernel basis of `a` as columns of an `a.cols x k` matrix.
fn integer_kernel(a: &Matrix, cols: usize) -> Matrix {
    if a.is_empty() {
        return identity(cols);
    }
    let snf = smith_normal_form(a);
    snf.v.iter().map(|row| row[snf.rank..].to_vec()).collect()
}

pub fn hom_kernel(h: &GroupHom) -> FinAbGroup {
    let s = h.source.rank();
    let t = h.target.rank();
    if s == 0 {
        return FinAbGroup::trivial();
    }
    // K = { x in Z^s : M x in T Z^t }, the projection of ker [M | -T]
    let block: Matrix = (0..t)
        .map(|i| {
            let mut row = h.matrix[i].clone();
            row.extend((0..t).map(|j| {
                if i == j {
                    -(h.target.orders[i] as i64)
                } else {
                    0
                }
            }));
            row
        })
        .collect();
    let kernel = integer_kernel(&block, s + t);
    let b: Matrix = kernel[..s].to_vec();
    if b[0].is_empty() {
        return FinAbGroup::trivial();
    }
    let snf = smith_normal_form(&b);
    let r = snf.rank;
    let d = snf.diagonal();
    // coordinates of o_j e_j in the basis u_inv[:, i] * d_i of K
    let relations: Matrix = (0..r)
        .map(|i| {
            (0..s)
                .map(|j| {
                    let w = snf.u[i][j] * h.source.orders[j] as i64;
                    debug_assert_eq!(w % d[i], 0, "source relations lie in K");
                    w / d[i]
                })
                .collect()
        })
        .collect();
    FinAbGroup::from_relations(r, &relations)
}

/// A cokernel with its quotient map and a section on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cokernel {
    /// Presentation on the nontrivial generators.
    pub group: CyclicSum,
    /// Rows of the quotient map from the target's generators.
    pub projection: Matrix,
    /// Columns lifting each cokernel generator back to the target.
    pub section: Matrix,
}

impl Cokernel {
    pub fn canonical(&self) -> FinAbGroup {
        self.group.group()
    }

    /// The map induced on the cokernel by `phi` out of the original target.
    pub fn descend(&self, phi: &GroupHom) -> Result<GroupHom, FinAbError> {
        GroupHom::new(
            self.group.clone(),
            phi.target.clone(),
            mat_mul(&phi.matrix, &self.section),
        )
    }
}

pub fn hom_cokernel_presented(h: &GroupHom) -> Cokernel {
    let t = h.target.rank();
    let s = h.source.rank();
    let block: Matrix = (0..t)
        .map(|i| {
            let mut row = h.matrix[i].clone();
            row.extend(h.target.relation_matrix()[i].iter().copied());
            row
        })
        .collect();
    if t == 0 {
        return Cokernel {
            group: CyclicSum::new(Vec::new()),
            projection: Vec::new(),
            section: Vec::new(),
        };
    }
    debug_assert_eq!(block[0].len(), s + t);
    let snf = smith_normal_form(&block);
    let mut orders = Vec::new();
    let mut projection = Vec::new();
    let mut keep = Vec::new();
    for i in 0..t {
        let d = if i < snf.rank { snf.d[i][i] as u64 } else { 0 };
        if d != 1 {
            orders.push(d);
            projection.push(snf.u[i].clone());
            keep.push(i);
        }
    }
    let section = (0..t)
        .map(|r| keep.iter().map(|&i| snf.u_inv[r][i]).collect())
        .collect();
    Cokernel {
        group: CyclicSum::new(orders),
        projection,
        section,
    }
}

pub fn hom_cokernel(h: &GroupHom) -> FinAbGroup {
    hom_cokernel_presented(h).canonical()
}

fn check_prime_order(p: u64, n: u64) -> Result<(), FinAbError> {
    if !is_prime(p) {
        return Err(FinAbError::NotPrime(p));
    }
    if n == 0 {
        return Err(FinAbError::ZeroOrder);
    }
    if n.is_multiple_of(p) {
        return Err(FinAbError::PDividesN { p, n });
    }
    Ok(())
}

/// `gcd(n, q^k - 1)` without forming `q^k`.
pub fn mu_n_order(n: u64, q: u64, k: u32) -> u64 {
    let r = (pow_mod(q % n, k as u64, n) + n - 1) % n;
    gcd(n, r)
}

/// The localisation-sequence model for two closed points over `F_q`,
/// `q = p^residue_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMapConfig {
    pub residue_degree: u32,
}

impl Default for SupportMapConfig {
    fn default() -> Self {
        SupportMapConfig { residue_degree: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMapReport {
    pub g: u64,
    /// `H^2` with supports in the two points.
    pub source: FinAbGroup,
    /// Two copies of `Z/n`.
    pub target: FinAbGroup,
    pub kernel: FinAbGroup,
    pub cokernel: FinAbGroup,
    pub injective: bool,
    pub surjective: bool,
}

/// Supported cohomology of the two-point boundary and its map to `(Z/n)^2`.
///
/// `H^1(Z) = Z/g` sits diagonally in `H^1(Z \ B) = (Z/n ⊕ Z/g)^2` on the
/// generators `[n1, g1, n2, g2]`, with `g = gcd(n, q - 1)`; its cokernel is
/// the supported group since `H^2(Z)` vanishes. The map to `(Z/n)^2` reads
/// the two `Z/n` summands and kills the unit parts.
pub fn support_map_probe(
    p: u64,
    n: u64,
    config: &SupportMapConfig,
) -> Result<SupportMapReport, FinAbError> {
    check_prime_order(p, n)?;
    if config.residue_degree == 0 {
        return Err(FinAbError::InvalidConfig(String::from(
            "residue degree must be positive",
        )));
    }
    let g = mu_n_order(n, p, config.residue_degree);
    let closed = CyclicSum::new(vec![g]);
    let open = CyclicSum::new(vec![n, g, n, g]);
    let inclusion = GroupHom::new(
        closed,
        open.clone(),
        vec![vec![0], vec![1], vec![0], vec![1]],
    )?;
    let supported = hom_cokernel_presented(&inclusion);
    let points = CyclicSum::new(vec![n, n]);
    let phi = GroupHom::new(
        open,
        points.clone(),
        vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0]],
    )?;
    let map = supported.descend(&phi)?;
    let kernel = hom_kernel(&map);
    let cokernel = hom_cokernel(&map);
    Ok(SupportMapReport {
        g,
        source: supported.canonical(),
        target: points.group(),
        injective: kernel.is_trivial(),
        surjective: cokernel.is_trivial(),
        kernel,
        cokernel,
    })
}

/// Kernel contribution of the two-point model over `F_p`.
pub fn two_point_kernel(p: u64, n: u64) -> Result<FinAbGroup, FinAbError> {
    Ok(support_map_probe(p, n, &SupportMapConfig::default())?.kernel)
}

/// A strict normal crossings boundary over `F_q`: residue degrees of the
/// fields of constants of the components, and the intersection points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SncConfig {
    pub q: u64,
    pub component_degrees: Vec<u32>,
    /// `(i, j, k)`: a point of `D_i ∩ D_j` with residue field `F_{q^k}`.
    pub intersections: Vec<(usize, usize, u32)>,
}

impl SncConfig {
    /// `V(p)` and `V(X)` in `A^1_{Z_p}`, meeting in one rational point.
    pub fn baby(p: u64) -> Self {
        SncConfig {
            q: p,
            component_degrees: vec![1, 1],
            intersections: vec![(0, 1, 1)],
        }
    }
}

/// Orders of the `E_2` terms of the Leray sequence for `j_* Z/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct E2Orders {
    /// `⊕_i H^0(D_i, Z/n(-1))`.
    pub e01: u64,
    /// `⊕_{i<j} Z/n(-1)(D_i ∩ D_j)`.
    pub e02: u64,
    /// `Hom(mu_n(F_q), Z/n)`.
    pub e20: u64,
}

pub fn leray_e2_orders(config: &SncConfig, n: u64) -> Result<E2Orders, FinAbError> {
    if n == 0 {
        return Err(FinAbError::ZeroOrder);
    }
    if config.q < 2 {
        return Err(FinAbError::InvalidConfig(String::from(
            "q must be a prime power",
        )));
    }
    let c = config.component_degrees.len();
    if config.component_degrees.contains(&0) {
        return Err(FinAbError::InvalidConfig(String::from(
            "residue degrees must be positive",
        )));
    }
    for &(i, j, k) in &config.intersections {
        if i >= c || j >= c || i == j || k == 0 {
            return Err(FinAbError::InvalidConfig(alloc::format!(
                "bad intersection ({i}, {j}, {k})"
            )));
        }
    }
    let q = config.q;
    Ok(E2Orders {
        e01: config
            .component_degrees
            .iter()
            .map(|&k| mu_n_order(n, q, k))
            .product(),
        e02: config
            .intersections
            .iter()
            .map(|&(_, _, k)| mu_n_order(n, q, k))
            .product(),
        e20: mu_n_order(n, q, 1),
    })
}
