//! Integral lattices given by labeled Gram matrices.
//!
//! Diagram lattices use the negative convention: `−2` on the diagonal and
//! `+1` for every edge, so `T(2,3,5)` is the negative-definite `E_8`.

use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("{labels} labels for a rank-{rank} Gram matrix")]
    LabelMismatch { labels: usize, rank: usize },
    #[error("E_k is only provided for 6 <= k <= 10, got {0}")]
    UnsupportedK(i64),
    #[error("invalid triple ({0}, {1}, {2})")]
    InvalidTriple(i64, i64, i64),
    #[error("lattice is not unimodular (|det| = {0})")]
    NotUnimodular(BigInt),
    #[error("lattice is definite; only indefinite lattices are classified")]
    Definite,
}

/// A symmetric integer Gram matrix with one label per basis vector.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice")]
pub struct GramLattice {
    labels: Vec<String>,
    gram: IntMatrix,
}

#[derive(Deserialize)]
struct RawLattice {
    labels: Vec<String>,
    gram: IntMatrix,
}

impl TryFrom<RawLattice> for GramLattice {
    type Error = LatticeError;
    fn try_from(r: RawLattice) -> Result<Self, LatticeError> {
        GramLattice::new(r.labels, r.gram)
    }
}

impl fmt::Debug for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "GramLattice({:?}, {})", self.labels, self.gram)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

impl Signature {
    pub fn is_indefinite(&self) -> bool {
        self.positive > 0 && self.negative > 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.zero, self.negative)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// `U · G · V = diag(factors)` with `U`, `V` unimodular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    #[serde(with = "crate::intjson::vec")]
    pub factors: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Which generating system of the Milnor lattice to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// Arms, then `Σ₊`, `Σ₋`.
    S,
    /// Arms, then `Σ₊`, `T²`.
    SPrime,
}

impl GramLattice {
    pub fn new(labels: Vec<String>, gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if labels.len() != gram.nrows() {
            return Err(LatticeError::LabelMismatch {
                labels: labels.len(),
                rank: gram.nrows(),
            });
        }
        Ok(GramLattice { labels, gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn pair(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        self.gram.pair(u, v)
    }

    /// Reorders the basis: vector `i` of the result is vector `order[i]` here.
    pub fn permuted(&self, order: &[usize]) -> Self {
        GramLattice {
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            gram: self.gram.permute_symmetric(order),
        }
    }

    /// The sublattice spanned by the first `k` basis vectors.
    pub fn leading(&self, k: usize) -> Self {
        let mut g = IntMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = self.gram[(i, j)].clone();
            }
        }
        GramLattice {
            labels: self.labels[..k].to_vec(),
            gram: g,
        }
    }

    /// Gram matrix in the basis given by the rows of `basis`: `B·G·Bᵗ`.
    pub fn change_basis(&self, basis: &IntMatrix, labels: Vec<String>) -> Result<Self, LatticeError> {
        let g = &(basis * &self.gram) * &basis.transpose();
        GramLattice::new(labels, g)
    }

    pub fn negated(&self) -> Self {
        let mut g = self.gram.clone();
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                g[(i, j)] = -&g[(i, j)];
            }
        }
        GramLattice {
            labels: self.labels.clone(),
            gram: g,
        }
    }

    pub fn is_unimodular(&self) -> bool {
        discriminant(self).abs().is_one()
    }
}

fn labeled(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// The `A_n` Cartan matrix (`+2` diagonal, `−1` between neighbours).
pub fn a_block(n: usize) -> GramLattice {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = BigInt::from(2);
        if i + 1 < n {
            g[(i, i + 1)] = BigInt::from(-1);
            g[(i + 1, i)] = BigInt::from(-1);
        }
    }
    GramLattice {
        labels: labeled("a", n),
        gram: g,
    }
}

/// `H = (0,1;1,0)`.
pub fn hyperbolic_plane() -> GramLattice {
    GramLattice {
        labels: vec!["e".into(), "f".into()],
        gram: IntMatrix::from_i64_rows(&[[0, 1], [1, 0]]),
    }
}

pub fn direct_sum(l1: &GramLattice, l2: &GramLattice) -> GramLattice {
    let mut labels = l1.labels.clone();
    labels.extend(l2.labels.iter().cloned());
    GramLattice {
        labels,
        gram: l1.gram.block_diag(&l2.gram),
    }
}

/// Orthogonal sum of all lattices in order; the empty sum has rank 0.
pub fn direct_sum_all<'a, I: IntoIterator<Item = &'a GramLattice>>(parts: I) -> GramLattice {
    parts.into_iter().fold(
        GramLattice {
            labels: Vec::new(),
            gram: IntMatrix::zeros(0, 0),
        },
        |acc, l| direct_sum(&acc, l),
    )
}

pub(crate) fn check_triple(p: i64, q: i64, r: i64) -> Result<(), LatticeError> {
    if p < 2 || q < 2 || r < 2 {
        return Err(LatticeError::InvalidTriple(p, q, r));
    }
    Ok(())
}

/// `qr + rp + pq − pqr`, negative exactly for hyperbolic triples.
pub fn triple_defect(p: i64, q: i64, r: i64) -> BigInt {
    let (p, q, r) = (BigInt::from(p), BigInt::from(q), BigInt::from(r));
    &q * &r + &r * &p + &p * &q - &p * &q * &r
}

/// Labels of the `S'`/`T(p,q,r)` basis: `Σ_{m,j}` arms then `Σ₊`.
pub fn arm_labels(p: i64, q: i64, r: i64) -> Vec<String> {
    let mut labels = Vec::new();
    for (m, len) in [(1, p), (2, q), (3, r)] {
        for j in 1..len {
            labels.push(format!("sigma_{m}_{j}"));
        }
    }
    labels.push("sigma_plus".into());
    labels
}

/// The star diagram `T(p,q,r)`: arms of `p−1`, `q−1`, `r−1` vertices attached
/// at their first vertex to a central vertex, rank `p+q+r−2`.
pub fn t_lattice(p: i64, q: i64, r: i64) -> Result<GramLattice, LatticeError> {
    check_triple(p, q, r)?;
    let n = (p + q + r - 2) as usize;
    let centre = n - 1;
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = BigInt::from(-2);
    }
    let mut start = 0usize;
    for len in [p - 1, q - 1, r - 1] {
        let len = len as usize;
        for k in 0..len {
            if k + 1 < len {
                g[(start + k, start + k + 1)] = BigInt::one();
                g[(start + k + 1, start + k)] = BigInt::one();
            }
        }
        g[(start, centre)] = BigInt::one();
        g[(centre, start)] = BigInt::one();
        start += len;
    }
    Ok(GramLattice {
        labels: arm_labels(p, q, r),
        gram: g,
    })
}

/// `E_k := T(2,3,k−3)` for `6 ≤ k ≤ 10`.
pub fn e_lattice(k: i64) -> Result<GramLattice, LatticeError> {
    if !(6..=10).contains(&k) {
        return Err(LatticeError::UnsupportedK(k));
    }
    t_lattice(2, 3, k - 3)
}

/// The Milnor lattice `T̃(p,q,r)` of rank `p+q+r−1` in the chosen generators.
pub fn t_tilde_lattice(p: i64, q: i64, r: i64, generator: Generator) -> Result<GramLattice, LatticeError> {
    check_triple(p, q, r)?;
    if triple_defect(p, q, r).is_positive() {
        return Err(LatticeError::InvalidTriple(p, q, r));
    }
    let t = t_lattice(p, q, r)?;
    let n = t.rank();
    match generator {
        Generator::SPrime => {
            let fibre = GramLattice {
                labels: vec!["T2".into()],
                gram: IntMatrix::zeros(1, 1),
            };
            Ok(direct_sum(&t, &fibre))
        }
        Generator::S => {
            let mut g = IntMatrix::zeros(n + 1, n + 1);
            for i in 0..n {
                for j in 0..n {
                    g[(i, j)] = t.gram[(i, j)].clone();
                }
                // Σ₋ pairs like Σ₊ with the arms
                g[(i, n)] = t.gram[(i, n - 1)].clone();
                g[(n, i)] = t.gram[(n - 1, i)].clone();
            }
            g[(n, n)] = BigInt::from(-2);
            let mut labels = t.labels.clone();
            labels.push("sigma_minus".into());
            Ok(GramLattice { labels, gram: g })
        }
    }
}

/// Exact determinant of the Gram matrix.
pub fn discriminant(l: &GramLattice) -> BigInt {
    l.gram.det()
}

pub fn parity(l: &GramLattice) -> Parity {
    let even = (0..l.rank()).all(|i| (&l.gram[(i, i)] % BigInt::from(2)).is_zero());
    if even {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Inertia by congruence diagonalization over `Q`.
pub fn signature(l: &GramLattice) -> Signature {
    let n = l.rank();
    let mut a: Vec<Vec<BigRational>> = l
        .gram
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg) = (0, 0);
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(i) => i,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else { break };
                // e_i ← e_i + e_j makes the (i,i) entry 2·a_ij ≠ 0
                let row_j = a[j].clone();
                for (x, v) in a[i].iter_mut().zip(row_j) {
                    *x += v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[i] += v;
                }
                i
            }
        };
        let d = a[pivot][pivot].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&k| k != pivot);
        for &i in &active {
            let f = &a[i][pivot] / &d;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let v = &f * &a[pivot][j];
                a[i][j] -= v;
            }
        }
        for &i in &active {
            a[i][pivot] = BigRational::zero();
            a[pivot][i] = BigRational::zero();
        }
    }
    Signature {
        positive: pos,
        zero: n - pos - neg,
        negative: neg,
    }
}

/// Smith normal form of the Gram matrix (or any integer matrix).
pub fn smith_normal_form(l: &GramLattice) -> SnfResult {
    snf_matrix(&l.gram)
}

pub fn snf_matrix(g: &IntMatrix) -> SnfResult {
    let (m, n) = (g.nrows(), g.ncols());
    let mut a = g.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    fn swap_rows(x: &mut IntMatrix, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..x.ncols() {
            let t = x[(i, k)].clone();
            x[(i, k)] = x[(j, k)].clone();
            x[(j, k)] = t;
        }
    }
    fn swap_cols(x: &mut IntMatrix, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..x.nrows() {
            let t = x[(k, i)].clone();
            x[(k, i)] = x[(k, j)].clone();
            x[(k, j)] = t;
        }
    }
    // row_i -= f·row_j
    fn add_row(x: &mut IntMatrix, i: usize, j: usize, f: &BigInt) {
        for k in 0..x.ncols() {
            let t = f * &x[(j, k)];
            x[(i, k)] -= t;
        }
    }
    fn add_col(x: &mut IntMatrix, i: usize, j: usize, f: &BigInt) {
        for k in 0..x.nrows() {
            let t = f * &x[(k, j)];
            x[(k, i)] -= t;
        }
    }

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[(i, j)].is_zero()
                        && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(a, u, v);
            };
            swap_rows(&mut a, t, bi);
            swap_rows(&mut u, t, bi);
            swap_cols(&mut a, t, bj);
            swap_cols(&mut v, t, bj);

            let mut clean = true;
            for i in t + 1..m {
                let f = &a[(i, t)] / &a[(t, t)];
                if !f.is_zero() {
                    add_row(&mut a, i, t, &f);
                    add_row(&mut u, i, t, &f);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..n {
                let f = &a[(t, j)] / &a[(t, t)];
                if !f.is_zero() {
                    add_col(&mut a, j, t, &f);
                    add_col(&mut v, j, t, &f);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let offending = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !(&a[(i, j)] % &a[(t, t)]).is_zero()));
            match offending {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    add_row(&mut a, t, i, &minus_one);
                    add_row(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            for k in 0..n {
                a[(t, k)] = -&a[(t, k)];
            }
            for k in 0..m {
                u[(t, k)] = -&u[(t, k)];
            }
        }
    }
    return finish(a, u, v);

    fn finish(a: IntMatrix, u: IntMatrix, v: IntMatrix) -> SnfResult {
        let k = a.nrows().min(a.ncols());
        let factors = (0..k).map(|i| a[(i, i)].clone()).collect();
        SnfResult { factors, u, v }
    }
}

/// Basis of `{x : G·x = 0}` over `Z`, each vector with first nonzero entry positive.
pub fn radical(l: &GramLattice) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(l);
    let n = l.rank();
    (0..n)
        .filter(|&j| snf.factors.get(j).is_none_or(|d| d.is_zero()))
        .map(|j| {
            let mut col = snf.v.column(j);
            if col.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                col.iter_mut().for_each(|x| *x = -&*x);
            }
            col
        })
        .collect()
}

/// Invariants of `T(p,q,r)` next to the closed-form discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub triple: [i64; 3],
    pub rank: usize,
    #[serde(with = "crate::intjson")]
    pub discriminant: BigInt,
    /// `(−1)^{p+q+r−2}(qr + rp + pq − pqr)`.
    #[serde(with = "crate::intjson")]
    pub expected_discriminant: BigInt,
    pub signature: Signature,
    pub parity: Parity,
    #[serde(with = "crate::intjson::vec")]
    pub smith_factors: Vec<BigInt>,
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.discriminant == self.expected_discriminant
    }
}

pub fn lattice_report(p: i64, q: i64, r: i64) -> Result<LatticeReport, LatticeError> {
    let l = t_lattice(p, q, r)?;
    let sign = if (p + q + r) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    Ok(LatticeReport {
        triple: [p, q, r],
        rank: l.rank(),
        discriminant: discriminant(&l),
        expected_discriminant: sign * triple_defect(p, q, r),
        signature: signature(&l),
        parity: parity(&l),
        smith_factors: smith_normal_form(&l).factors,
    })
}

/// Isomorphism test for indefinite unimodular lattices: same rank,
/// signature and parity.
pub fn unimodular_indefinite_isomorphic(l1: &GramLattice, l2: &GramLattice) -> Result<bool, LatticeError> {
    for l in [l1, l2] {
        let d = discriminant(l);
        if !d.abs().is_one() {
            return Err(LatticeError::NotUnimodular(d.abs()));
        }
        if !signature(l).is_indefinite() {
            return Err(LatticeError::Definite);
        }
    }
    Ok(l1.rank() == l2.rank() && signature(l1) == signature(l2) && parity(l1) == parity(l2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Oracle: floating-point eigenvalue counts.
    fn eigen_signature(l: &GramLattice) -> Signature {
        let n = l.rank();
        let m = DMatrix::from_fn(n, n, |i, j| l.gram()[(i, j)].to_f64().unwrap());
        let ev = m.symmetric_eigen().eigenvalues;
        let pos = ev.iter().filter(|&&x| x > 1e-8).count();
        let neg = ev.iter().filter(|&&x| x < -1e-8).count();
        Signature {
            positive: pos,
            zero: n - pos - neg,
            negative: neg,
        }
    }

    fn check_snf(g: &IntMatrix) {
        let s = snf_matrix(g);
        let d = &(&s.u * g) * &s.v;
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                let expected = if i == j { s.factors[i].clone() } else { BigInt::zero() };
                assert_eq!(d[(i, j)], expected, "U G V != D for {g}");
            }
        }
        assert!(s.u.det().abs().is_one() && s.v.det().abs().is_one());
        for w in s.factors.windows(2) {
            assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        if g.is_square() {
            let prod: BigInt = s.factors.iter().product();
            assert_eq!(prod, g.det().abs());
        }
    }

    #[test]
    fn basic_lattices() {
        let h = hyperbolic_plane();
        assert_eq!(discriminant(&h), big(-1));
        assert_eq!(signature(&h), Signature { positive: 1, zero: 0, negative: 1 });
        let e8 = e_lattice(8).unwrap();
        assert_eq!(discriminant(&e8), big(1));
        assert_eq!(signature(&e8).negative, 8);
        assert_eq!(discriminant(&a_block(3)), big(4));
        assert!(matches!(e_lattice(11), Err(LatticeError::UnsupportedK(11))));
        assert!(matches!(e_lattice(5), Err(LatticeError::UnsupportedK(5))));
    }

    #[test]
    fn k3_lattice_shape() {
        let e8 = e_lattice(8).unwrap();
        let h = hyperbolic_plane();
        let k3 = direct_sum_all([&e8, &e8, &h, &h, &h]);
        assert_eq!(k3.rank(), 22);
        assert_eq!(signature(&k3), Signature { positive: 3, zero: 0, negative: 19 });
        assert!(discriminant(&k3).abs().is_one());
        assert_eq!(parity(&k3), Parity::Even);
    }

    #[test]
    fn t_lattice_discriminants() {
        assert_eq!(discriminant(&t_lattice(2, 3, 7).unwrap()), big(-1));
        assert_eq!(discriminant(&t_lattice(3, 3, 3).unwrap()), big(0));
        assert_eq!(discriminant(&t_lattice(2, 3, 9).unwrap()).abs(), big(3));
        assert!(t_lattice(1, 3, 7).is_err());
    }

    #[test]
    fn discriminant_formula_small_range() {
        for p in 2..=7 {
            for q in p..=7 {
                for r in q..=7 {
                    let sign = if (p + q + r - 2) % 2 == 0 { 1 } else { -1 };
                    let expected = triple_defect(p, q, r) * sign;
                    assert_eq!(discriminant(&t_lattice(p, q, r).unwrap()), expected, "({p},{q},{r})");
                }
            }
        }
    }

    #[test]
    fn e_k_unimodularity() {
        let uni: Vec<i64> = (6..=10)
            .filter(|&k| e_lattice(k).unwrap().is_unimodular())
            .collect();
        assert_eq!(uni, vec![8, 10]);
    }

    #[test]
    fn milnor_lattice_generators() {
        let sp = t_tilde_lattice(2, 3, 7, Generator::SPrime).unwrap();
        let n = sp.rank();
        assert_eq!(n, 11);
        assert!((0..n).all(|i| sp.gram()[(n - 1, i)].is_zero()));
        let s = t_tilde_lattice(3, 4, 5, Generator::S).unwrap();
        let n = s.rank();
        let (plus, minus) = (n - 2, n - 1);
        for i in 0..n {
            assert_eq!(s.gram()[(plus, i)], s.gram()[(minus, i)]);
        }
        assert_eq!(s.gram()[(plus, minus)], big(-2));
        // p = 2: the first arm is the single vertex sigma_1_1
        let two = t_tilde_lattice(2, 4, 5, Generator::S).unwrap();
        assert_eq!(two.gram()[(0, 0)], big(-2));
        assert_eq!(two.labels()[0], "sigma_1_1");
        assert!(t_tilde_lattice(2, 3, 5, Generator::S).is_err());
    }

    /// [Σ₋] = [Σ₊] − [T²] carries the S Gram matrix onto the S' one.
    #[test]
    fn s_and_s_prime_are_congruent() {
        for (p, q, r) in [(2, 3, 7), (3, 3, 4), (2, 4, 4), (4, 5, 6), (3, 3, 3)] {
            let s = t_tilde_lattice(p, q, r, Generator::S).unwrap();
            let sp = t_tilde_lattice(p, q, r, Generator::SPrime).unwrap();
            let n = s.rank();
            // rows: S' basis expressed in S; T² = Σ₊ − Σ₋
            let mut b = IntMatrix::identity(n);
            b[(n - 1, n - 2)] = big(1);
            b[(n - 1, n - 1)] = big(-1);
            assert!(b.det().abs().is_one());
            let moved = s.change_basis(&b, sp.labels().to_vec()).unwrap();
            assert_eq!(moved, sp);
        }
    }

    #[test]
    fn radical_is_fibre_class() {
        for (p, q, r) in [(2, 3, 7), (3, 3, 4), (2, 5, 5), (3, 4, 5), (5, 5, 5)] {
            let s = t_tilde_lattice(p, q, r, Generator::S).unwrap();
            let rad = radical(&s);
            assert_eq!(rad.len(), 1, "({p},{q},{r})");
            let n = s.rank();
            let mut expected = vec![BigInt::zero(); n];
            expected[n - 2] = big(1);
            expected[n - 1] = big(-1);
            assert_eq!(rad[0], expected);
            let sp = t_tilde_lattice(p, q, r, Generator::SPrime).unwrap();
            let rad = radical(&sp);
            assert_eq!(rad.len(), 1);
            assert!(rad[0][..n - 1].iter().all(Zero::is_zero) && rad[0][n - 1].is_one());
        }
    }

    #[test]
    fn snf_examples() {
        let t239 = t_lattice(2, 3, 9).unwrap();
        let s = smith_normal_form(&t239);
        let mut expected = vec![big(1); t239.rank() - 1];
        expected.push(big(3));
        assert_eq!(s.factors, expected);
        check_snf(t239.gram());
        check_snf(&IntMatrix::from_i64_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]));
        check_snf(&IntMatrix::from_i64_rows(&[[0, 0], [0, 0]]));
        check_snf(&IntMatrix::from_i64_rows(&[[6, 4], [4, 6], [2, 2]]));
    }

    #[test]
    fn isomorphism_test() {
        let e8 = e_lattice(8).unwrap();
        let h = hyperbolic_plane();
        let t237 = t_lattice(2, 3, 7).unwrap();
        assert!(unimodular_indefinite_isomorphic(&t237, &direct_sum(&e8, &h)).unwrap());
        let lhs = direct_sum_all([&t237, &t237, &h]);
        let rhs = direct_sum_all([&e8, &e8, &h, &h, &h]);
        assert!(unimodular_indefinite_isomorphic(&lhs, &rhs).unwrap());
        let odd = GramLattice::new(
            vec!["u".into(), "v".into()],
            IntMatrix::from_i64_rows(&[[1, 0], [0, -1]]),
        )
        .unwrap();
        assert!(!unimodular_indefinite_isomorphic(&h, &odd).unwrap());
        assert_eq!(unimodular_indefinite_isomorphic(&e8, &e8), Err(LatticeError::Definite));
        assert!(matches!(
            unimodular_indefinite_isomorphic(&t_lattice(2, 3, 8).unwrap(), &h),
            Err(LatticeError::NotUnimodular(_))
        ));
    }

    #[test]
    fn json_shape() {
        let h = hyperbolic_plane();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"labels":["e","f"],"gram":[[0,1],[1,0]]}"#);
        let back: GramLattice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<GramLattice>(r#"{"labels":["e","f"],"gram":[[0,1],[2,0]]}"#).is_err());
    }

    proptest! {
        #[test]
        fn signature_matches_eigenvalues(entries in prop::collection::vec(-3i64..=3, 21)) {
            // random symmetric 6x6
            let n = 6;
            let mut g = IntMatrix::zeros(n, n);
            let mut it = entries.into_iter();
            for i in 0..n {
                for j in i..n {
                    let v = big(it.next().unwrap());
                    g[(i, j)] = v.clone();
                    g[(j, i)] = v;
                }
            }
            let l = GramLattice::new(labeled("x", n), g.clone()).unwrap();
            prop_assert_eq!(signature(&l), eigen_signature(&l));
            check_snf(&g);
            let snf = smith_normal_form(&l);
            prop_assert_eq!(radical(&l).len(), n - snf.rank());
            for v in radical(&l) {
                prop_assert!(g.apply(&v).iter().all(Zero::is_zero));
            }
        }
    }
}
