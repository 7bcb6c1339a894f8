//! Exact linear algebra over `Q`.
//!
//! Row reduction is fraction-free: every stored row is a primitive integer
//! vector and elimination uses cross-multiplication followed by removal of
//! the content. Rationals only reappear when a caller asks for a reduced
//! (RREF) basis.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Sparse rational vector keyed by coordinate index.
pub type SparseVec = BTreeMap<usize, Scalar>;

/// Dense rational matrix, row major.
pub type Matrix = Vec<Vec<Scalar>>;

type IntRow = BTreeMap<usize, BigInt>;

fn content(v: &IntRow) -> BigInt {
    v.values().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn to_int_row(v: &SparseVec) -> IntRow {
    scaled_int_row(v).0
}

/// `(l·v, l)` with `l` the lcm of the denominators.
fn scaled_int_row(v: &SparseVec) -> (IntRow, BigInt) {
    let l = v
        .values()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let row = v
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(&k, x)| (k, x.numer() * (&l / x.denom())))
        .collect();
    (row, l)
}

fn to_scalar_row(v: &IntRow) -> SparseVec {
    v.iter()
        .map(|(&k, x)| (k, Scalar::from_integer(x.clone())))
        .collect()
}

/// `a·u - b·w`.
fn combine(a: &BigInt, u: &IntRow, b: &BigInt, w: &IntRow) -> IntRow {
    let mut out: IntRow = u.iter().map(|(&k, x)| (k, a * x)).collect();
    for (&k, x) in w {
        let e = out.entry(k).or_insert_with(BigInt::zero);
        *e -= b * x;
        if e.is_zero() {
            out.remove(&k);
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Row {
    vec: IntRow,
    tag: IntRow,
}

impl Row {
    fn normalize(&mut self) {
        let g = content(&self.vec).gcd(&content(&self.tag));
        if g.is_zero() || g.is_one() {
            return;
        }
        for x in self.vec.values_mut().chain(self.tag.values_mut()) {
            *x /= &g;
        }
    }
}

/// Row echelon form of a growing set of vectors, keyed by leading
/// coordinate. Each row may carry a tag recording which inserted vectors
/// it is a combination of.
#[derive(Clone, Debug, Default)]
pub struct EchelonSpan {
    rows: BTreeMap<usize, Row>,
}

impl EchelonSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Leading coordinates of the echelon rows, ascending.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    fn reduce(&self, mut r: Row) -> Row {
        while let Some((&p, lead)) = r.vec.iter().next() {
            let Some(row) = self.rows.get(&p) else { break };
            let piv = &row.vec[&p];
            let g = piv.gcd(lead);
            let a = piv / &g;
            let b = lead / &g;
            r.vec = combine(&a, &r.vec, &b, &row.vec);
            r.tag = combine(&a, &r.tag, &b, &row.tag);
            r.normalize();
        }
        r
    }

    fn insert_row(&mut self, r: Row) -> Option<Row> {
        let mut r = self.reduce(r);
        match r.vec.keys().next() {
            Some(&p) => {
                if r.vec[&p].is_negative() {
                    for x in r.vec.values_mut().chain(r.tag.values_mut()) {
                        *x = -core::mem::take(x);
                    }
                }
                self.rows.insert(p, r);
                None
            }
            None => Some(r),
        }
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = Row {
            vec: to_int_row(v),
            tag: IntRow::new(),
        };
        self.insert_row(r).is_none()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let r = Row {
            vec: to_int_row(v),
            tag: IntRow::new(),
        };
        self.reduce(r).vec.is_empty()
    }

    /// The echelon rows as rational vectors.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.rows.values().map(|r| to_scalar_row(&r.vec)).collect()
    }

    /// Canonical representative of `v` modulo the span: zero on every pivot.
    pub fn remainder(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        out.retain(|_, x| !x.is_zero());
        for (&p, row) in &self.rows {
            let Some(c) = out.get(&p).cloned() else { continue };
            let c = c / Scalar::from_integer(row.vec[&p].clone());
            for (&k, x) in &row.vec {
                let e = out.entry(k).or_insert_with(Scalar::zero);
                *e -= &c * Scalar::from_integer(x.clone());
                if e.is_zero() {
                    out.remove(&k);
                }
            }
        }
        out
    }
}

/// Basis of `{c : Σ cⱼ imagesⱼ = 0}`, in reduced row echelon form.
pub fn kernel_of_images(images: &[SparseVec]) -> Vec<SparseVec> {
    let mut span = EchelonSpan::new();
    let mut found = Vec::new();
    for (j, v) in images.iter().enumerate() {
        let (vec, l) = scaled_int_row(v);
        let mut tag = IntRow::new();
        tag.insert(j, l);
        let mut r = Row { vec, tag };
        r.normalize();
        if let Some(dep) = span.insert_row(r) {
            found.push(to_scalar_row(&dep.tag));
        }
    }
    rref(found)
}

/// Reduced row echelon basis of the span of `vectors`, sorted by pivot.
pub fn rref(vectors: Vec<SparseVec>) -> Vec<SparseVec> {
    let mut span = EchelonSpan::new();
    for v in &vectors {
        span.insert(v);
    }
    let mut rows: Vec<SparseVec> = span.basis();
    let pivots: Vec<usize> = span.pivots().collect();
    for k in (0..rows.len()).rev() {
        let p = pivots[k];
        let lead = rows[k][&p].clone();
        for x in rows[k].values_mut() {
            *x /= &lead;
        }
        for m in 0..k {
            let Some(c) = rows[m].get(&p).cloned() else { continue };
            let pivot_row = rows[k].clone();
            for (&q, x) in &pivot_row {
                let e = rows[m].entry(q).or_insert_with(Scalar::zero);
                *e -= &c * x;
                if e.is_zero() {
                    rows[m].remove(&q);
                }
            }
        }
    }
    rows
}

pub fn rank_of(vectors: &[SparseVec]) -> usize {
    let mut span = EchelonSpan::new();
    vectors.iter().filter(|v| span.insert(v)).count()
}

pub fn dense_to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| (k, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec, len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for (&k, x) in v {
        out[k] = x.clone();
    }
    out
}

fn columns(a: &Matrix) -> Vec<SparseVec> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| {
            a.iter()
                .enumerate()
                .filter(|(_, row)| !row[j].is_zero())
                .map(|(i, row)| (i, row[j].clone()))
                .collect()
        })
        .collect()
}

/// Null space `{x : A x = 0}` as dense RREF basis vectors.
pub fn kernel(a: &Matrix) -> Vec<Vec<Scalar>> {
    let cols = a.first().map_or(0, Vec::len);
    kernel_of_images(&columns(a))
        .iter()
        .map(|v| sparse_to_dense(v, cols))
        .collect()
}

pub fn rank(a: &Matrix) -> usize {
    let rows: Vec<SparseVec> = a.iter().map(|r| dense_to_sparse(r)).collect();
    rank_of(&rows)
}

/// Determinant by Bareiss elimination after clearing row denominators.
pub fn determinant(a: &Matrix) -> Scalar {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in a {
        let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        m.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&s| !m[s][k].is_zero()) else {
                return Scalar::zero();
            };
            m.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = if n == 0 { BigInt::one() } else { m[n - 1][n - 1].clone() };
    Scalar::new(sign * det, scale)
}

pub fn identity(d: usize) -> Matrix {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect()
}

pub fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![Scalar::zero(); c]; r]
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Scalar::zero(), |acc, k| {
                        if row[k].is_zero() {
                            acc
                        } else {
                            acc + &row[k] * &b[k][j]
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn mat_add(a: &Matrix, b: &Matrix, c: &Scalar) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + c * y).collect())
        .collect()
}

pub fn mat_scale(a: &Matrix, c: &Scalar) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    mat_add(&mat_mul(a, b), &mat_mul(b, a), &-Scalar::one())
}

pub fn mat_vec(a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(Scalar::zero(), |acc, (x, y)| {
                if x.is_zero() || y.is_zero() {
                    acc
                } else {
                    acc + x * y
                }
            })
        })
        .collect()
}

/// Inverse by Gauss-Jordan elimination, `None` when singular.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    for k in 0..n {
        let s = (k..n).find(|&s| !m[s][k].is_zero())?;
        m.swap(k, s);
        let lead = m[k][k].clone();
        for x in m[k].iter_mut() {
            *x /= &lead;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let c = m[i][k].clone();
                let pivot_row = m[k].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &c * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn is_zero_matrix(a: &Matrix) -> bool {
    a.iter().all(|r| r.iter().all(Zero::is_zero))
}
