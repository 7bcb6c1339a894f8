//! Finite-dimensional `gl_n`-modules given by the matrices of `E_ij`.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlnModule {
    n: usize,
    dim: usize,
    action: Vec<Matrix>,
    labels: Option<Vec<String>>,
}

/// First failing relation `[E_ij, E_kl] = δ_jk E_il - δ_li E_kj`, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

fn validate_shape(n: usize, matrices: &[Matrix]) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidModule("arity must be positive".into()));
    }
    if matrices.len() != n * n {
        return Err(Error::InvalidModule(format!(
            "expected {} matrices, got {}",
            n * n,
            matrices.len()
        )));
    }
    let dim = matrices[0].len();
    if dim == 0 {
        return Err(Error::InvalidModule("dimension must be positive".into()));
    }
    for m in matrices {
        if m.len() != dim || m.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidModule(format!("matrices must all be {dim}x{dim}")));
        }
    }
    Ok(dim)
}

/// Checks all `n⁴` commutation relations on raw matrices (`E_ij` at index
/// `i*n + j`), scanning `(i,j,k,l)` lexicographically.
pub fn check_gln_relations(n: usize, matrices: &[Matrix]) -> Result<Option<RelationViolation>> {
    let dim = validate_shape(n, matrices)?;
    let e = |i: usize, j: usize| &matrices[i * n + j];
    let zero = linalg::zeros(dim, dim);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let lhs = linalg::commutator(e(i, j), e(k, l));
                    let mut rhs = zero.clone();
                    if j == k {
                        rhs = linalg::mat_add(&rhs, e(i, l), &Scalar::one());
                    }
                    if l == i {
                        rhs = linalg::mat_add(&rhs, e(k, j), &-Scalar::one());
                    }
                    if lhs != rhs {
                        return Ok(Some(RelationViolation { i, j, k, l }));
                    }
                }
            }
        }
    }
    Ok(None)
}

impl GlnModule {
    /// Validates the matrices; `matrices[i*n + j]` is the action of `E_ij`.
    pub fn new(n: usize, matrices: Vec<Matrix>) -> Result<Self> {
        let dim = validate_shape(n, &matrices)?;
        if let Some(v) = check_gln_relations(n, &matrices)? {
            return Err(Error::InvalidModule(format!(
                "relation fails at (i,j,k,l) = ({},{},{},{})",
                v.i + 1,
                v.j + 1,
                v.k + 1,
                v.l + 1
            )));
        }
        Ok(GlnModule {
            n,
            dim,
            action: matrices,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::InvalidModule("one label per basis vector required".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Matrix of `E_ij` (0-based).
    pub fn e(&self, i: usize, j: usize) -> &Matrix {
        &self.action[i * self.n + j]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.action
    }

    /// Action of the identity matrix `I = Σ E_ii`.
    pub fn identity_action(&self) -> Matrix {
        (0..self.n).fold(linalg::zeros(self.dim, self.dim), |acc, i| {
            linalg::mat_add(&acc, self.e(i, i), &Scalar::one())
        })
    }

    pub fn apply(&self, i: usize, j: usize, v: &[Scalar]) -> Vec<Scalar> {
        linalg::mat_vec(self.e(i, j), v)
    }
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            cur.push(s);
            go(s + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sorts a wedge of distinct indices, returning the sorted tuple and whether
/// the permutation was odd; `None` if an index repeats.
pub fn sort_wedge(indices: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = indices.to_vec();
    let mut odd = false;
    for a in 0..v.len() {
        for b in 0..v.len() - 1 - a {
            if v[b] == v[b + 1] {
                return None;
            }
            if v[b] > v[b + 1] {
                v.swap(b, b + 1);
                odd = !odd;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

/// `Λᵏ(Cⁿ)` on the basis `ε_{i₁}∧…∧ε_{i_k}`, `i₁ < … < i_k`.
pub fn exterior_power(n: usize, k: usize) -> Result<GlnModule> {
    if n == 0 {
        return Err(Error::Range {
            what: "arity",
            value: 0,
            min: 1,
            max: i64::MAX,
        });
    }
    if k > n {
        return Err(Error::Range {
            what: "exterior degree",
            value: k as i64,
            min: 0,
            max: n as i64,
        });
    }
    let basis = wedge_basis(n, k);
    let dim = basis.len();
    let pos = |s: &[usize]| basis.iter().position(|b| b.as_slice() == s).unwrap();
    let mut action = vec![linalg::zeros(dim, dim); n * n];
    for i in 0..n {
        for j in 0..n {
            let m = &mut action[i * n + j];
            for (col, s) in basis.iter().enumerate() {
                let Some(p) = s.iter().position(|&x| x == j) else { continue };
                let mut t = s.clone();
                t[p] = i;
                if let Some((sorted, odd)) = sort_wedge(&t) {
                    m[pos(&sorted)][col] += if odd { -Scalar::one() } else { Scalar::one() };
                }
            }
        }
    }
    let labels = basis
        .iter()
        .map(|s| {
            if s.is_empty() {
                String::from("1")
            } else {
                s.iter().map(|i| format!("e{}", i + 1)).collect::<Vec<_>>().join("^")
            }
        })
        .collect();
    GlnModule::new(n, action)?.with_labels(labels)
}

/// `V(0, b)`: `E_ii ↦ b/n`, off-diagonal `E_ij ↦ 0`.
pub fn one_dim_module(n: usize, b: Scalar) -> Result<GlnModule> {
    if n == 0 {
        return Err(Error::Range {
            what: "arity",
            value: 0,
            min: 1,
            max: i64::MAX,
        });
    }
    let d = b / Scalar::from_integer(n.into());
    let action = (0..n * n)
        .map(|k| {
            if k / n == k % n {
                vec![vec![d.clone()]]
            } else {
                vec![vec![Scalar::zero()]]
            }
        })
        .collect();
    GlnModule::new(n, action)
}

/// `M^τ` for `τ(E_ii) = E_ii + 1`, `τ = id` on `sl_n`.
pub fn tau_twist(m: &GlnModule) -> GlnModule {
    shift_diagonal(m, &Scalar::one())
}

/// Adds `c·I` to every `E_ii` matrix. A shift of a module is again a module.
pub fn shift_diagonal(m: &GlnModule, c: &Scalar) -> GlnModule {
    let id = linalg::identity(m.dim);
    let mut out = m.clone();
    for i in 0..m.n {
        out.action[i * m.n + i] = linalg::mat_add(m.e(i, i), &id, c);
    }
    out
}

/// Basis of `∩ᵢ ker(E_ii - λᵢ)`.
pub fn joint_eigenvectors(m: &GlnModule, eigenvalues: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    crate::error::check_arity(m.n, eigenvalues.len())?;
    let id = linalg::identity(m.dim);
    let mut stacked = Matrix::new();
    for (i, l) in eigenvalues.iter().enumerate() {
        stacked.extend(linalg::mat_add(m.e(i, i), &id, &-l.clone()));
    }
    Ok(linalg::kernel(&stacked))
}
