//! The universal quasi-Whittaker `g≥0`-module `M(φ) = Ind_{g≥1}^{g≥0} C w_φ`
//! for `n = 2`.
//!
//! `M(φ)` has the PBW basis `e^a i^b h^c f^d w_φ`. The basis is truncated
//! at a total degree `cap`; acting with `g₀` on a monomial of degree `cap`
//! raises [`Error::CapExceeded`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{check_arity, Error, Result};
use crate::lincomb::{add_scaled, add_term, Terms};
use crate::linalg::{self, Matrix, SparseVec};
use crate::module::PositiveModule;
use crate::multi_index::MultiIndex;
use crate::scalar::Scalar;
use crate::witt::{self, symbol_grade, w2, Symbol, WittElement};

/// Coordinates of homogeneous elements in a fixed basis of `g_k`.
#[derive(Clone, Debug)]
struct Coordinates {
    symbols: Vec<Symbol>,
    inverse: Matrix,
}

impl Coordinates {
    fn new(grade: i32, basis: &[WittElement]) -> Self {
        let symbols = witt::symbols_of_grade(2, grade);
        let columns: Matrix = symbols
            .iter()
            .map(|s| basis.iter().map(|b| b.coefficient(s)).collect())
            .collect();
        let inverse = linalg::inverse(&columns).expect("basis of g_k");
        Coordinates { symbols, inverse }
    }

    fn of(&self, x: &WittElement) -> Vec<Scalar> {
        let v: Vec<Scalar> = self.symbols.iter().map(|s| x.coefficient(s)).collect();
        linalg::mat_vec(&self.inverse, &v)
    }

    fn of_symbol(&self, sym: &Symbol) -> Vec<Scalar> {
        let k = self.symbols.iter().position(|s| s == sym).expect("symbol of this grade");
        self.inverse.iter().map(|r| r[k].clone()).collect()
    }
}

/// A character `φ` of `g≥1` for `n = 2`: its values on `p₀..p₃, q₀, q₁`,
/// zero on `g≥2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    p: [Scalar; 4],
    q: [Scalar; 2],
}

impl Character {
    pub fn new(p: [Scalar; 4], q: [Scalar; 2]) -> Self {
        Character { p, q }
    }

    pub fn p(&self) -> &[Scalar; 4] {
        &self.p
    }

    pub fn q(&self) -> &[Scalar; 2] {
        &self.q
    }

    fn values(&self) -> [Scalar; 6] {
        [
            self.p[0].clone(),
            self.p[1].clone(),
            self.p[2].clone(),
            self.p[3].clone(),
            self.q[0].clone(),
            self.q[1].clone(),
        ]
    }

    /// `φ(x)` for `x ∈ g≥1`.
    pub fn value(&self, x: &WittElement) -> Result<Scalar> {
        check_arity(2, x.arity())?;
        if let Some((sym, _)) = x.terms().find(|(s, _)| symbol_grade(s) < 1) {
            return Err(Error::Range {
                what: "grade",
                value: symbol_grade(sym) as i64,
                min: 1,
                max: i64::MAX,
            });
        }
        let coords = Coordinates::new(1, &w2::g1_basis()).of(&x.grade_component(1));
        Ok(coords
            .iter()
            .zip(self.values().iter())
            .fold(Scalar::zero(), |acc, (a, b)| acc + a * b))
    }
}

type Monomial = [u32; 4];

fn degree(m: &Monomial) -> u32 {
    m.iter().sum()
}

/// `M(φ)` truncated at PBW degree `cap`.
#[derive(Clone, Debug)]
pub struct WhittakerModule {
    phi: Character,
    cap: u32,
    basis: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    g0: Vec<Vec<SparseVec>>,
    g1: Vec<Vec<SparseVec>>,
    c0: Coordinates,
    c1: Coordinates,
}

struct Builder {
    phi: [Scalar; 6],
    /// `[g0[a], g0[b]]` in the `g₀` basis.
    br00: Vec<Vec<Vec<Scalar>>>,
    /// `[g1[a], g0[b]]` in the `g₁` basis.
    br10: Vec<Vec<Vec<Scalar>>>,
    memo0: BTreeMap<(usize, Monomial), Terms<Monomial>>,
    memo1: BTreeMap<(usize, Monomial), Terms<Monomial>>,
}

fn first_factor(m: &Monomial) -> Option<usize> {
    m.iter().position(|&a| a > 0)
}

impl Builder {
    /// `g₀[y] · m` by straightening against the order `e < i < h < f`.
    fn act0(&mut self, y: usize, m: &Monomial) -> Terms<Monomial> {
        if let Some(hit) = self.memo0.get(&(y, *m)) {
            return hit.clone();
        }
        let mut out = Terms::new();
        match first_factor(m) {
            Some(z) if z < y => {
                let mut rest = *m;
                rest[z] -= 1;
                let inner = self.act0(y, &rest);
                let lifted = self.act0_terms(z, &inner);
                add_scaled(&mut out, &lifted, &Scalar::from_integer(1.into()));
                let br = self.br00[y][z].clone();
                for (w, c) in br.iter().enumerate() {
                    if !c.is_zero() {
                        let t = self.act0(w, &rest);
                        add_scaled(&mut out, &t, c);
                    }
                }
            }
            _ => {
                let mut up = *m;
                up[y] += 1;
                out.insert(up, Scalar::from_integer(1.into()));
            }
        }
        self.memo0.insert((y, *m), out.clone());
        out
    }

    fn act0_terms(&mut self, y: usize, v: &Terms<Monomial>) -> Terms<Monomial> {
        let mut out = Terms::new();
        for (m, c) in v {
            let t = self.act0(y, m);
            add_scaled(&mut out, &t, c);
        }
        out
    }

    /// `g₁[x] · m` by commuting `x` to `w_φ`.
    fn act1(&mut self, x: usize, m: &Monomial) -> Terms<Monomial> {
        if let Some(hit) = self.memo1.get(&(x, *m)) {
            return hit.clone();
        }
        let mut out = Terms::new();
        match first_factor(m) {
            None => add_term(&mut out, *m, self.phi[x].clone()),
            Some(z) => {
                let mut rest = *m;
                rest[z] -= 1;
                let inner = self.act1(x, &rest);
                let lifted = self.act0_terms(z, &inner);
                add_scaled(&mut out, &lifted, &Scalar::from_integer(1.into()));
                let br = self.br10[x][z].clone();
                for (w, c) in br.iter().enumerate() {
                    if !c.is_zero() {
                        let t = self.act1(w, &rest);
                        add_scaled(&mut out, &t, c);
                    }
                }
            }
        }
        self.memo1.insert((x, *m), out.clone());
        out
    }
}

impl WhittakerModule {
    pub fn new(phi: Character, cap: u32) -> Self {
        let g0b = w2::g0_basis();
        let g1b = w2::g1_basis();
        let c0 = Coordinates::new(0, &g0b);
        let c1 = Coordinates::new(1, &g1b);
        let br00 = g0b
            .iter()
            .map(|a| g0b.iter().map(|b| c0.of(&a.bracket(b).unwrap())).collect())
            .collect();
        let br10 = g1b
            .iter()
            .map(|a| g0b.iter().map(|b| c1.of(&a.bracket(b).unwrap())).collect())
            .collect();
        let mut builder = Builder {
            phi: phi.values(),
            br00,
            br10,
            memo0: BTreeMap::new(),
            memo1: BTreeMap::new(),
        };

        let mut basis: Vec<Monomial> = (0..=cap)
            .flat_map(|d| MultiIndex::of_size(4, d))
            .map(|a| [a.get(0), a.get(1), a.get(2), a.get(3)])
            .collect();
        basis.sort_by_key(|m| (degree(m), *m));
        let index: BTreeMap<Monomial, usize> = basis.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        let to_sparse = |t: &Terms<Monomial>| -> SparseVec { t.iter().map(|(m, c)| (index[m], c.clone())).collect() };

        let g0 = (0..4)
            .map(|y| {
                basis
                    .iter()
                    .filter(|m| degree(m) < cap)
                    .map(|m| to_sparse(&builder.act0(y, m)))
                    .collect()
            })
            .collect();
        let g1 = (0..6)
            .map(|x| basis.iter().map(|m| to_sparse(&builder.act1(x, m))).collect())
            .collect();
        WhittakerModule {
            phi,
            cap,
            basis,
            index,
            g0,
            g1,
            c0,
            c1,
        }
    }

    pub fn character(&self) -> &Character {
        &self.phi
    }

    /// Index of `e^a i^b h^c f^d w_φ`.
    pub fn index_of(&self, exponents: [u32; 4]) -> Option<usize> {
        self.index.get(&exponents).copied()
    }

    pub fn monomial(&self, k: usize) -> [u32; 4] {
        self.basis[k]
    }

    /// Number of basis monomials of degree at most `d`.
    pub fn slice_dim(&self, d: u32) -> usize {
        self.basis.iter().filter(|m| degree(m) <= d).count()
    }

    /// `g₀` basis element (`0..4` for `e, i, h, f`) applied to `e_k`.
    pub fn act_g0(&self, y: usize, k: usize) -> Result<SparseVec> {
        let d = degree(&self.basis[k]);
        if d >= self.cap {
            return Err(Error::CapExceeded {
                cap: self.cap,
                needed: d + 1,
            });
        }
        Ok(self.g0[y][k].clone())
    }

    /// `g₁` basis element (`0..6` for `p₀..p₃, q₀, q₁`) applied to `e_k`.
    pub fn act_g1(&self, x: usize, k: usize) -> SparseVec {
        self.g1[x][k].clone()
    }
}

fn accumulate(out: &mut SparseVec, v: &SparseVec, c: &Scalar) {
    for (k, x) in v {
        add_term(out, *k, c * x);
    }
}

impl PositiveModule for WhittakerModule {
    fn arity(&self) -> usize {
        2
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn level(&self) -> u32 {
        2
    }

    fn degree(&self, k: usize) -> u32 {
        degree(&self.basis[k])
    }

    fn cap(&self) -> Option<u32> {
        Some(self.cap)
    }

    fn act_symbol(&self, sym: &Symbol, k: usize) -> Result<SparseVec> {
        check_arity(2, sym.0.arity())?;
        let mut out = SparseVec::new();
        match symbol_grade(sym) {
            0 => {
                for (y, c) in self.c0.of_symbol(sym).iter().enumerate() {
                    if !c.is_zero() {
                        accumulate(&mut out, &self.act_g0(y, k)?, c);
                    }
                }
            }
            1 => {
                for (x, c) in self.c1.of_symbol(sym).iter().enumerate() {
                    if !c.is_zero() {
                        accumulate(&mut out, &self.g1[x][k], c);
                    }
                }
            }
            g if g < 0 => {
                return Err(Error::Range {
                    what: "grade",
                    value: g as i64,
                    min: 0,
                    max: i64::MAX,
                })
            }
            _ => {}
        }
        Ok(out)
    }
}
