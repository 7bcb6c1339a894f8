//! Vectors of graded smooth modules and the action interfaces.
//!
//! Every built-in module has a PBW-type basis `∂^α ⊗ e_k`, where `e_k`
//! runs over a basis of a fiber (a `gl_n`-module, a `g≥0`-module, or a
//! truncation of one). A [`ModuleVector`] is `Σ_α ∂^α ⊗ v_α`.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::error::{check_arity, Error, Result};
use crate::lincomb::{add_scaled, add_term, Terms};
use crate::linalg::{self, Matrix, SparseVec};
use crate::multi_index::MultiIndex;
use crate::scalar::Scalar;
use crate::witt::{bracket_symbols, symbol_grade, Symbol, WittElement};

/// Coordinates with respect to the basis `∂^α ⊗ e_k`.
pub type BasisTerms = Terms<(MultiIndex, usize)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Tensor,
    Induced,
    Trivial,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Tensor => "tensor",
            Family::Induced => "induced",
            Family::Trivial => "trivial",
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ModuleVector {
    n: usize,
    family: Family,
    fiber: usize,
    terms: BTreeMap<MultiIndex, Vec<Scalar>>,
}

impl ModuleVector {
    pub fn zero(n: usize, family: Family, fiber: usize) -> Self {
        ModuleVector {
            n,
            family,
            fiber,
            terms: BTreeMap::new(),
        }
    }

    /// `∂^α ⊗ e_k`.
    pub fn basis(family: Family, fiber: usize, alpha: MultiIndex, k: usize) -> Self {
        assert!(k < fiber, "fiber index {k} out of range");
        let mut v = vec![Scalar::zero(); fiber];
        v[k] = Scalar::from_integer(1.into());
        let mut terms = BTreeMap::new();
        let n = alpha.arity();
        terms.insert(alpha, v);
        ModuleVector {
            n,
            family,
            fiber,
            terms,
        }
    }

    pub fn from_terms(
        n: usize,
        family: Family,
        fiber: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Vec<Scalar>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(n, family, fiber);
        for (alpha, v) in terms {
            check_arity(n, alpha.arity())?;
            if v.len() != fiber {
                return Err(Error::Family(format!(
                    "fiber vector of length {} in a fiber of dimension {fiber}",
                    v.len()
                )));
            }
            out.add_component(alpha, &v, &Scalar::from_integer(1.into()));
        }
        Ok(out)
    }

    pub(crate) fn from_basis_terms(n: usize, family: Family, fiber: usize, terms: &BasisTerms) -> Self {
        let mut out = Self::zero(n, family, fiber);
        for ((alpha, k), c) in terms {
            let e = out
                .terms
                .entry(alpha.clone())
                .or_insert_with(|| vec![Scalar::zero(); fiber]);
            e[*k] += c;
        }
        out.terms.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        out
    }

    pub(crate) fn basis_terms(&self) -> BasisTerms {
        let mut out = BasisTerms::new();
        for (alpha, v) in &self.terms {
            for (k, c) in v.iter().enumerate() {
                add_term(&mut out, (alpha.clone(), k), c.clone());
            }
        }
        out
    }

    fn add_component(&mut self, alpha: MultiIndex, v: &[Scalar], c: &Scalar) {
        let fiber = self.fiber;
        let e = self
            .terms
            .entry(alpha.clone())
            .or_insert_with(|| vec![Scalar::zero(); fiber]);
        for (x, y) in e.iter_mut().zip(v) {
            *x += c * y;
        }
        if e.iter().all(Zero::is_zero) {
            self.terms.remove(&alpha);
        }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber
    }

    /// Same coordinates, read in another module with the same basis shape.
    pub fn retag(&self, family: Family) -> Self {
        ModuleVector {
            family,
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<Scalar>)> {
        self.terms.iter()
    }

    pub fn component(&self, alpha: &MultiIndex) -> Vec<Scalar> {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| vec![Scalar::zero(); self.fiber])
    }

    /// `Supp(w) = {α : w_α ≠ 0}`.
    pub fn support(&self) -> BTreeSet<MultiIndex> {
        self.terms.keys().cloned().collect()
    }

    /// `ht(w) = max |α|` over the support; `None` for the zero vector.
    pub fn ht(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::size).max()
    }

    /// The part of `w` of top degree `ht(w)`.
    pub fn top(&self) -> ModuleVector {
        let mut out = Self::zero(self.n, self.family, self.fiber);
        if let Some(m) = self.ht() {
            out.terms = self
                .terms
                .iter()
                .filter(|(a, _)| a.size() == m)
                .map(|(a, v)| (a.clone(), v.clone()))
                .collect();
        }
        out
    }

    /// Number of support indices of top degree.
    pub fn lth(&self) -> usize {
        self.ht()
            .map_or(0, |m| self.terms.keys().filter(|a| a.size() == m).count())
    }

    pub fn scale(&self, c: &Scalar) -> ModuleVector {
        let mut out = Self::zero(self.n, self.family, self.fiber);
        if !c.is_zero() {
            out.terms = self
                .terms
                .iter()
                .map(|(a, v)| (a.clone(), v.iter().map(|x| x * c).collect()))
                .collect();
        }
        out
    }

    fn combine(mut self, other: &ModuleVector, c: &Scalar) -> ModuleVector {
        assert_eq!(
            (self.n, self.family, self.fiber),
            (other.n, other.family, other.fiber),
            "vectors from different modules"
        );
        for (a, v) in &other.terms {
            self.add_component(a.clone(), v, c);
        }
        self
    }
}

impl Add for ModuleVector {
    type Output = ModuleVector;
    fn add(self, rhs: ModuleVector) -> ModuleVector {
        self.combine(&rhs, &Scalar::from_integer(1.into()))
    }
}

impl Sub for ModuleVector {
    type Output = ModuleVector;
    fn sub(self, rhs: ModuleVector) -> ModuleVector {
        self.combine(&rhs, &Scalar::from_integer((-1).into()))
    }
}

impl Neg for ModuleVector {
    type Output = ModuleVector;
    fn neg(self) -> ModuleVector {
        self.scale(&Scalar::from_integer((-1).into()))
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (a, v)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            f.write_str("D^")?;
            fmt::Display::fmt(a, f)?;
            f.write_str("⊗[")?;
            for (m, x) in v.iter().enumerate() {
                if m > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// A `Wₙ⁺`-module with basis `∂^α ⊗ e_k` on which every vector is killed
/// by `g_{≥N}` for some computable `N`.
pub trait SmoothModule {
    fn arity(&self) -> usize;

    fn fiber_dim(&self) -> usize;

    fn family(&self) -> Family;

    /// Least `ℓ` such that `g_{≥D+ℓ}` kills `F_{≤D}` for all `D`.
    fn level(&self) -> u32;

    /// Internal degree of the fiber basis vector `e_k`.
    fn fiber_degree(&self, _k: usize) -> u32 {
        0
    }

    /// Largest fiber degree stored, for truncated fibers.
    fn fiber_cap(&self) -> Option<u32> {
        None
    }

    /// Largest `|α|` carried by the module, if finite.
    fn max_degree(&self) -> Option<u32> {
        None
    }

    /// `t^β∂ⱼ · (∂^α ⊗ e_k)`.
    fn act_basis(&self, sym: &Symbol, alpha: &MultiIndex, k: usize) -> Result<BasisTerms>;

    /// An `N` with `g_{≥N} v = 0`.
    fn smoothness_bound(&self, v: &ModuleVector) -> i32 {
        v.ht().map_or(-1, |h| (h + self.level()) as i32)
    }
}

pub(crate) fn check_family<M: SmoothModule + ?Sized>(m: &M, v: &ModuleVector) -> Result<()> {
    check_arity(m.arity(), v.arity())?;
    if v.family() != m.family() || v.fiber_dim() != m.fiber_dim() {
        return Err(Error::Family(format!(
            "vector of a {} module with fiber {} applied to a {} module with fiber {}",
            v.family().name(),
            v.fiber_dim(),
            m.family().name(),
            m.fiber_dim()
        )));
    }
    Ok(())
}

/// `x · v`, extended linearly.
pub fn act<M: SmoothModule + ?Sized>(m: &M, x: &WittElement, v: &ModuleVector) -> Result<ModuleVector> {
    check_arity(m.arity(), x.arity())?;
    check_family(m, v)?;
    let mut out = BasisTerms::new();
    for (sym, c) in x.terms() {
        for (alpha, fv) in v.terms() {
            for (k, d) in fv.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let img = m.act_basis(sym, alpha, k)?;
                add_scaled(&mut out, &img, &(c * d));
            }
        }
    }
    Ok(ModuleVector::from_basis_terms(m.arity(), m.family(), m.fiber_dim(), &out))
}

/// A `g≥0`-module `E` with `g_{≥ℓ} E = 0`, possibly truncated by an
/// internal degree.
pub trait PositiveModule {
    fn arity(&self) -> usize;

    fn dim(&self) -> usize;

    /// `ℓ_E`.
    fn level(&self) -> u32;

    fn degree(&self, _k: usize) -> u32 {
        0
    }

    fn cap(&self) -> Option<u32> {
        None
    }

    /// `t^β∂ⱼ · e_k` for `|β| ≥ 1`.
    fn act_symbol(&self, sym: &Symbol, k: usize) -> Result<SparseVec>;
}

/// `x · v` in a `g≥0`-module; `x` must not have a `g_{-1}` component.
pub fn act_positive<E: PositiveModule + ?Sized>(e: &E, x: &WittElement, v: &[Scalar]) -> Result<Vec<Scalar>> {
    check_arity(e.arity(), x.arity())?;
    if v.len() != e.dim() {
        return Err(Error::Family(format!("vector of length {} in a module of dimension {}", v.len(), e.dim())));
    }
    let mut out = vec![Scalar::zero(); e.dim()];
    for (sym, c) in x.terms() {
        if sym.0.is_zero() {
            return Err(Error::Range {
                what: "grade",
                value: -1,
                min: 0,
                max: i64::MAX,
            });
        }
        for (k, d) in v.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for (m, y) in e.act_symbol(sym, k)? {
                out[m] += c * d * y;
            }
        }
    }
    Ok(out)
}

/// A finite-dimensional `g≥0`-module given by matrices of the symbols of
/// grade `< ℓ`; higher grades act by zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    n: usize,
    dim: usize,
    level: u32,
    data: BTreeMap<Symbol, Matrix>,
}

impl FiniteModule {
    pub fn new(n: usize, dim: usize, level: u32, data: impl IntoIterator<Item = (Symbol, Matrix)>) -> Result<Self> {
        if n == 0 || dim == 0 {
            return Err(Error::InvalidModule("arity and dimension must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (sym, m) in data {
            check_arity(n, sym.0.arity())?;
            let g = symbol_grade(&sym);
            if sym.1 >= n || g < 0 || g >= level as i32 {
                return Err(Error::InvalidModule(format!("symbol {:?}d{} outside grades 0..{level}", sym.0, sym.1 + 1)));
            }
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::InvalidModule(format!("matrices must be {dim}x{dim}")));
            }
            if !linalg::is_zero_matrix(&m) {
                map.insert(sym, m);
            }
        }
        let out = FiniteModule {
            n,
            dim,
            level,
            data: map,
        };
        out.validate()?;
        Ok(out)
    }

    fn rho(&self, sym: &Symbol) -> Option<&Matrix> {
        self.data.get(sym)
    }

    fn validate(&self) -> Result<()> {
        let zero = linalg::zeros(self.dim, self.dim);
        let symbols: Vec<Symbol> = (0..self.level as i32)
            .flat_map(|g| crate::witt::symbols_of_grade(self.n, g))
            .collect();
        for x in &symbols {
            for y in &symbols {
                let rx = self.rho(x).unwrap_or(&zero);
                let ry = self.rho(y).unwrap_or(&zero);
                let lhs = linalg::commutator(rx, ry);
                let mut rhs = zero.clone();
                for (s, c) in bracket_symbols(x, y) {
                    if let Some(m) = self.rho(&s) {
                        rhs = linalg::mat_add(&rhs, m, &Scalar::from_integer(c));
                    }
                }
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "bracket relation fails for t^{:?}d{} and t^{:?}d{}",
                        x.0,
                        x.1 + 1,
                        y.0,
                        y.1 + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// A `gl_n`-module viewed as a `g≥0`-module via `tᵢ∂ⱼ ↦ E_ij`, with
    /// `g≥1` acting by zero.
    pub fn from_gln(m: &crate::gln::GlnModule) -> Self {
        let n = m.arity();
        let data = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !linalg::is_zero_matrix(m.e(i, j)))
            .map(|(i, j)| ((MultiIndex::unit(n, i), j), m.e(i, j).clone()))
            .collect();
        FiniteModule {
            n,
            dim: m.dim(),
            level: 1,
            data,
        }
    }

    /// The character `C v_φ` of `g≥0` with `φ(ωₙ) = λ`, so `tᵢ∂ᵢ ↦ λ/n`.
    pub fn character(n: usize, lambda: Scalar) -> Result<Self> {
        Ok(Self::from_gln(&crate::gln::one_dim_module(n, lambda)?))
    }

    pub fn matrix(&self, sym: &Symbol) -> Matrix {
        self.rho(sym).cloned().unwrap_or_else(|| linalg::zeros(self.dim, self.dim))
    }
}

impl PositiveModule for FiniteModule {
    fn arity(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn level(&self) -> u32 {
        self.level
    }

    fn act_symbol(&self, sym: &Symbol, k: usize) -> Result<SparseVec> {
        let Some(m) = self.rho(sym) else {
            return Ok(SparseVec::new());
        };
        Ok(m.iter()
            .enumerate()
            .filter(|(_, r)| !r[k].is_zero())
            .map(|(i, r)| (i, r[k].clone()))
            .collect())
    }
}

impl<E: PositiveModule + ?Sized> PositiveModule for alloc::boxed::Box<E> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn level(&self) -> u32 {
        (**self).level()
    }
    fn degree(&self, k: usize) -> u32 {
        (**self).degree(k)
    }
    fn cap(&self) -> Option<u32> {
        (**self).cap()
    }
    fn act_symbol(&self, sym: &Symbol, k: usize) -> Result<SparseVec> {
        (**self).act_symbol(sym, k)
    }
}
