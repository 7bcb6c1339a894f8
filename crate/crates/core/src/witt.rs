//! The Lie algebra `Wₙ⁺` of polynomial vector fields.
//!
//! Elements are finite combinations of the symbols `t^α ∂ᵢ`. Direction
//! indices are 0-based in the API; the symbol `t^α ∂ᵢ` has grade `|α| - 1`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{check_arity, Result};
use crate::lincomb::{add_scaled, add_term, Terms};
use crate::multi_index::MultiIndex;
use crate::scalar::{int, ratio, Scalar};

/// Basis label `t^α ∂ᵢ`.
pub type Symbol = (MultiIndex, usize);

pub fn symbol_grade(sym: &Symbol) -> i32 {
    sym.0.size() as i32 - 1
}

#[derive(Clone, PartialEq, Eq)]
pub struct WittElement {
    n: usize,
    terms: Terms<Symbol>,
}

impl WittElement {
    pub fn zero(n: usize) -> Self {
        WittElement {
            n,
            terms: Terms::new(),
        }
    }

    /// `t^α ∂ᵢ`.
    pub fn symbol(alpha: MultiIndex, i: usize) -> Self {
        let n = alpha.arity();
        assert!(i < n, "direction {i} out of range for arity {n}");
        let mut terms = Terms::new();
        terms.insert((alpha, i), Scalar::one());
        WittElement { n, terms }
    }

    /// `∂ᵢ = t⁰ ∂ᵢ`.
    pub fn partial(n: usize, i: usize) -> Self {
        Self::symbol(MultiIndex::zero(n), i)
    }

    /// `tᵢ ∂ⱼ`.
    pub fn t_d(n: usize, i: usize, j: usize) -> Self {
        Self::symbol(MultiIndex::unit(n, i), j)
    }

    /// The Euler field `ωₙ = Σ tᵢ∂ᵢ`.
    pub fn omega(n: usize) -> Self {
        (0..n).fold(Self::zero(n), |acc, i| acc + Self::t_d(n, i, i))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Symbol, Scalar)>) -> Result<Self> {
        let mut out = Self::zero(n);
        for ((alpha, i), c) in terms {
            check_arity(n, alpha.arity())?;
            if i >= n {
                return Err(crate::Error::Range {
                    what: "direction",
                    value: i as i64,
                    min: 0,
                    max: n as i64 - 1,
                });
            }
            add_term(&mut out.terms, (alpha, i), c);
        }
        Ok(out)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Symbol, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, sym: &Symbol) -> Scalar {
        self.terms.get(sym).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The grade if the element is nonzero and homogeneous.
    pub fn grade(&self) -> Option<i32> {
        let mut grades = self.terms.keys().map(symbol_grade);
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    pub fn max_grade(&self) -> Option<i32> {
        self.terms.keys().map(symbol_grade).max()
    }

    /// Projection onto `g_k`.
    pub fn grade_component(&self, k: i32) -> WittElement {
        WittElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| symbol_grade(s) == k)
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> WittElement {
        let mut out = Self::zero(self.n);
        add_scaled(&mut out.terms, &self.terms, c);
        out
    }

    pub fn bracket(&self, other: &WittElement) -> Result<WittElement> {
        check_arity(self.n, other.n)?;
        let mut out = Terms::new();
        for (x, a) in &self.terms {
            for (y, b) in &other.terms {
                let ab = a * b;
                for (sym, c) in bracket_symbols(x, y) {
                    add_term(&mut out, sym, Scalar::from_integer(c) * &ab);
                }
            }
        }
        Ok(WittElement {
            n: self.n,
            terms: out,
        })
    }

    /// The derivation action on `C[t₁..tₙ]`.
    pub fn apply_to_polynomial(&self, f: &Polynomial) -> Result<Polynomial> {
        check_arity(self.n, f.n)?;
        let mut out = Polynomial::zero(self.n);
        for ((alpha, i), c) in &self.terms {
            for (mono, d) in &f.terms {
                let Some(lower) = mono.lowered(*i) else {
                    continue;
                };
                let coeff = c * d * int(mono.get(*i) as i64);
                add_term(&mut out.terms, lower.plus(alpha), coeff);
            }
        }
        Ok(out)
    }
}

/// `[t^α∂ᵢ, t^β∂ⱼ] = βᵢ t^{α+β-εᵢ} ∂ⱼ - αⱼ t^{α+β-εⱼ} ∂ᵢ`.
pub(crate) fn bracket_symbols(x: &Symbol, y: &Symbol) -> Vec<(Symbol, BigInt)> {
    let (alpha, i) = x;
    let (beta, j) = y;
    let mut out = Vec::with_capacity(2);
    if let Some(lower) = beta.lowered(*i) {
        out.push(((alpha.plus(&lower), *j), BigInt::from(beta.get(*i))));
    }
    if let Some(lower) = alpha.lowered(*j) {
        out.push(((beta.plus(&lower), *i), -BigInt::from(alpha.get(*j))));
    }
    out
}

/// Basis `t^α ∂ᵢ` of `g_k` with `|α| = k + 1`, ordered by `α` then `i`.
/// Empty for `k < -1`.
pub fn basis_of_grade(n: usize, k: i32) -> Vec<WittElement> {
    symbols_of_grade(n, k)
        .into_iter()
        .map(|(a, i)| WittElement::symbol(a, i))
        .collect()
}

pub fn symbols_of_grade(n: usize, k: i32) -> Vec<Symbol> {
    if k < -1 {
        return Vec::new();
    }
    MultiIndex::of_size(n, (k + 1) as u32)
        .into_iter()
        .flat_map(|a| (0..n).map(move |i| (a.clone(), i)))
        .collect()
}

impl Add for WittElement {
    type Output = WittElement;
    fn add(mut self, rhs: WittElement) -> WittElement {
        assert_eq!(self.n, rhs.n, "arity mismatch");
        for (k, v) in rhs.terms {
            add_term(&mut self.terms, k, v);
        }
        self
    }
}

impl Sub for WittElement {
    type Output = WittElement;
    fn sub(self, rhs: WittElement) -> WittElement {
        self + (-rhs)
    }
}

impl Neg for WittElement {
    type Output = WittElement;
    fn neg(mut self) -> WittElement {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl Mul<WittElement> for Scalar {
    type Output = WittElement;
    fn mul(self, rhs: WittElement) -> WittElement {
        rhs.scale(&self)
    }
}

impl fmt::Display for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((alpha, i), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*t^{alpha}d{}", i + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Polynomials in `t₁..tₙ`, the natural module of `Wₙ⁺`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    n: usize,
    terms: Terms<MultiIndex>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: Terms::new(),
        }
    }

    pub fn monomial(alpha: MultiIndex, c: Scalar) -> Self {
        let mut p = Self::zero(alpha.arity());
        add_term(&mut p.terms, alpha, c);
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Scalar)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (a, c) in terms {
            check_arity(n, a.arity())?;
            add_term(&mut p.terms, a, c);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        for (k, v) in rhs.terms {
            add_term(&mut self.terms, k, -v);
        }
        self
    }
}

/// Distinguished elements of `W₂⁺`: the `gl₂` basis `e, i, h, f` of `g₀`
/// and the basis `p₀..p₃, q₀, q₁` of `g₁ = V(3) ⊕ V(1)`.
pub mod w2 {
    use super::*;

    fn sym(a: u32, b: u32, dir: usize) -> WittElement {
        WittElement::symbol(MultiIndex::new([a, b]), dir)
    }

    fn c(v: i64) -> Scalar {
        ratio(v, 1)
    }

    /// `e = t₁∂₂`
    pub fn e() -> WittElement {
        sym(1, 0, 1)
    }

    /// `i = t₁∂₁ + t₂∂₂`
    pub fn i() -> WittElement {
        sym(1, 0, 0) + sym(0, 1, 1)
    }

    /// `h = t₁∂₁ - t₂∂₂`
    pub fn h() -> WittElement {
        sym(1, 0, 0) - sym(0, 1, 1)
    }

    /// `f = t₂∂₁`
    pub fn f() -> WittElement {
        sym(0, 1, 0)
    }

    /// `p₀ = t₁²∂₂`
    pub fn p0() -> WittElement {
        sym(2, 0, 1)
    }

    /// `p₁ = 2t₁t₂∂₂ - t₁²∂₁`
    pub fn p1() -> WittElement {
        c(2) * sym(1, 1, 1) - sym(2, 0, 0)
    }

    /// `p₂ = 2t₂²∂₂ - 4t₁t₂∂₁`
    pub fn p2() -> WittElement {
        c(2) * sym(0, 2, 1) - c(4) * sym(1, 1, 0)
    }

    /// `p₃ = -6t₂²∂₁`
    pub fn p3() -> WittElement {
        c(-6) * sym(0, 2, 0)
    }

    /// `q₀ = t₁²∂₁ + t₁t₂∂₂`
    pub fn q0() -> WittElement {
        sym(2, 0, 0) + sym(1, 1, 1)
    }

    /// `q₁ = t₂²∂₂ + t₁t₂∂₁`
    pub fn q1() -> WittElement {
        sym(0, 2, 1) + sym(1, 1, 0)
    }

    /// `[e, i, h, f]`, the ordered basis of `g₀`.
    pub fn g0_basis() -> [WittElement; 4] {
        [e(), i(), h(), f()]
    }

    /// `[p₀, p₁, p₂, p₃, q₀, q₁]`, the ordered basis of `g₁`.
    pub fn g1_basis() -> [WittElement; 6] {
        [p0(), p1(), p2(), p3(), q0(), q1()]
    }
}
