//! The Weyl algebra `Kₙ⁺` and its simple module `P₀ = Kₙ⁺ / Σ Kₙ⁺ tᵢ`.
//!
//! Elements are kept in normal order `Σ c t^β ∂^γ` (all t's to the left).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{check_arity, Error, Result};
use crate::lincomb::{add_term, Terms};
use crate::multi_index::MultiIndex;
use crate::scalar::{sign, Scalar};
use crate::witt::WittElement;

/// A generator of `Kₙ⁺`, used for words that still need ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Letter {
    T(usize),
    D(usize),
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    n: usize,
    /// `(β, γ) ↦ c` for `c t^β ∂^γ`.
    terms: Terms<(MultiIndex, MultiIndex)>,
}

impl WeylElement {
    pub fn zero(n: usize) -> Self {
        WeylElement {
            n,
            terms: Terms::new(),
        }
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        Self::term(MultiIndex::zero(n), MultiIndex::zero(n), c)
    }

    /// `c t^β ∂^γ`.
    pub fn term(beta: MultiIndex, gamma: MultiIndex, c: Scalar) -> Self {
        assert_eq!(beta.arity(), gamma.arity(), "arity mismatch");
        let mut out = Self::zero(beta.arity());
        add_term(&mut out.terms, (beta, gamma), c);
        out
    }

    pub fn t(n: usize, i: usize) -> Self {
        Self::term(MultiIndex::unit(n, i), MultiIndex::zero(n), Scalar::one())
    }

    pub fn d(n: usize, i: usize) -> Self {
        Self::term(MultiIndex::zero(n), MultiIndex::unit(n, i), Scalar::one())
    }

    pub fn t_pow(beta: MultiIndex) -> Self {
        let n = beta.arity();
        Self::term(beta, MultiIndex::zero(n), Scalar::one())
    }

    pub fn d_pow(gamma: MultiIndex) -> Self {
        let n = gamma.arity();
        Self::term(MultiIndex::zero(n), gamma, Scalar::one())
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = ((MultiIndex, MultiIndex), Scalar)>,
    ) -> Result<Self> {
        let mut out = Self::zero(n);
        for ((b, g), c) in terms {
            check_arity(n, b.arity())?;
            check_arity(n, g.arity())?;
            add_term(&mut out.terms, (b, g), c);
        }
        Ok(out)
    }

    /// The vector field `t^α ∂ᵢ` viewed as a first-order operator.
    pub fn from_witt(x: &WittElement) -> Self {
        let n = x.arity();
        let mut out = Self::zero(n);
        for ((alpha, i), c) in x.terms() {
            add_term(&mut out.terms, (alpha.clone(), MultiIndex::unit(n, *i)), c.clone());
        }
        out
    }

    /// Normal-orders a word by repeatedly rewriting `∂ᵢ tⱼ → tⱼ ∂ᵢ + δᵢⱼ`.
    pub fn from_word(n: usize, word: &[Letter]) -> Result<Self> {
        check_word(n, word)?;
        let mut out = Self::zero(n);
        for (c, w) in rewrite(word, true) {
            let (beta, gamma) = exponents(n, &w);
            add_term(&mut out.terms, (beta, gamma), Scalar::from_integer(c));
        }
        Ok(out)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &Scalar)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n);
        for (k, v) in &self.terms {
            add_term(&mut out.terms, k.clone(), v * c);
        }
        out
    }

    /// Normal-ordered product, using the Leibniz rule
    /// `∂^γ t^β = Σ_κ κ! C(γ,κ) C(β,κ) t^{β-κ} ∂^{γ-κ}`.
    pub fn multiply(&self, other: &WeylElement) -> Result<WeylElement> {
        check_arity(self.n, other.n)?;
        let mut out = Terms::new();
        for ((b1, g1), c1) in &self.terms {
            for ((b2, g2), c2) in &other.terms {
                let c = c1 * c2;
                let bound = MultiIndex::new(
                    g1.exponents()
                        .iter()
                        .zip(b2.exponents())
                        .map(|(a, b)| *a.min(b)),
                );
                for kappa in below(&bound) {
                    let k = kappa.factorial_int() * g1.binomial_int(&kappa) * b2.binomial_int(&kappa);
                    let beta = b1.plus(&b2.minus(&kappa).expect("κ ≤ β"));
                    let gamma = g2.plus(&g1.minus(&kappa).expect("κ ≤ γ"));
                    add_term(&mut out, (beta, gamma), Scalar::from_integer(k) * &c);
                }
            }
        }
        Ok(WeylElement {
            n: self.n,
            terms: out,
        })
    }

    /// Anti-normal form `Σ c ∂^γ t^β`, as a map `(γ, β) ↦ c`, computed by
    /// rewriting `tⱼ ∂ᵢ → ∂ᵢ tⱼ - δᵢⱼ`.
    pub fn anti_normal_terms(&self) -> Terms<(MultiIndex, MultiIndex)> {
        let mut out = Terms::new();
        for ((beta, gamma), c) in &self.terms {
            let word = word_of(beta, gamma);
            for (k, w) in rewrite(&word, false) {
                let (b, g) = exponents(self.n, &w);
                add_term(&mut out, (g, b), Scalar::from_integer(k) * c);
            }
        }
        out
    }
}

fn check_word(n: usize, word: &[Letter]) -> Result<()> {
    for l in word {
        let (Letter::T(i) | Letter::D(i)) = *l;
        if i >= n {
            return Err(Error::Range {
                what: "variable",
                value: i as i64,
                min: 0,
                max: n as i64 - 1,
            });
        }
    }
    Ok(())
}

fn word_of(beta: &MultiIndex, gamma: &MultiIndex) -> Vec<Letter> {
    let mut w = Vec::new();
    for (i, &b) in beta.exponents().iter().enumerate() {
        w.extend(core::iter::repeat_n(Letter::T(i), b as usize));
    }
    for (i, &g) in gamma.exponents().iter().enumerate() {
        w.extend(core::iter::repeat_n(Letter::D(i), g as usize));
    }
    w
}

fn exponents(n: usize, word: &[Letter]) -> (MultiIndex, MultiIndex) {
    let mut beta = vec![0u32; n];
    let mut gamma = vec![0u32; n];
    for l in word {
        match *l {
            Letter::T(i) => beta[i] += 1,
            Letter::D(i) => gamma[i] += 1,
        }
    }
    (MultiIndex::new(beta), MultiIndex::new(gamma))
}

/// Rewrites adjacent out-of-order pairs until every word is sorted
/// (t's first when `t_first`, ∂'s first otherwise). Each step removes one
/// inversion, so the process terminates.
fn rewrite(word: &[Letter], t_first: bool) -> Vec<(BigInt, Vec<Letter>)> {
    let mut done = Vec::new();
    let mut stack = vec![(BigInt::one(), word.to_vec())];
    while let Some((c, w)) = stack.pop() {
        let inversion = w.windows(2).position(|p| match (p[0], p[1]) {
            (Letter::D(_), Letter::T(_)) => t_first,
            (Letter::T(_), Letter::D(_)) => !t_first,
            _ => false,
        });
        let Some(pos) = inversion else {
            done.push((c, w));
            continue;
        };
        let (a, b) = (w[pos], w[pos + 1]);
        let same = matches!((a, b), (Letter::D(i), Letter::T(j)) | (Letter::T(j), Letter::D(i)) if i == j);
        if same {
            let mut shorter = w.clone();
            shorter.drain(pos..pos + 2);
            // ∂t = t∂ + 1 and t∂ = ∂t - 1
            let k = if t_first { c.clone() } else { -c.clone() };
            stack.push((k, shorter));
        }
        let mut swapped = w;
        swapped.swap(pos, pos + 1);
        stack.push((c, swapped));
    }
    done
}

/// All `κ` with `κ ≤ bound` componentwise.
pub(crate) fn below(bound: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::zero(bound.arity())];
    for (i, &b) in bound.exponents().iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for k in &out {
            let mut cur = k.clone();
            next.push(cur.clone());
            for _ in 0..b {
                cur = cur.bumped(i);
                next.push(cur.clone());
            }
        }
        out = next;
    }
    out
}

impl Add for WeylElement {
    type Output = WeylElement;
    fn add(mut self, rhs: WeylElement) -> WeylElement {
        assert_eq!(self.n, rhs.n, "arity mismatch");
        for (k, v) in rhs.terms {
            add_term(&mut self.terms, k, v);
        }
        self
    }
}

impl Neg for WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&-Scalar::one())
    }
}

impl Sub for WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: WeylElement) -> WeylElement {
        self + (-rhs)
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((b, g), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*t^{b}d^{g}")?;
        }
        Ok(())
    }
}

/// An element `Σ c_α ∂̄^α` of `P₀ ≅ C[∂₁..∂ₙ]`.
#[derive(Clone, PartialEq, Eq)]
pub struct P0Vector {
    n: usize,
    terms: Terms<MultiIndex>,
}

impl P0Vector {
    pub fn zero(n: usize) -> Self {
        P0Vector {
            n,
            terms: Terms::new(),
        }
    }

    /// `1̄`.
    pub fn one(n: usize) -> Self {
        Self::monomial(MultiIndex::zero(n), Scalar::one())
    }

    pub fn monomial(alpha: MultiIndex, c: Scalar) -> Self {
        let mut v = Self::zero(alpha.arity());
        add_term(&mut v.terms, alpha, c);
        v
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Scalar)>) -> Result<Self> {
        let mut v = Self::zero(n);
        for (a, c) in terms {
            check_arity(n, a.arity())?;
            add_term(&mut v.terms, a, c);
        }
        Ok(v)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Scalar {
        self.terms.get(alpha).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Lex-largest index in the support.
    pub fn leading(&self) -> Option<(&MultiIndex, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Lifts `Σ c_α ∂̄^α` to `Σ c_α ∂^α ∈ Kₙ⁺`.
    pub fn lift(&self) -> WeylElement {
        let mut out = WeylElement::zero(self.n);
        for (a, c) in &self.terms {
            add_term(&mut out.terms, (MultiIndex::zero(self.n), a.clone()), c.clone());
        }
        out
    }
}

impl Add for P0Vector {
    type Output = P0Vector;
    fn add(mut self, rhs: P0Vector) -> P0Vector {
        assert_eq!(self.n, rhs.n, "arity mismatch");
        for (k, v) in rhs.terms {
            add_term(&mut self.terms, k, v);
        }
        self
    }
}

impl fmt::Debug for P0Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (a, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*D^{a}")?;
        }
        Ok(())
    }
}

/// `t^β ∂̄^α = (-1)^{|β|} β! C(α,β) ∂̄^{α-β}` for a single monomial.
pub(crate) fn t_pow_on_monomial(beta: &MultiIndex, alpha: &MultiIndex) -> Option<(MultiIndex, BigInt)> {
    let rest = alpha.minus(beta)?;
    let c = sign(beta.size() % 2 == 1) * beta.factorial_int() * alpha.binomial_int(beta);
    Some((rest, c))
}

/// Action of `Kₙ⁺` on `P₀` by the closed formula: `∂` multiplies, `t^β`
/// acts by [`t_pow_on_monomial`].
pub fn p0_act(a: &WeylElement, v: &P0Vector) -> Result<P0Vector> {
    check_arity(a.n, v.n)?;
    let mut out = P0Vector::zero(v.n);
    for ((beta, gamma), c) in &a.terms {
        for (alpha, d) in &v.terms {
            let mu = alpha.plus(gamma);
            if let Some((rest, k)) = t_pow_on_monomial(beta, &mu) {
                add_term(&mut out.terms, rest, Scalar::from_integer(k) * c * d);
            }
        }
    }
    Ok(out)
}

/// For `v ≠ 0` with lex-largest support index `β`, returns `(β, c)` with
/// `t^β v = c·1̄`, `c = (-1)^{|β|} β! a_β`.
pub fn p0_reach_one(v: &P0Vector) -> Result<(MultiIndex, Scalar)> {
    let (beta, a) = v.leading().ok_or(Error::ZeroVector)?;
    let beta = beta.clone();
    let c = Scalar::from_integer(sign(beta.size() % 2 == 1) * beta.factorial_int()) * a;
    let reached = p0_act(&WeylElement::t_pow(beta.clone()), v)?;
    assert_eq!(
        reached,
        P0Vector::monomial(MultiIndex::zero(v.n), c.clone()),
        "t^β v must be a multiple of 1̄"
    );
    Ok((beta, c))
}

/// `f ∂^α ↦ f(0) ∂̄^α` on the normal form: keeps the t-free terms.
pub fn projection_phi(a: &WeylElement) -> P0Vector {
    let mut out = P0Vector::zero(a.n);
    for ((beta, gamma), c) in &a.terms {
        if beta.is_zero() {
            add_term(&mut out.terms, gamma.clone(), c.clone());
        }
    }
    out
}

/// The quotient map `Kₙ⁺ → Kₙ⁺ / Σ Kₙ⁺ tᵢ`: rewrite to `Σ ∂^γ t^β` and keep
/// the t-free terms.
pub fn canonical_projection(a: &WeylElement) -> P0Vector {
    let mut out = P0Vector::zero(a.n);
    for ((gamma, beta), c) in a.anti_normal_terms() {
        if beta.is_zero() {
            add_term(&mut out.terms, gamma, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use proptest::prelude::*;
    use Letter::{D, T};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.iter().copied())
    }

    fn tw(b: &[u32], g: &[u32], c: i64) -> WeylElement {
        WeylElement::term(mi(b), mi(g), int(c))
    }

    #[test]
    fn multiply_examples() {
        // ∂₁ · t₁ = t₁∂₁ + 1
        let p = WeylElement::d(1, 0).multiply(&WeylElement::t(1, 0)).unwrap();
        assert_eq!(p, tw(&[1], &[1], 1) + tw(&[0], &[0], 1));
        // t₁∂₁² = ∂₁²t₁ - 2∂₁
        let lhs = WeylElement::t(1, 0).multiply(&WeylElement::d_pow(mi(&[2]))).unwrap();
        let rhs = WeylElement::from_word(1, &[D(0), D(0), T(0)]).unwrap() - tw(&[0], &[1], 2);
        assert_eq!(lhs, rhs);
        // (t₁∂₁)(t₁∂₁) = t₁²∂₁² + t₁∂₁
        let x = tw(&[1], &[1], 1);
        assert_eq!(x.multiply(&x).unwrap(), tw(&[2], &[2], 1) + tw(&[1], &[1], 1));
        assert_eq!(
            WeylElement::from_word(1, &[T(0), D(0), T(0), D(0)]).unwrap(),
            tw(&[2], &[2], 1) + tw(&[1], &[1], 1)
        );
        assert!(WeylElement::d(1, 0).multiply(&WeylElement::t(2, 0)).is_err());
        assert!(WeylElement::from_word(1, &[T(1)]).is_err());
    }

    #[test]
    fn p0_examples() {
        let n = 2;
        let v = P0Vector::monomial(mi(&[1, 0]), int(1));
        assert_eq!(
            p0_act(&WeylElement::t(n, 0), &v).unwrap(),
            P0Vector::monomial(mi(&[0, 0]), int(-1))
        );
        let v = P0Vector::monomial(mi(&[1, 1]), int(1));
        assert!(p0_act(&WeylElement::t_pow(mi(&[2, 0])), &v).unwrap().is_zero());
        let v = P0Vector::monomial(mi(&[2, 1]), int(1));
        let got = p0_act(&WeylElement::t_pow(mi(&[1, 1])), &v).unwrap();
        assert_eq!(got, P0Vector::monomial(mi(&[1, 0]), int(2)));
        // cross-check through the product and the quotient map
        let via = canonical_projection(&WeylElement::t_pow(mi(&[1, 1])).multiply(&v.lift()).unwrap());
        assert_eq!(via, got);
    }

    #[test]
    fn reach_one_examples() {
        assert_eq!(p0_reach_one(&P0Vector::one(2)).unwrap(), (mi(&[0, 0]), int(1)));
        let v = P0Vector::monomial(mi(&[1, 0]), int(1)) + P0Vector::monomial(mi(&[0, 1]), int(1));
        assert_eq!(p0_reach_one(&v).unwrap(), (mi(&[1, 0]), int(-1)));
        let v = P0Vector::monomial(mi(&[0, 2]), int(3));
        assert_eq!(p0_reach_one(&v).unwrap(), (mi(&[0, 2]), int(6)));
        assert_eq!(p0_reach_one(&P0Vector::zero(2)), Err(Error::ZeroVector));
    }

    #[test]
    fn projection_examples() {
        assert!(projection_phi(&tw(&[1, 0], &[1, 0], 1)).is_zero());
        let a = tw(&[0, 0], &[2, 0], 1) + tw(&[0, 0], &[0, 0], 5);
        assert_eq!(
            projection_phi(&a),
            P0Vector::monomial(mi(&[2, 0]), int(1)) + P0Vector::monomial(mi(&[0, 0]), int(5))
        );
        let a = tw(&[1, 0], &[0, 1], 1) + tw(&[0, 0], &[0, 1], 1);
        assert_eq!(projection_phi(&a), P0Vector::monomial(mi(&[0, 1]), int(1)));
        // the quotient map sees t₁∂₁ = ∂₁t₁ - 1
        assert_eq!(canonical_projection(&tw(&[1, 0], &[1, 0], 1)), P0Vector::monomial(mi(&[0, 0]), int(-1)));
    }

    #[test]
    fn iterated_commutation_relation() {
        for m in 0..=5u32 {
            for i in 0..2 {
                for j in 0..2 {
                    let dm = WeylElement::d_pow(MultiIndex::unit(2, j).scaled(m));
                    let lhs = WeylElement::t(2, i).multiply(&dm).unwrap();
                    let mut rhs = dm.multiply(&WeylElement::t(2, i)).unwrap();
                    if i == j && m > 0 {
                        let lower = WeylElement::d_pow(MultiIndex::unit(2, j).scaled(m - 1));
                        rhs = rhs - lower.scale(&int(m as i64));
                    }
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    fn weyl(n: usize, deg: u32) -> impl Strategy<Value = WeylElement> {
        proptest::collection::vec(
            (proptest::collection::vec(0..=deg, n), proptest::collection::vec(0..=deg, n), -3i64..=3),
            0..4,
        )
        .prop_map(move |terms| {
            let terms = terms.into_iter().filter_map(|(b, g, c)| {
                let (b, g) = (MultiIndex::new(b), MultiIndex::new(g));
                (b.size() + g.size() <= deg).then(|| ((b, g), int(c)))
            });
            WeylElement::from_terms(n, terms).unwrap()
        })
    }

    fn p0(n: usize, deg: u32) -> impl Strategy<Value = P0Vector> {
        proptest::collection::vec((proptest::collection::vec(0..=deg, n), -3i64..=3), 0..5).prop_map(
            move |terms| {
                let terms = terms
                    .into_iter()
                    .map(|(a, c)| (MultiIndex::new(a), int(c)))
                    .filter(|(a, _)| a.size() <= deg);
                P0Vector::from_terms(n, terms).unwrap()
            },
        )
    }

    fn word(n: usize) -> impl Strategy<Value = Vec<Letter>> {
        proptest::collection::vec(
            (0..n, any::<bool>()).prop_map(|(i, t)| if t { T(i) } else { D(i) }),
            0..7,
        )
    }

    proptest! {
        #[test]
        fn associativity((a, b, c) in (1usize..4).prop_flat_map(|n| (weyl(n, 4), weyl(n, 4), weyl(n, 4)))) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn rewriting_agrees_with_leibniz((u, w) in (word(3), word(3))) {
            let n = 3;
            let joined: Vec<_> = u.iter().chain(w.iter()).copied().collect();
            let lhs = WeylElement::from_word(n, &joined).unwrap();
            let rhs = WeylElement::from_word(n, &u).unwrap().multiply(&WeylElement::from_word(n, &w).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn module_axiom((a, b, v) in (1usize..4).prop_flat_map(|n| (weyl(n, 3), weyl(n, 3), p0(n, 4)))) {
            let lhs = p0_act(&a.multiply(&b).unwrap(), &v).unwrap();
            let rhs = p0_act(&a, &p0_act(&b, &v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn closed_formula_matches_quotient_map((a, v) in (1usize..4).prop_flat_map(|n| (weyl(n, 4), p0(n, 4)))) {
            let direct = p0_act(&a, &v).unwrap();
            let via = canonical_projection(&a.multiply(&v.lift()).unwrap());
            prop_assert_eq!(direct, via);
        }

        #[test]
        fn left_ideal_kills_one((a, i) in (1usize..4).prop_flat_map(|n| (weyl(n, 4), 0..n))) {
            let n = a.arity();
            let at = a.multiply(&WeylElement::t(n, i)).unwrap();
            prop_assert!(p0_act(&at, &P0Vector::one(n)).unwrap().is_zero());
        }

        #[test]
        fn constructive_simplicity(v in (1usize..4).prop_flat_map(|n| p0(n, 6))) {
            if !v.is_zero() {
                let (_, c) = p0_reach_one(&v).unwrap();
                prop_assert!(!c.is_zero());
            }
        }
    }
}
