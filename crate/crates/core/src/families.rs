//! The built-in module families: tensor modules `F(P₀, M)`, induced modules
//! `Ind_{g≥0}^g E` and the trivial module.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gln::{self, GlnModule};
use crate::lincomb::{add_scaled, add_term};
use crate::module::{BasisTerms, Family, FiniteModule, ModuleVector, PositiveModule, SmoothModule};
use crate::multi_index::MultiIndex;
use crate::scalar::Scalar;
use crate::weyl::t_pow_on_monomial;
use crate::witt::Symbol;

/// `F(P₀, M) = P₀ ⊗ M` with `∂̄^α ⊗ v` as basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorModule {
    m: GlnModule,
}

impl TensorModule {
    pub fn new(m: GlnModule) -> Self {
        TensorModule { m }
    }

    pub fn gln(&self) -> &GlnModule {
        &self.m
    }
}

fn column(m: &crate::linalg::Matrix, k: usize) -> impl Iterator<Item = (usize, &Scalar)> {
    m.iter().enumerate().map(move |(i, r)| (i, &r[k])).filter(|(_, x)| !x.is_zero())
}

impl SmoothModule for TensorModule {
    fn arity(&self) -> usize {
        self.m.arity()
    }

    fn fiber_dim(&self) -> usize {
        self.m.dim()
    }

    fn family(&self) -> Family {
        Family::Tensor
    }

    fn level(&self) -> u32 {
        1
    }

    fn act_basis(&self, sym: &Symbol, alpha: &MultiIndex, k: usize) -> Result<BasisTerms> {
        let (beta, j) = sym;
        let mut out = BasisTerms::new();
        if let Some((rest, c)) = t_pow_on_monomial(beta, &alpha.bumped(*j)) {
            add_term(&mut out, (rest, k), Scalar::from_integer(c));
        }
        for i in 0..beta.arity() {
            let Some(lower) = beta.lowered(i) else { continue };
            let Some((rest, c)) = t_pow_on_monomial(&lower, alpha) else { continue };
            let c = Scalar::from_integer(c * BigInt::from(beta.get(i)));
            for (m, x) in column(self.m.e(i, *j), k) {
                add_term(&mut out, (rest.clone(), m), &c * x);
            }
        }
        Ok(out)
    }
}

/// `Ind_{g≥0}^g E` with PBW basis `∂^α ⊗ e_k`.
#[derive(Clone, Debug)]
pub struct InducedModule<E> {
    e: E,
}

impl<E: PositiveModule> InducedModule<E> {
    pub fn new(e: E) -> Self {
        InducedModule { e }
    }

    pub fn inducing(&self) -> &E {
        &self.e
    }

    /// `x·(∂ᵢ u) = ∂ᵢ(x·u) + [x, ∂ᵢ]·u` with `[t^β∂ⱼ, ∂ᵢ] = -βᵢ t^{β-εᵢ}∂ⱼ`.
    fn recurse(&self, beta: &MultiIndex, j: usize, alpha: &MultiIndex, k: usize) -> Result<BasisTerms> {
        let Some(i) = alpha.exponents().iter().position(|&a| a > 0) else {
            let mut out = BasisTerms::new();
            if beta.is_zero() {
                out.insert((MultiIndex::unit(beta.arity(), j), k), Scalar::from_integer(1.into()));
            } else {
                for (m, c) in self.e.act_symbol(&(beta.clone(), j), k)? {
                    out.insert((alpha.clone(), m), c);
                }
            }
            return Ok(out);
        };
        let lower = alpha.lowered(i).expect("positive entry");
        let mut out: BasisTerms = self
            .recurse(beta, j, &lower, k)?
            .into_iter()
            .map(|((a, m), c)| ((a.bumped(i), m), c))
            .collect();
        if let Some(b) = beta.lowered(i) {
            let inner = self.recurse(&b, j, &lower, k)?;
            add_scaled(&mut out, &inner, &-Scalar::from_integer(beta.get(i).into()));
        }
        Ok(out)
    }
}

impl<E: PositiveModule> SmoothModule for InducedModule<E> {
    fn arity(&self) -> usize {
        self.e.arity()
    }

    fn fiber_dim(&self) -> usize {
        self.e.dim()
    }

    fn family(&self) -> Family {
        Family::Induced
    }

    fn level(&self) -> u32 {
        self.e.level()
    }

    fn fiber_degree(&self, k: usize) -> u32 {
        self.e.degree(k)
    }

    fn fiber_cap(&self) -> Option<u32> {
        self.e.cap()
    }

    fn act_basis(&self, sym: &Symbol, alpha: &MultiIndex, k: usize) -> Result<BasisTerms> {
        self.recurse(&sym.0, sym.1, alpha, k)
    }
}

/// `W(φ) = Ind_{g≥0}^g C v_φ` with `φ(ωₙ) = λ`.
pub fn make_w_phi(n: usize, lambda: Scalar) -> Result<InducedModule<FiniteModule>> {
    Ok(InducedModule::new(FiniteModule::character(n, lambda)?))
}

/// The one-dimensional trivial module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrivialModule {
    n: usize,
}

impl TrivialModule {
    pub fn new(n: usize) -> Self {
        TrivialModule { n }
    }
}

impl SmoothModule for TrivialModule {
    fn arity(&self) -> usize {
        self.n
    }

    fn fiber_dim(&self) -> usize {
        1
    }

    fn family(&self) -> Family {
        Family::Trivial
    }

    fn level(&self) -> u32 {
        0
    }

    fn max_degree(&self) -> Option<u32> {
        Some(0)
    }

    fn act_basis(&self, _sym: &Symbol, _alpha: &MultiIndex, _k: usize) -> Result<BasisTerms> {
        Ok(BasisTerms::new())
    }
}

/// Spanning vectors `Σ_k (∂_k p) ⊗ (ε_k ∧ ε_{i₂} ∧ … ∧ ε_{i_r})` of
/// `L_n(P₀, r)` inside `F(P₀, Λʳ)`, for `p = ∂̄^α` with `|α| ≤ bound` and
/// increasing `(i₂, …, i_r)`.
pub fn l_n_generators(n: usize, r: usize, bound: u32) -> Result<Vec<ModuleVector>> {
    if r == 0 || r > n {
        return Err(Error::Range {
            what: "r",
            value: r as i64,
            min: 1,
            max: n as i64,
        });
    }
    let wedges = gln::wedge_basis(n, r);
    let dim = wedges.len();
    let mut out = Vec::new();
    for tail in gln::wedge_basis(n, r - 1) {
        for alpha in MultiIndex::up_to_size(n, bound) {
            let mut terms = BasisTerms::new();
            for kk in 0..n {
                let mut idx = alpha_wedge(kk, &tail);
                let Some((sorted, odd)) = gln::sort_wedge(&idx) else { continue };
                idx = sorted;
                let pos = wedges.iter().position(|w| *w == idx).expect("wedge basis");
                let c = Scalar::from_integer(if odd { (-1).into() } else { 1.into() });
                add_term(&mut terms, (alpha.bumped(kk), pos), c);
            }
            let v = ModuleVector::from_basis_terms(n, Family::Tensor, dim, &terms);
            if !v.is_zero() {
                out.push(v);
            }
        }
    }
    Ok(out)
}

fn alpha_wedge(k: usize, tail: &[usize]) -> Vec<usize> {
    core::iter::once(k).chain(tail.iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gln::{exterior_power, one_dim_module, tau_twist};
    use crate::module::act;
    use crate::scalar::{int, ratio};
    use crate::weyl::{p0_act, P0Vector, WeylElement};
    use crate::witt::{self, WittElement};
    use proptest::prelude::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.iter().copied())
    }

    fn basis(fam: Family, fiber: usize, a: &[u32], k: usize) -> ModuleVector {
        ModuleVector::basis(fam, fiber, mi(a), k)
    }

    /// `(t^β∂ⱼ)∘(g⊗v)` with both terms evaluated through the Weyl action on `P₀`.
    fn tensor_oracle(m: &GlnModule, sym: &Symbol, alpha: &MultiIndex, k: usize) -> ModuleVector {
        let n = m.arity();
        let g = P0Vector::monomial(alpha.clone(), int(1));
        let fiber = m.dim();
        let x = WeylElement::from_witt(&WittElement::symbol(sym.0.clone(), sym.1));
        let mut out = ModuleVector::zero(n, Family::Tensor, fiber);
        let first = p0_act(&x, &g).unwrap();
        for (a, c) in first.terms() {
            out = out + ModuleVector::basis(Family::Tensor, fiber, a.clone(), k).scale(c);
        }
        for i in 0..n {
            let Some(lower) = sym.0.lowered(i) else { continue };
            let mult = WeylElement::t_pow(lower).scale(&int(sym.0.get(i) as i64));
            let g2 = p0_act(&mult, &g).unwrap();
            let ev = m.apply(i, sym.1, &(0..fiber).map(|q| if q == k { int(1) } else { int(0) }).collect::<Vec<_>>());
            for (a, c) in g2.terms() {
                let v = ModuleVector::from_terms(n, Family::Tensor, fiber, [(a.clone(), ev.clone())]).unwrap();
                out = out + v.scale(c);
            }
        }
        out
    }

    /// `x ∂^α = Σ_{γ≤α} C(α,γ) ∂^{α-γ} (-ad ∂)^γ x` applied to `1 ⊗ e_k`.
    fn induced_oracle<E: PositiveModule>(e: &E, sym: &Symbol, alpha: &MultiIndex, k: usize) -> BasisTerms {
        let (beta, j) = sym;
        let mut out = BasisTerms::new();
        for gamma in crate::weyl::below(alpha) {
            let Some(rem) = beta.minus(&gamma) else { continue };
            let rest = alpha.minus(&gamma).unwrap();
            let sign = if gamma.size() % 2 == 1 { -1 } else { 1 };
            let c = Scalar::from_integer(
                alpha.binomial_int(&gamma) * beta.factorial_int() / rem.factorial_int() * BigInt::from(sign),
            );
            if rem.is_zero() {
                add_term(&mut out, (rest.bumped(*j), k), c);
            } else {
                for (m, y) in e.act_symbol(&(rem, *j), k).unwrap() {
                    add_term(&mut out, (rest.clone(), m), &c * y);
                }
            }
        }
        out
    }

    #[test]
    fn tensor_examples() {
        let m = TensorModule::new(exterior_power(2, 1).unwrap());
        let one = basis(Family::Tensor, 2, &[0, 0], 1);
        let d1 = act(&m, &WittElement::partial(2, 0), &one).unwrap();
        assert_eq!(d1, basis(Family::Tensor, 2, &[1, 0], 1));
        for a in MultiIndex::up_to_size(2, 4).into_iter().filter(|a| a.size() >= 2) {
            for i in 0..2 {
                let x = WittElement::symbol(a.clone(), i);
                assert!(act(&m, &x, &one).unwrap().is_zero());
            }
        }
        // t₂∂₁ ∘ (∂̄₁ ⊗ v): the P₀ part vanishes and ∂₂(t₂) = 1 leaves ∂̄₁ ⊗ E₂₁ v.
        let v = basis(Family::Tensor, 2, &[1, 0], 0);
        let out = act(&m, &WittElement::t_d(2, 1, 0), &v).unwrap();
        assert_eq!(out, basis(Family::Tensor, 2, &[1, 0], 1));
        let all = witt::symbols_of_grade(2, 1);
        for s in &all {
            let mut want = BasisTerms::new();
            let o = tensor_oracle(m.gln(), s, &mi(&[1, 1]), 0);
            for ((a, k), c) in o.basis_terms() {
                want.insert((a, k), c);
            }
            assert_eq!(m.act_basis(s, &mi(&[1, 1]), 0).unwrap(), want);
        }
    }

    #[test]
    fn family_mismatch() {
        let m = TensorModule::new(exterior_power(2, 1).unwrap());
        let v = basis(Family::Induced, 2, &[0, 0], 0);
        assert!(matches!(act(&m, &WittElement::partial(2, 0), &v), Err(Error::Family(_))));
        let w = basis(Family::Tensor, 1, &[0, 0], 0);
        assert!(matches!(act(&m, &WittElement::partial(2, 0), &w), Err(Error::Family(_))));
    }

    #[test]
    fn induced_examples() {
        let e = FiniteModule::from_gln(&exterior_power(2, 1).unwrap());
        let ind = InducedModule::new(e);
        let v = basis(Family::Induced, 2, &[1, 0], 0);
        assert_eq!(
            act(&ind, &WittElement::partial(2, 1), &v).unwrap(),
            basis(Family::Induced, 2, &[1, 1], 0)
        );
        // t₁∂₁·(∂₁⊗e₁) = ∂₁⊗(t₁∂₁e₁) - ∂₁⊗e₁ = 0
        assert!(act(&ind, &WittElement::t_d(2, 0, 0), &v).unwrap().is_zero());
        // t₁∂₁·(∂₁⊗e₂) = -∂₁⊗e₂
        let v2 = basis(Family::Induced, 2, &[1, 0], 1);
        assert_eq!(act(&ind, &WittElement::t_d(2, 0, 0), &v2).unwrap(), -v2.clone());
    }

    #[test]
    fn w_phi_examples() {
        let lam = ratio(2, 3);
        let w = make_w_phi(3, lam.clone()).unwrap();
        let v = basis(Family::Induced, 1, &[0, 0, 0], 0);
        for i in 0..3 {
            let out = act(&w, &WittElement::t_d(3, i, i), &v).unwrap();
            assert_eq!(out, v.scale(&(lam.clone() / int(3))));
        }
        for x in witt::basis_of_grade(3, 1) {
            assert!(act(&w, &x, &v).unwrap().is_zero());
        }
        assert_eq!(act(&w, &WittElement::omega(3), &v).unwrap(), v.scale(&lam));
    }

    #[test]
    fn ln_generator_examples() {
        let gens = l_n_generators(2, 2, 0).unwrap();
        // tail i₂ = 1 (0-based 0): ∂̄₂⊗(ε₂∧ε₁); tail i₂ = 2: ∂̄₁⊗(ε₁∧ε₂)
        assert!(gens.contains(&basis(Family::Tensor, 1, &[1, 0], 0)));
        assert!(gens.contains(&-basis(Family::Tensor, 1, &[0, 1], 0)));
        for g in l_n_generators(3, 3, 2).unwrap() {
            assert!(g.component(&MultiIndex::zero(3)).iter().all(Zero::is_zero));
            assert_eq!(g.fiber_dim(), 1);
        }
        assert!(l_n_generators(2, 0, 1).is_err());
        assert!(l_n_generators(2, 3, 1).is_err());
    }

    #[test]
    fn trivial_module() {
        let t = TrivialModule::new(2);
        let v = basis(Family::Trivial, 1, &[0, 0], 0);
        assert!(act(&t, &WittElement::partial(2, 0), &v).unwrap().is_zero());
    }

    fn symbol(n: usize, max_grade: i32) -> impl Strategy<Value = Symbol> {
        let syms: Vec<Symbol> = (-1..=max_grade).flat_map(|g| witt::symbols_of_grade(n, g)).collect();
        proptest::sample::select(syms)
    }

    fn element(n: usize, max_grade: i32) -> impl Strategy<Value = WittElement> {
        proptest::collection::vec((symbol(n, max_grade), -2i64..3), 1..3)
            .prop_map(move |t| WittElement::from_terms(n, t.into_iter().map(|(s, c)| (s, int(c)))).unwrap())
    }

    fn index(n: usize, max: u32) -> impl Strategy<Value = MultiIndex> {
        proptest::sample::select(MultiIndex::up_to_size(n, max))
    }

    fn axiom<M: SmoothModule>(m: &M, x: &WittElement, y: &WittElement, v: &ModuleVector) -> Result<bool> {
        let lhs = act(m, &x.bracket(y)?, v)?;
        let rhs = act(m, x, &act(m, y, v)?)? - act(m, y, &act(m, x, v)?)?;
        Ok(lhs == rhs)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn tensor_matches_weyl_oracle((s, a) in (1usize..4).prop_flat_map(|n| (symbol(n, 3), index(n, 4))), r in 0usize..4) {
            let n = a.arity();
            let m = exterior_power(n, r.min(n)).unwrap();
            let t = TensorModule::new(m.clone());
            for k in 0..m.dim() {
                let got = ModuleVector::from_basis_terms(n, Family::Tensor, m.dim(), &t.act_basis(&s, &a, k).unwrap());
                prop_assert_eq!(got, tensor_oracle(&m, &s, &a, k));
            }
        }

        #[test]
        fn tensor_module_axiom((x, y, a) in (1usize..4).prop_flat_map(|n| (element(n, 3), element(n, 3), index(n, 4))), r in 0usize..4) {
            let n = a.arity();
            let m = TensorModule::new(exterior_power(n, r.min(n)).unwrap());
            for k in 0..m.fiber_dim() {
                let v = ModuleVector::basis(Family::Tensor, m.fiber_dim(), a.clone(), k);
                prop_assert!(axiom(&m, &x, &y, &v).unwrap());
            }
        }

        #[test]
        fn induced_matches_closed_form((s, a) in (1usize..4).prop_flat_map(|n| (symbol(n, 4), index(n, 4)))) {
            let n = a.arity();
            let e = FiniteModule::from_gln(&tau_twist(&exterior_power(n, 1).unwrap()));
            let ind = InducedModule::new(e.clone());
            for k in 0..n {
                prop_assert_eq!(ind.act_basis(&s, &a, k).unwrap(), induced_oracle(&e, &s, &a, k));
            }
        }

        #[test]
        fn induced_module_axiom((x, y, a) in (1usize..4).prop_flat_map(|n| (element(n, 3), element(n, 3), index(n, 4))), b in -3i64..4) {
            let n = a.arity();
            let w = make_w_phi(n, int(b)).unwrap();
            let v = ModuleVector::basis(Family::Induced, 1, a.clone(), 0);
            prop_assert!(axiom(&w, &x, &y, &v).unwrap());
            let g = InducedModule::new(FiniteModule::from_gln(&one_dim_module(n, int(b)).unwrap()));
            prop_assert!(axiom(&g, &x, &y, &v).unwrap());
        }
    }
}
