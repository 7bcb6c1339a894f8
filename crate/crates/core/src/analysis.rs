//! Exact analyses inside finite truncation windows: annihilator spaces,
//! heights, submodule closures, orbits, and the `A_φ` criterion.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, EchelonSpan, Matrix, SparseVec};
use crate::module::{act, BasisTerms, ModuleVector, SmoothModule};
use crate::multi_index::MultiIndex;
use crate::scalar::{int, Scalar};
use crate::whittaker::{Character, WhittakerModule};
use crate::witt::{symbols_of_grade, w2, Symbol, WittElement};

/// The slice `F_{≤D}` together with the acting grades `-1 ≤ k ≤ K`.
/// For truncated fibers only fiber degrees `≤ fiber_degree` are used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationWindow {
    pub degree: u32,
    pub grade_cap: i32,
    pub fiber_degree: Option<u32>,
}

impl TruncationWindow {
    pub fn new(degree: u32, grade_cap: i32) -> Self {
        TruncationWindow {
            degree,
            grade_cap,
            fiber_degree: None,
        }
    }

    /// `K = D + ℓ`; truncated fibers keep one degree of headroom.
    pub fn for_module<M: SmoothModule + ?Sized>(m: &M, degree: u32) -> Self {
        TruncationWindow {
            degree,
            grade_cap: (degree + m.level()) as i32,
            fiber_degree: m.fiber_cap().map(|c| c.saturating_sub(1)),
        }
    }

    pub fn with_fiber_degree(mut self, d: u32) -> Self {
        self.fiber_degree = Some(d);
        self
    }

    /// `K ≥ D + ℓ`, and truncated fibers leave room for one `g₀` step.
    pub fn check_complete<M: SmoothModule + ?Sized>(&self, m: &M) -> Result<()> {
        let need = (self.degree + m.level()) as i32;
        if self.grade_cap < need {
            return Err(Error::Window(format!(
                "grade cap {} below D + level = {need}",
                self.grade_cap
            )));
        }
        if let Some(cap) = m.fiber_cap() {
            match self.fiber_degree {
                Some(f) if f < cap => {}
                _ => {
                    return Err(Error::Window(format!(
                        "fiber degree must be below the fiber cap {cap}"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn basis<M: SmoothModule + ?Sized>(&self, m: &M) -> WindowBasis {
        WindowBasis::new(m, self)
    }
}

/// Coordinates of `F_{≤D}`, ordered by decreasing `|α|`, so that the
/// leading coordinate of a vector sits in its top degree.
#[derive(Clone, Debug)]
pub struct WindowBasis {
    n: usize,
    family: crate::module::Family,
    fiber: usize,
    list: Vec<(MultiIndex, usize)>,
    index: BTreeMap<(MultiIndex, usize), usize>,
}

impl WindowBasis {
    fn new<M: SmoothModule + ?Sized>(m: &M, w: &TruncationWindow) -> Self {
        let top = m.max_degree().map_or(w.degree, |d| d.min(w.degree));
        let fibers: Vec<usize> = (0..m.fiber_dim())
            .filter(|&k| w.fiber_degree.is_none_or(|f| m.fiber_degree(k) <= f))
            .collect();
        let mut list = Vec::new();
        for d in (0..=top).rev() {
            for alpha in MultiIndex::of_size(m.arity(), d) {
                for &k in &fibers {
                    list.push((alpha.clone(), k));
                }
            }
        }
        let index = list.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        WindowBasis {
            n: m.arity(),
            family: m.family(),
            fiber: m.fiber_dim(),
            list,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn coordinate(&self, c: usize) -> &(MultiIndex, usize) {
        &self.list[c]
    }

    pub fn degree_of(&self, c: usize) -> u32 {
        self.list[c].0.size()
    }

    pub fn vector(&self, c: usize) -> ModuleVector {
        let (a, k) = &self.list[c];
        ModuleVector::basis(self.family, self.fiber, a.clone(), *k)
    }

    /// Number of coordinates of degree at most `d`.
    pub fn dim_upto(&self, d: u32) -> usize {
        self.list.iter().filter(|(a, _)| a.size() <= d).count()
    }

    pub fn dim_of_degree(&self, d: u32) -> usize {
        self.list.iter().filter(|(a, _)| a.size() == d).count()
    }

    /// Window coordinates of `v`, `None` if some term lies outside.
    pub fn to_sparse(&self, v: &ModuleVector) -> Option<SparseVec> {
        let mut out = SparseVec::new();
        for ((a, k), c) in v.basis_terms() {
            out.insert(*self.index.get(&(a, k))?, c);
        }
        Some(out)
    }

    fn terms_to_sparse(&self, t: &BasisTerms) -> Option<SparseVec> {
        let mut out = SparseVec::new();
        for (key, c) in t {
            out.insert(*self.index.get(key)?, c.clone());
        }
        Some(out)
    }

    pub fn to_vector(&self, v: &SparseVec) -> ModuleVector {
        let mut t = BasisTerms::new();
        for (&c, x) in v {
            t.insert(self.list[c].clone(), x.clone());
        }
        ModuleVector::from_basis_terms(self.n, self.family, self.fiber, &t)
    }
}

fn acting_symbols(n: usize, from: i32, to: i32) -> Vec<Symbol> {
    (from..=to).flat_map(|g| symbols_of_grade(n, g)).collect()
}

/// Basis of `{v ∈ F_{≤D} : g_k v = 0 for r ≤ k ≤ K}`, which is
/// `V^{(r)} ∩ F_{≤D}` for complete windows.
pub fn annihilator_space<M: SmoothModule + ?Sized>(
    m: &M,
    window: &TruncationWindow,
    r: i32,
) -> Result<Vec<ModuleVector>> {
    window.check_complete(m)?;
    let wb = window.basis(m);
    let symbols = acting_symbols(m.arity(), r.max(-1), window.grade_cap);
    let mut keys: BTreeMap<(usize, MultiIndex, usize), usize> = BTreeMap::new();
    let mut images = Vec::with_capacity(wb.len());
    for c in 0..wb.len() {
        let (alpha, k) = wb.coordinate(c);
        let mut img = SparseVec::new();
        for (s, sym) in symbols.iter().enumerate() {
            for ((a, q), x) in m.act_basis(sym, alpha, *k)? {
                let next = keys.len();
                let idx = *keys.entry((s, a, q)).or_insert(next);
                img.insert(idx, x);
            }
        }
        images.push(img);
    }
    Ok(linalg::kernel_of_images(&images)
        .iter()
        .map(|v| wb.to_vector(v))
        .collect())
}

/// `ℓ = r` when found inside a complete window, otherwise `ℓ > K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Height {
    Exact(u32),
    Above(i32),
}

pub fn height<M: SmoothModule + ?Sized>(m: &M, window: &TruncationWindow) -> Result<Height> {
    window.check_complete(m)?;
    for r in 0..=window.grade_cap.max(0) {
        if !annihilator_space(m, window, r)?.is_empty() {
            return Ok(Height::Exact(r as u32));
        }
    }
    Ok(Height::Above(window.grade_cap))
}

/// Span of everything reachable from `generators` by `g_k`, `-1 ≤ k ≤ K`,
/// without leaving the window. Images leaving the window are discarded, so
/// the result is contained in the true submodule.
#[derive(Clone, Debug)]
pub struct Closure {
    pub basis: WindowBasis,
    pub span: EchelonSpan,
}

impl Closure {
    pub fn rank(&self) -> usize {
        self.span.rank()
    }

    /// Number of closure dimensions whose top degree is `d`.
    pub fn pivots_of_degree(&self, d: u32) -> usize {
        self.span.pivots().filter(|&p| self.basis.degree_of(p) == d).count()
    }

    /// Basis of the closure intersected with `F_{≤d}`.
    pub fn slice(&self, d: u32) -> Vec<ModuleVector> {
        self.span
            .basis()
            .iter()
            .filter(|v| v.keys().next().is_some_and(|&p| self.basis.degree_of(p) <= d))
            .map(|v| self.basis.to_vector(v))
            .collect()
    }
}

pub fn closure<M: SmoothModule + ?Sized>(
    m: &M,
    window: &TruncationWindow,
    generators: &[ModuleVector],
) -> Result<Closure> {
    window.check_complete(m)?;
    let wb = window.basis(m);
    let symbols = acting_symbols(m.arity(), -1, window.grade_cap);
    let mut span = EchelonSpan::new();
    let mut queue = Vec::new();
    for g in generators {
        crate::module::check_family(m, g)?;
        let s = wb
            .to_sparse(g)
            .ok_or_else(|| Error::Window("generator outside the window".into()))?;
        if span.insert(&s) {
            queue.push(g.clone());
        }
    }
    let mut cache: BTreeMap<(usize, usize), Option<SparseVec>> = BTreeMap::new();
    while let Some(v) = queue.pop() {
        let coords = wb.to_sparse(&v).expect("queued vectors lie in the window");
        for (s, sym) in symbols.iter().enumerate() {
            let mut img = Some(SparseVec::new());
            for (&c, x) in &coords {
                let unit = cache.entry((s, c)).or_insert_with(|| {
                    let (alpha, k) = wb.coordinate(c);
                    match m.act_basis(sym, alpha, *k) {
                        Ok(t) => wb.terms_to_sparse(&t),
                        Err(_) => None,
                    }
                });
                match (unit.as_ref(), img.as_mut()) {
                    (Some(u), Some(acc)) => {
                        for (&q, y) in u {
                            let e = acc.entry(q).or_insert_with(Scalar::zero);
                            *e += x * y;
                            if e.is_zero() {
                                acc.remove(&q);
                            }
                        }
                    }
                    _ => img = None,
                }
            }
            let Some(img) = img else { continue };
            if !img.is_empty() && span.insert(&img) {
                queue.push(wb.to_vector(&img));
            }
        }
    }
    Ok(Closure { basis: wb, span })
}

/// `dim (F / ⟨generators⟩)_m` for `0 ≤ m ≤ D`.
pub fn quotient_graded_dims<M: SmoothModule + ?Sized>(
    m: &M,
    window: &TruncationWindow,
    generators: &[ModuleVector],
) -> Result<Vec<usize>> {
    let cl = closure(m, window, generators)?;
    Ok((0..=window.degree)
        .map(|d| cl.basis.dim_of_degree(d) - cl.pivots_of_degree(d))
        .collect())
}

/// Basis of `{v ∈ F_{≤d} : g_k v ∈ ⟨generators⟩ for -1 ≤ k ≤ K}`, with the
/// submodule replaced by its window closure. This is a truncated
/// approximation: a larger window can only enlarge the closure.
pub fn stabilizer_space<M: SmoothModule + ?Sized>(
    m: &M,
    window: &TruncationWindow,
    generators: &[ModuleVector],
    slice_degree: u32,
) -> Result<Vec<ModuleVector>> {
    if slice_degree >= window.degree {
        return Err(Error::Window(format!(
            "slice degree {slice_degree} must be below the window degree {}",
            window.degree
        )));
    }
    let cl = closure(m, window, generators)?;
    let wb = &cl.basis;
    let symbols = acting_symbols(m.arity(), -1, window.grade_cap);
    let coords: Vec<usize> = (0..wb.len()).filter(|&c| wb.degree_of(c) <= slice_degree).collect();
    let width = wb.len();
    let mut outside: BTreeMap<(usize, MultiIndex, usize), usize> = BTreeMap::new();
    let mut images = Vec::with_capacity(coords.len());
    for &c in &coords {
        let (alpha, k) = wb.coordinate(c);
        let mut img = SparseVec::new();
        for (s, sym) in symbols.iter().enumerate() {
            let mut inside = SparseVec::new();
            for (key, x) in m.act_basis(sym, alpha, *k)? {
                match wb.index.get(&key) {
                    Some(&q) => {
                        inside.insert(q, x);
                    }
                    None => {
                        let next = outside.len();
                        let j = *outside.entry((s, key.0, key.1)).or_insert(next);
                        img.insert(usize::MAX - j, x);
                    }
                }
            }
            for (q, x) in cl.span.remainder(&inside) {
                img.insert(s * width + q, x);
            }
        }
        images.push(img);
    }
    Ok(linalg::kernel_of_images(&images)
        .iter()
        .map(|v| {
            let lifted: SparseVec = v.iter().map(|(&j, x)| (coords[j], x.clone())).collect();
            wb.to_vector(&lifted)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cyclicity {
    /// The closure contains all of `F_{≤D'}`.
    Certificate { slice_dim: usize },
    /// The closure meets `F_{≤D'}` in `reached`; `missing` completes it to a basis.
    Counterexample {
        reached: Vec<ModuleVector>,
        missing: Vec<ModuleVector>,
    },
}

pub fn cyclicity_certificate<M: SmoothModule + ?Sized>(
    m: &M,
    window: &TruncationWindow,
    v: &ModuleVector,
    slice_degree: u32,
) -> Result<Cyclicity> {
    if slice_degree >= window.degree {
        return Err(Error::Window(format!(
            "slice degree {slice_degree} must be below the window degree {}",
            window.degree
        )));
    }
    let gens: Vec<ModuleVector> = if v.is_zero() { Vec::new() } else { alloc::vec![v.clone()] };
    let cl = closure(m, window, &gens)?;
    let full = cl.basis.dim_upto(slice_degree);
    let reached = cl.slice(slice_degree);
    if reached.len() == full {
        return Ok(Cyclicity::Certificate { slice_dim: full });
    }
    let pivots: Vec<usize> = cl.span.pivots().collect();
    let missing = (0..cl.basis.len())
        .filter(|&c| cl.basis.degree_of(c) <= slice_degree && !pivots.contains(&c))
        .map(|c| cl.basis.vector(c))
        .collect();
    Ok(Cyclicity::Counterexample { reached, missing })
}

/// `dim span{(tᵢ^{k+1}∂ᵢ)^m v : m ≥ 0}`.
pub fn local_finiteness_orbit<M: SmoothModule + ?Sized>(
    m: &M,
    window: &TruncationWindow,
    i: usize,
    k: u32,
    v: &ModuleVector,
) -> Result<usize> {
    if i >= m.arity() {
        return Err(Error::Range {
            what: "direction",
            value: i as i64,
            min: 0,
            max: m.arity() as i64 - 1,
        });
    }
    let wb = window.basis(m);
    let x = WittElement::symbol(MultiIndex::unit(m.arity(), i).scaled(k + 1), i);
    let mut span = EchelonSpan::new();
    let mut cur = v.clone();
    while !cur.is_zero() {
        let s = wb.to_sparse(&cur).ok_or(Error::CapExceeded {
            cap: window.degree,
            needed: cur.ht().unwrap_or(0),
        })?;
        if !span.insert(&s) {
            break;
        }
        cur = act(m, &x, &cur)?;
    }
    Ok(span.rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmoothnessBound {
    /// Least `M` with `g_k (∂^α ⊗ E) = 0` for all scanned `k ≥ M`.
    pub least: i32,
    /// `|α| + ℓ`.
    pub predicted: i32,
    /// Highest grade scanned.
    pub scanned: i32,
}

impl SmoothnessBound {
    pub fn holds(&self) -> bool {
        self.least <= self.predicted
    }
}

/// Scans grades `-1 ..= |α| + ℓ + 2` on `∂^α ⊗ e_k` for every fiber vector
/// in the window.
pub fn smoothness_bound_check<M: SmoothModule + ?Sized>(
    m: &M,
    window: &TruncationWindow,
    alpha: &MultiIndex,
) -> Result<SmoothnessBound> {
    crate::error::check_arity(m.arity(), alpha.arity())?;
    let predicted = (alpha.size() + m.level()) as i32;
    let scanned = predicted + 2;
    let fibers: Vec<usize> = (0..m.fiber_dim())
        .filter(|&k| window.fiber_degree.is_none_or(|f| m.fiber_degree(k) <= f))
        .collect();
    let mut least = -1;
    for g in -1..=scanned {
        let mut nonzero = false;
        'grade: for sym in symbols_of_grade(m.arity(), g) {
            for &k in &fibers {
                if !m.act_basis(&sym, alpha, k)?.is_empty() {
                    nonzero = true;
                    break 'grade;
                }
            }
        }
        if nonzero {
            least = g + 1;
        }
    }
    Ok(SmoothnessBound {
        least,
        predicted,
        scanned,
    })
}

/// The matrix `A_φ` in the display's literal entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AphiMatrix {
    pub entries: Matrix,
}

impl AphiMatrix {
    pub fn new(phi: &Character) -> Self {
        let [p0, p1, p2, p3] = phi.p().clone();
        let z = Scalar::zero();
        let c = |k: i64, x: &Scalar| int(k) * x;
        let entries = alloc::vec![
            alloc::vec![z.clone(), -p0.clone(), c(-3, &p0), -p1.clone()],
            alloc::vec![c(-3, &p0), -p1.clone(), -p1.clone(), -p2.clone()],
            alloc::vec![c(-4, &p1), -p2.clone(), p2.clone(), -p3.clone()],
            alloc::vec![c(-3, &p2), -p3.clone(), c(3, &p3), z],
        ];
        AphiMatrix { entries }
    }

    pub fn determinant(&self) -> Scalar {
        linalg::determinant(&self.entries)
    }

    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        linalg::kernel(&self.entries)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.entries)
    }
}

fn require_q_zero(phi: &Character) -> Result<()> {
    if phi.q().iter().any(|x| !x.is_zero()) {
        return Err(Error::Hypothesis("φ(q₀) = φ(q₁) = 0 is required".into()));
    }
    Ok(())
}

pub fn aphi_det(phi: &Character) -> Result<Scalar> {
    require_q_zero(phi)?;
    Ok(AphiMatrix::new(phi).determinant())
}

/// Basis of `{a : (a₁e + a₂i + a₃h + a₄f) w_φ ∈ M(φ)_φ}`, computed by acting
/// with `g₁` in the truncated `M(φ)`.
pub fn quasi_whittaker_vectors_deg1(phi: &Character) -> Result<Vec<Vec<Scalar>>> {
    require_q_zero(phi)?;
    let m = WhittakerModule::new(phi.clone(), 2);
    let dim = m.slice_dim(2);
    let units = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
    let g1 = w2::g1_basis();
    let mut images = Vec::new();
    for u in units {
        let k = m.index_of(u).expect("degree-one monomial");
        let mut img = SparseVec::new();
        for (x_idx, x) in g1.iter().enumerate() {
            let val = phi.value(x)?;
            let mut col = m.act_g1(x_idx, k);
            let e = col.entry(k).or_insert_with(Scalar::zero);
            *e -= val;
            for (q, c) in col {
                if !c.is_zero() {
                    img.insert(x_idx * dim + q, c);
                }
            }
        }
        images.push(img);
    }
    Ok(linalg::kernel_of_images(&images)
        .iter()
        .map(|v| linalg::sparse_to_dense(v, 4))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intertwining {
    Certificate { checks: usize, slice_dims: Vec<usize> },
    /// `f(x·v) ≠ x·f(v)` for `x = t^α∂ᵢ` and `v = ∂^β ⊗ e_k`.
    Violation { symbol: Symbol, alpha: MultiIndex, k: usize },
    /// `f` fails to be bijective on `F_{≤d}`.
    NotBijective { degree: u32 },
}

/// The linear map determined by `1 ⊗ e_k ↦ images[k]` and `∂`-equivariance.
pub struct EquivariantMap<'a, T: SmoothModule + ?Sized> {
    target: &'a T,
    images: Vec<ModuleVector>,
    cache: BTreeMap<(MultiIndex, usize), ModuleVector>,
}

impl<'a, T: SmoothModule + ?Sized> EquivariantMap<'a, T> {
    pub fn new(target: &'a T, images: Vec<ModuleVector>) -> Result<Self> {
        for v in &images {
            crate::module::check_family(target, v)?;
        }
        Ok(EquivariantMap {
            target,
            images,
            cache: BTreeMap::new(),
        })
    }

    fn on_basis(&mut self, alpha: &MultiIndex, k: usize) -> Result<ModuleVector> {
        if let Some(v) = self.cache.get(&(alpha.clone(), k)) {
            return Ok(v.clone());
        }
        let out = match alpha.exponents().iter().position(|&a| a > 0) {
            None => self.images[k].clone(),
            Some(i) => {
                let lower = alpha.lowered(i).expect("positive entry");
                let inner = self.on_basis(&lower, k)?;
                act(self.target, &WittElement::partial(alpha.arity(), i), &inner)?
            }
        };
        self.cache.insert((alpha.clone(), k), out.clone());
        Ok(out)
    }

    pub fn apply(&mut self, v: &ModuleVector) -> Result<ModuleVector> {
        let t = self.target;
        let mut out = ModuleVector::zero(t.arity(), t.family(), t.fiber_dim());
        for ((a, k), c) in v.basis_terms() {
            out = out + self.on_basis(&a, k)?.scale(&c);
        }
        Ok(out)
    }
}

pub fn intertwiner_check<S: SmoothModule + ?Sized, T: SmoothModule + ?Sized>(
    source: &S,
    target: &T,
    images: Vec<ModuleVector>,
    window: &TruncationWindow,
) -> Result<Intertwining> {
    crate::error::check_arity(source.arity(), target.arity())?;
    if images.len() != source.fiber_dim() {
        return Err(Error::Family(format!(
            "{} images given for a fiber of dimension {}",
            images.len(),
            source.fiber_dim()
        )));
    }
    let mut f = EquivariantMap::new(target, images)?;
    let sb = window.basis(source);
    let tb = window.basis(target);
    let symbols = acting_symbols(source.arity(), -1, window.grade_cap);
    let mut checks = 0;
    for c in 0..sb.len() {
        let v = sb.vector(c);
        let fv = f.apply(&v)?;
        for sym in &symbols {
            let x = WittElement::symbol(sym.0.clone(), sym.1);
            let lhs = f.apply(&act(source, &x, &v)?)?;
            let rhs = act(target, &x, &fv)?;
            checks += 1;
            if lhs != rhs {
                let (alpha, k) = sb.coordinate(c).clone();
                return Ok(Intertwining::Violation {
                    symbol: sym.clone(),
                    alpha,
                    k,
                });
            }
        }
    }
    let mut slice_dims = Vec::new();
    for d in 0..=window.degree {
        let mut imgs = Vec::new();
        for c in 0..sb.len() {
            if sb.degree_of(c) > d {
                continue;
            }
            let img = f.apply(&sb.vector(c))?;
            match tb.to_sparse(&img) {
                Some(s) if img.ht().is_none_or(|h| h <= d) => imgs.push(s),
                _ => return Ok(Intertwining::NotBijective { degree: d }),
            }
        }
        let r = linalg::rank_of(&imgs);
        if r != sb.dim_upto(d) || r != tb.dim_upto(d) {
            return Ok(Intertwining::NotBijective { degree: d });
        }
        slice_dims.push(r);
    }
    Ok(Intertwining::Certificate { checks, slice_dims })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{l_n_generators, make_w_phi, InducedModule, TensorModule, TrivialModule};
    use crate::gln::{exterior_power, one_dim_module, tau_twist};
    use crate::module::{Family, FiniteModule};
    use crate::scalar::ratio;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.iter().copied())
    }

    fn ones() -> Character {
        Character::new([int(1), int(1), int(1), int(1)], [int(0), int(0)])
    }

    fn span_contains(basis: &[ModuleVector], v: &ModuleVector, wb: &WindowBasis) -> bool {
        let mut s = EchelonSpan::new();
        for b in basis {
            s.insert(&wb.to_sparse(b).unwrap());
        }
        s.contains(&wb.to_sparse(v).unwrap())
    }

    #[test]
    fn annihilator_examples() {
        let m = TensorModule::new(exterior_power(2, 1).unwrap());
        let w = TruncationWindow::for_module(&m, 2);
        let v1 = annihilator_space(&m, &w, 1).unwrap();
        let wb = w.basis(&m);
        for k in 0..2 {
            let v = ModuleVector::basis(Family::Tensor, 2, mi(&[0, 0]), k);
            assert!(span_contains(&v1, &v, &wb));
        }
        let wphi = make_w_phi(2, int(1)).unwrap();
        let w = TruncationWindow::for_module(&wphi, 2);
        assert!(annihilator_space(&wphi, &w, 0).unwrap().is_empty());
        let t = TrivialModule::new(2);
        let w = TruncationWindow::for_module(&t, 2);
        assert_eq!(annihilator_space(&t, &w, 0).unwrap().len(), 1);
        assert!(matches!(
            annihilator_space(&m, &TruncationWindow::new(3, 2), 1),
            Err(Error::Window(_))
        ));
    }

    #[test]
    fn height_examples() {
        let m = TensorModule::new(exterior_power(2, 1).unwrap());
        assert_eq!(height(&m, &TruncationWindow::for_module(&m, 3)).unwrap(), Height::Exact(1));
        let t = TrivialModule::new(3);
        assert_eq!(height(&t, &TruncationWindow::for_module(&t, 3)).unwrap(), Height::Exact(0));
        let ind = InducedModule::new(WhittakerModule::new(ones(), 2));
        let w = TruncationWindow::for_module(&ind, 3);
        assert_eq!(w.fiber_degree, Some(1));
        assert_eq!(height(&ind, &w).unwrap(), Height::Exact(2));
    }

    #[test]
    fn cyclicity_examples() {
        let v = |n: usize| ModuleVector::basis(Family::Induced, 1, MultiIndex::unit(n, 0), 0);
        let w1 = make_w_phi(2, int(1)).unwrap();
        let win = TruncationWindow::for_module(&w1, 2);
        assert_eq!(
            cyclicity_certificate(&w1, &win, &v(2), 1).unwrap(),
            Cyclicity::Certificate { slice_dim: 3 }
        );
        let w0 = make_w_phi(2, int(0)).unwrap();
        let win = TruncationWindow::for_module(&w0, 2);
        match cyclicity_certificate(&w0, &win, &v(2), 0).unwrap() {
            Cyclicity::Counterexample { reached, missing } => {
                assert!(reached.is_empty());
                assert_eq!(missing, vec![ModuleVector::basis(Family::Induced, 1, mi(&[0, 0]), 0)]);
            }
            c => panic!("expected a counterexample, got {c:?}"),
        }
        let zero = ModuleVector::zero(2, Family::Induced, 1);
        assert!(matches!(
            cyclicity_certificate(&w1, &TruncationWindow::for_module(&w1, 2), &zero, 1).unwrap(),
            Cyclicity::Counterexample { .. }
        ));
    }

    #[test]
    fn tensor_cyclicity_evidence() {
        for n in 2..=3 {
            let m = TensorModule::new(exterior_power(n, 1).unwrap());
            let w = TruncationWindow::for_module(&m, 2);
            let v = ModuleVector::basis(Family::Tensor, n, MultiIndex::zero(n), 0);
            assert!(matches!(cyclicity_certificate(&m, &w, &v, 1).unwrap(), Cyclicity::Certificate { .. }));
        }
    }

    #[test]
    fn quotient_examples() {
        let w0 = make_w_phi(2, int(0)).unwrap();
        let win = TruncationWindow::for_module(&w0, 4);
        let gens: Vec<ModuleVector> = (0..2)
            .map(|i| ModuleVector::basis(Family::Induced, 1, MultiIndex::unit(2, i), 0))
            .collect();
        assert_eq!(quotient_graded_dims(&w0, &win, &gens).unwrap(), vec![1, 0, 0, 0, 0]);
        for n in 2..=3 {
            let m = TensorModule::new(exterior_power(n, n).unwrap());
            let win = TruncationWindow::for_module(&m, 3);
            let gens = l_n_generators(n, n, 2).unwrap();
            assert_eq!(quotient_graded_dims(&m, &win, &gens).unwrap(), vec![1, 0, 0, 0]);
        }
        let m = TensorModule::new(exterior_power(3, 1).unwrap());
        let win = TruncationWindow::for_module(&m, 3);
        assert_eq!(quotient_graded_dims(&m, &win, &[]).unwrap(), vec![3, 9, 18, 30]);
    }

    #[test]
    fn ln_submodule_is_stable() {
        for (n, r) in [(2, 1), (2, 2), (3, 2)] {
            let m = TensorModule::new(exterior_power(n, r).unwrap());
            let win = TruncationWindow::for_module(&m, 3);
            let gens = l_n_generators(n, r, 2).unwrap();
            let cl = closure(&m, &win, &gens).unwrap();
            let mut span = EchelonSpan::new();
            for g in &gens {
                span.insert(&win.basis(&m).to_sparse(g).unwrap());
            }
            assert_eq!(cl.rank(), span.rank());
        }
    }

    #[test]
    fn orbit_examples() {
        let ind = InducedModule::new(FiniteModule::from_gln(&exterior_power(2, 1).unwrap()));
        let w = TruncationWindow::for_module(&ind, 4);
        for alpha in MultiIndex::up_to_size(2, 4) {
            for k in 0..2 {
                let v = ModuleVector::basis(Family::Induced, 2, alpha.clone(), k);
                let d = local_finiteness_orbit(&ind, &w, 0, 1, &v).unwrap();
                assert!(d <= alpha.size() as usize + 1);
            }
        }
        let v = ModuleVector::basis(Family::Induced, 2, mi(&[0, 0]), 0);
        assert_eq!(local_finiteness_orbit(&ind, &w, 1, 1, &v).unwrap(), 1);
        let zero = ModuleVector::zero(2, Family::Induced, 2);
        assert_eq!(local_finiteness_orbit(&ind, &w, 0, 1, &zero).unwrap(), 0);
        let outside = ModuleVector::basis(Family::Induced, 2, mi(&[5, 0]), 0);
        assert!(matches!(
            local_finiteness_orbit(&ind, &w, 0, 1, &outside),
            Err(Error::CapExceeded { cap: 4, needed: 5 })
        ));
    }

    #[test]
    fn smoothness_examples() {
        let ind = InducedModule::new(WhittakerModule::new(ones(), 3));
        let w = TruncationWindow::for_module(&ind, 4);
        let b = smoothness_bound_check(&ind, &w, &mi(&[0, 0])).unwrap();
        assert_eq!((b.least, b.predicted), (2, 2));
        let b = smoothness_bound_check(&ind, &w, &mi(&[1, 1])).unwrap();
        assert!(b.holds());
        assert_eq!(b.predicted, 4);
        let wphi = make_w_phi(2, int(1)).unwrap();
        let w = TruncationWindow::for_module(&wphi, 4);
        let b = smoothness_bound_check(&wphi, &w, &mi(&[2, 1])).unwrap();
        assert!(b.holds() && b.least <= 4);
    }

    #[test]
    fn aphi_examples() {
        assert_eq!(aphi_det(&ones()).unwrap(), int(-4));
        let zero = Character::new([int(0), int(0), int(0), int(0)], [int(0), int(0)]);
        assert_eq!(aphi_det(&zero).unwrap(), int(0));
        let p0 = Character::new([int(1), int(0), int(0), int(0)], [int(0), int(0)]);
        assert_eq!(aphi_det(&p0).unwrap(), int(0));
        let bad = Character::new([int(1), int(1), int(1), int(1)], [int(1), int(0)]);
        assert!(matches!(aphi_det(&bad), Err(Error::Hypothesis(_))));
        assert!(matches!(quasi_whittaker_vectors_deg1(&bad), Err(Error::Hypothesis(_))));

        let a = AphiMatrix::new(&Character::new([int(2), int(3), int(5), int(7)], [int(0), int(0)]));
        assert_eq!(a.entries[0][1], int(-2));
        assert_eq!(a.entries[2][0], int(-12));
        assert_eq!(a.entries[3][2], int(21));
    }

    #[test]
    fn quasi_whittaker_examples() {
        assert!(quasi_whittaker_vectors_deg1(&ones()).unwrap().is_empty());
        let zero = Character::new([int(0), int(0), int(0), int(0)], [int(0), int(0)]);
        assert_eq!(quasi_whittaker_vectors_deg1(&zero).unwrap().len(), 4);
        let p0 = Character::new([int(1), int(0), int(0), int(0)], [int(0), int(0)]);
        let k = quasi_whittaker_vectors_deg1(&p0).unwrap();
        assert!(!k.is_empty());
        assert_eq!(k, AphiMatrix::new(&p0).kernel());
    }

    /// Row `m` of `A_φ` is `(φ([p_m, e]), φ([p_m, i]), φ([p_m, h]), φ([p_m, f]))`.
    #[test]
    fn aphi_rows_are_bracket_values() {
        let phi = Character::new([int(2), ratio(-1, 3), int(5), int(7)], [int(0), int(0)]);
        let a = AphiMatrix::new(&phi);
        let p = [w2::p0(), w2::p1(), w2::p2(), w2::p3()];
        for (row, pm) in p.iter().enumerate() {
            for (col, z) in w2::g0_basis().iter().enumerate() {
                assert_eq!(phi.value(&pm.bracket(z).unwrap()).unwrap(), a.entries[row][col]);
            }
        }
    }

    #[test]
    fn intertwiner_examples() {
        let lam1 = exterior_power(2, 1).unwrap();
        let source = InducedModule::new(FiniteModule::from_gln(&lam1));
        let target = TensorModule::new(tau_twist(&lam1));
        let w = TruncationWindow::for_module(&source, 3);
        let images: Vec<ModuleVector> = (0..2)
            .map(|k| ModuleVector::basis(Family::Tensor, 2, mi(&[0, 0]), k))
            .collect();
        assert!(matches!(
            intertwiner_check(&source, &target, images.clone(), &w).unwrap(),
            Intertwining::Certificate { .. }
        ));
        let mut bad = images;
        bad[1] = bad[1].scale(&int(2));
        assert!(matches!(
            intertwiner_check(&source, &target, bad, &w).unwrap(),
            Intertwining::Violation { .. }
        ));

        let lam = int(2);
        let wphi = make_w_phi(2, lam.clone()).unwrap();
        let target = TensorModule::new(one_dim_module(2, int(2) + lam).unwrap());
        let images = vec![ModuleVector::basis(Family::Tensor, 1, mi(&[0, 0]), 0)];
        assert!(matches!(
            intertwiner_check(&wphi, &target, images, &TruncationWindow::for_module(&wphi, 3)).unwrap(),
            Intertwining::Certificate { .. }
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn aphi_kernel_matches_action(p in proptest::array::uniform4((-4i64..5, 1i64..4))) {
            let phi = Character::new(p.map(|(a, b)| ratio(a, b)), [int(0), int(0)]);
            let k = quasi_whittaker_vectors_deg1(&phi).unwrap();
            let a = AphiMatrix::new(&phi);
            prop_assert_eq!(k.len(), 4 - a.rank());
            prop_assert_eq!(k, a.kernel());
        }

        #[test]
        fn annihilators_increase(n in 1usize..3, r in 0usize..3, d in 1u32..3) {
            let m = TensorModule::new(exterior_power(n, r.min(n)).unwrap());
            let w = TruncationWindow::for_module(&m, d);
            let wb = w.basis(&m);
            let mut prev: Vec<ModuleVector> = Vec::new();
            for s in 0..=w.grade_cap {
                let cur = annihilator_space(&m, &w, s).unwrap();
                for v in &prev {
                    prop_assert!(span_contains(&cur, v, &wb));
                }
                prev = cur;
            }
            prop_assert_eq!(prev.len(), wb.len());
        }
    }
}
