//! Truncated power-series derivations `Σ_{k≥-1} x_k`, `x_k ∈ g_k`, and
//! their action on smooth modules.

use alloc::vec::Vec;

use crate::error::{check_arity, Error, Result};
use crate::module::{act, ModuleVector, SmoothModule};
use crate::witt::WittElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeriesDerivation {
    n: usize,
    /// `components[k + 1]` is the grade `k` part.
    components: Vec<WittElement>,
}

impl PowerSeriesDerivation {
    /// Components listed from grade `-1` upward.
    pub fn new(n: usize, components: Vec<WittElement>) -> Result<Self> {
        for (idx, x) in components.iter().enumerate() {
            check_arity(n, x.arity())?;
            let k = idx as i32 - 1;
            if let Some(g) = x.grade() {
                if g != k {
                    return Err(Error::Range {
                        what: "component grade",
                        value: g as i64,
                        min: k as i64,
                        max: k as i64,
                    });
                }
            } else if !x.is_zero() {
                return Err(Error::Range {
                    what: "component grade",
                    value: x.max_grade().unwrap_or(-1) as i64,
                    min: k as i64,
                    max: k as i64,
                });
            }
        }
        Ok(PowerSeriesDerivation { n, components })
    }

    /// Splits a finite element into its graded pieces.
    pub fn from_element(x: &WittElement) -> Self {
        let top = x.max_grade().unwrap_or(-1);
        let components = (-1..=top).map(|k| x.grade_component(k)).collect();
        PowerSeriesDerivation {
            n: x.arity(),
            components,
        }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// Highest grade carried (`-2` for the empty series).
    pub fn truncation(&self) -> i32 {
        self.components.len() as i32 - 2
    }

    pub fn component(&self, k: i32) -> WittElement {
        if k < -1 {
            return WittElement::zero(self.n);
        }
        self.components
            .get((k + 1) as usize)
            .cloned()
            .unwrap_or_else(|| WittElement::zero(self.n))
    }

    pub fn components(&self) -> &[WittElement] {
        &self.components
    }

    /// Appends higher components, keeping the existing ones.
    pub fn extended(&self, more: impl IntoIterator<Item = WittElement>) -> Result<Self> {
        let mut comps = self.components.clone();
        comps.extend(more);
        Self::new(self.n, comps)
    }

    /// `Σ_{k ≤ N} x_k`.
    pub fn partial_sum(&self, upto: i32) -> WittElement {
        self.components
            .iter()
            .take((upto + 2).max(0) as usize)
            .fold(WittElement::zero(self.n), |acc, x| acc + x.clone())
    }

    /// Graded bracket: `[x, y]_k = Σ_{i+j=k} [x_i, y_j]`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        check_arity(self.n, other.n)?;
        let top = self.truncation() + other.truncation();
        let mut comps = Vec::new();
        for k in -1..=top {
            let mut acc = WittElement::zero(self.n);
            for i in -1..=self.truncation() {
                let j = k - i;
                if j < -1 || j > other.truncation() {
                    continue;
                }
                acc = acc + self.component(i).bracket(&other.component(j))?;
            }
            comps.push(acc);
        }
        // [g_{-1}, g_{-1}] = 0, so the k = -2 term never appears.
        Self::new(self.n, comps)
    }
}

/// `D v = Σ_{k=-1}^{N} x_k v` with `g_{≥N} v = 0`.
pub fn continuous_act<M: SmoothModule + ?Sized>(
    d: &PowerSeriesDerivation,
    v: &ModuleVector,
    m: &M,
) -> Result<ModuleVector> {
    check_arity(d.arity(), m.arity())?;
    let bound = m.smoothness_bound(v);
    act(m, &d.partial_sum(bound), v)
}
