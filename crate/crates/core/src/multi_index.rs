//! Exponent vectors `α ∈ Z₊ⁿ`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;
use smallvec::SmallVec;

use crate::error::{check_arity, Result};
use crate::scalar::{self, Scalar};

/// A multi-index of fixed arity. The derived ordering is lexicographic on
/// the exponent vector, which is exactly `≻` for indices of equal arity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(exponents: impl IntoIterator<Item = u32>) -> Self {
        MultiIndex(exponents.into_iter().collect())
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    /// The unit index `εᵢ` (0-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = 1;
        v
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_arity(self.arity(), other.arity())?;
        Ok(self.plus(other))
    }

    /// Componentwise difference, `None` when some entry would go negative.
    pub fn sub(&self, other: &Self) -> Result<Option<Self>> {
        check_arity(self.arity(), other.arity())?;
        Ok(self.minus(other))
    }

    /// `∏ C(αᵢ, βᵢ)`.
    pub fn binomial(&self, other: &Self) -> Result<Scalar> {
        check_arity(self.arity(), other.arity())?;
        Ok(Scalar::from_integer(self.binomial_int(other)))
    }

    /// `α! = ∏ αᵢ!`.
    pub fn factorial(&self) -> Scalar {
        Scalar::from_integer(self.factorial_int())
    }

    pub fn lex_compare(&self, other: &Self) -> Result<Ordering> {
        check_arity(self.arity(), other.arity())?;
        Ok(self.cmp(other))
    }

    /// `β ≤ α` componentwise.
    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub(crate) fn plus(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn minus(&self, other: &Self) -> Option<Self> {
        if !other.divides(self) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect(),
        ))
    }

    /// `kα`.
    pub fn scaled(&self, k: u32) -> Self {
        MultiIndex(self.0.iter().map(|a| a * k).collect())
    }

    pub(crate) fn bumped(&self, i: usize) -> Self {
        let mut v = self.clone();
        v.0[i] += 1;
        v
    }

    pub(crate) fn lowered(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.clone();
        v.0[i] -= 1;
        Some(v)
    }

    pub(crate) fn binomial_int(&self, other: &Self) -> BigInt {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(BigInt::one(), |acc, (&a, &b)| acc * scalar::binomial(a, b))
    }

    pub(crate) fn factorial_int(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &a| acc * scalar::factorial(a))
    }

    /// All indices of arity `n` and size exactly `m`, in lexicographic order.
    pub fn of_size(n: usize, m: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = SmallVec::<[u32; 4]>::from_elem(0, n);
        fill(&mut out, &mut cur, 0, m);
        out.sort();
        out
    }

    /// All indices of size at most `m`, by increasing size then lex.
    pub fn up_to_size(n: usize, m: u32) -> Vec<MultiIndex> {
        (0..=m).flat_map(|k| Self::of_size(n, k)).collect()
    }
}

fn fill(out: &mut Vec<MultiIndex>, cur: &mut SmallVec<[u32; 4]>, pos: usize, left: u32) {
    if cur.is_empty() {
        if left == 0 {
            out.push(MultiIndex(cur.clone()));
        }
        return;
    }
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(MultiIndex(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for a in 0..=left {
        cur[pos] = a;
        fill(out, cur, pos + 1, left - a);
    }
    cur[pos] = 0;
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scalar::int;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.iter().copied())
    }

    #[test]
    fn add_examples() {
        assert_eq!(mi(&[1, 0]).add(&mi(&[0, 2])).unwrap(), mi(&[1, 2]));
        assert_eq!(mi(&[0, 0]).add(&mi(&[0, 0])).unwrap(), mi(&[0, 0]));
        assert_eq!(mi(&[2, 1]).add(&mi(&[1, 1])).unwrap(), mi(&[3, 2]));
        assert_eq!(
            mi(&[1]).add(&mi(&[1, 0])),
            Err(Error::Arity { left: 1, right: 2 })
        );
    }

    #[test]
    fn sub_examples() {
        assert_eq!(mi(&[2, 1]).sub(&mi(&[1, 0])).unwrap(), Some(mi(&[1, 1])));
        assert_eq!(mi(&[1, 1]).sub(&mi(&[2, 0])).unwrap(), None);
        assert_eq!(mi(&[3, 4]).sub(&mi(&[3, 4])).unwrap(), Some(mi(&[0, 0])));
        assert!(mi(&[1]).sub(&mi(&[1, 1])).is_err());
    }

    #[test]
    fn binomial_and_factorial_examples() {
        assert_eq!(mi(&[2, 1]).binomial(&mi(&[1, 0])).unwrap(), int(2));
        assert_eq!(mi(&[0, 0]).binomial(&mi(&[0, 0])).unwrap(), int(1));
        assert_eq!(mi(&[1, 1]).binomial(&mi(&[2, 0])).unwrap(), int(0));
        assert!(mi(&[1, 1]).binomial(&mi(&[2])).is_err());
        assert_eq!(mi(&[0, 0]).factorial(), int(1));
        assert_eq!(mi(&[2, 1]).factorial(), int(2));
        assert_eq!(mi(&[3, 2]).factorial(), int(12));
    }

    #[test]
    fn lex_examples() {
        assert_eq!(mi(&[1, 0]).lex_compare(&mi(&[0, 5])).unwrap(), Ordering::Greater);
        assert_eq!(mi(&[2, 2]).lex_compare(&mi(&[2, 2])).unwrap(), Ordering::Equal);
        assert_eq!(
            mi(&[2, 1, 0]).lex_compare(&mi(&[2, 0, 9])).unwrap(),
            Ordering::Greater
        );
        assert!(mi(&[1]).lex_compare(&mi(&[1, 0])).is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(mi(&[1, 0, 3]).to_string(), "(1,0,3)");
    }

    #[test]
    fn enumeration_counts() {
        // C(m + n - 1, n - 1)
        assert_eq!(MultiIndex::of_size(3, 4).len(), 15);
        assert_eq!(MultiIndex::of_size(1, 3), alloc::vec![mi(&[3])]);
        assert_eq!(MultiIndex::up_to_size(2, 3).len(), 10);
    }

    fn index(n: usize) -> impl Strategy<Value = MultiIndex> {
        proptest::collection::vec(0u32..5, n).prop_map(MultiIndex::new)
    }

    proptest! {
        #[test]
        fn binomial_nonzero_iff_componentwise_le((a, b) in (1usize..5).prop_flat_map(|n| (index(n), index(n)))) {
            let nonzero = a.binomial(&b).unwrap() != int(0);
            prop_assert_eq!(nonzero, b.divides(&a));
            prop_assert_eq!(nonzero, a.sub(&b).unwrap().is_some());
        }

        #[test]
        fn factorial_splits((a, b) in (1usize..5).prop_flat_map(|n| (index(n), index(n)))) {
            if let Some(diff) = a.sub(&b).unwrap() {
                prop_assert_eq!(a.factorial(), a.binomial(&b).unwrap() * b.factorial() * diff.factorial());
            }
        }

        #[test]
        fn lex_is_total_order((a, b, c) in (1usize..4).prop_flat_map(|n| (index(n), index(n), index(n)))) {
            let ab = a.lex_compare(&b).unwrap();
            prop_assert_eq!(ab.reverse(), b.lex_compare(&a).unwrap());
            if ab != Ordering::Greater && b.lex_compare(&c).unwrap() != Ordering::Greater {
                prop_assert!(a.lex_compare(&c).unwrap() != Ordering::Greater);
            }
            if ab == Ordering::Equal {
                prop_assert_eq!(&a, &b);
            }
        }
    }
}
