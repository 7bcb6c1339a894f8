//! Sparse linear combinations keyed by canonical basis labels.

use alloc::collections::BTreeMap;
use num_traits::Zero;

use crate::scalar::Scalar;

pub(crate) type Terms<K> = BTreeMap<K, Scalar>;

/// Adds `c` to the coefficient at `key`, dropping the entry if it cancels.
pub(crate) fn add_term<K: Ord>(terms: &mut Terms<K>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
        alloc::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        alloc::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub(crate) fn add_scaled<K: Ord + Clone>(terms: &mut Terms<K>, other: &Terms<K>, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (k, v) in other {
        add_term(terms, k.clone(), v * c);
    }
}
