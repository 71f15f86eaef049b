//! Brute-force reference implementations used by tests and the acceptance
//! suite. These deliberately avoid the production code paths they check:
//! irreducibility is decided here by enumerating every coordinate subspace
//! and testing invariance entry by entry.

use crate::linalg::ComplexMatrix;

/// A coordinate subspace span{e_k : k ∈ K} is invariant under `a` iff
/// a[i][j] = 0 (below `threshold`) for every i ∉ K, j ∈ K.
pub fn subset_is_invariant(a: &ComplexMatrix, subset: usize, threshold: f64) -> bool {
    let n = a.rows();
    for j in 0..n {
        if subset & (1usize << j) == 0 {
            continue;
        }
        for i in 0..n {
            if subset & (1usize << i) != 0 {
                continue;
            }
            if a.get(i, j).norm() > threshold {
                return false;
            }
        }
    }
    true
}

/// Enumerates all 2^n coordinate subspaces; returns true iff none of the
/// proper non-trivial ones is invariant. Intended for n ≤ 16.
pub fn irreducible_by_enumeration(a: &ComplexMatrix, threshold: f64) -> bool {
    assert!(a.is_square());
    let n = a.rows();
    assert!(n <= 16, "subspace enumeration oracle is for small dimensions");
    let full = (1usize << n) - 1;
    for subset in 1..full {
        if subset_is_invariant(a, subset, threshold) {
            return false;
        }
    }
    true
}

/// All proper non-trivial invariant coordinate subspaces, as sorted index
/// lists. Empty iff the matrix is irreducible.
pub fn invariant_coordinate_subspaces(a: &ComplexMatrix, threshold: f64) -> Vec<Vec<usize>> {
    assert!(a.is_square());
    let n = a.rows();
    assert!(n <= 16, "subspace enumeration oracle is for small dimensions");
    let full = (1usize << n) - 1;
    let mut found = Vec::new();
    for subset in 1..full {
        if subset_is_invariant(a, subset, threshold) {
            found.push((0..n).filter(|k| subset & (1usize << k) != 0).collect());
        }
    }
    found
}
