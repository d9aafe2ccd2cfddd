//! Brute-force common zeros of generalized Vandermonde systems at
//! roots of unity on the 3-torus.

use rayon::prelude::*;

use super::{gv_det, GVExponents, GVPolynomial};

/// Common zeros of a system at order-`N` roots of unity, split into the
/// trivial family (a coordinate equal to 1, or two coordinates equal) and
/// the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusSolutionSet {
    order: u64,
    solutions: Vec<[u64; 3]>,
    trivial_count: u64,
    nontrivial_count: u64,
}

impl TorusSolutionSet {
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Solutions as exponent triples, lexicographically sorted.
    pub fn solutions(&self) -> &[[u64; 3]] {
        &self.solutions
    }

    pub fn trivial_count(&self) -> u64 {
        self.trivial_count
    }

    pub fn nontrivial_count(&self) -> u64 {
        self.nontrivial_count
    }

    pub fn nontrivial_solutions(&self) -> Vec<[u64; 3]> {
        self.solutions
            .iter()
            .filter(|e| !is_trivial(**e))
            .copied()
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order,
            "trivialCount": self.trivial_count,
            "nontrivialCount": self.nontrivial_count,
            "solutions": self.solutions.iter().map(|e| e.to_vec()).collect::<Vec<_>>(),
        })
    }
}

/// A coordinate equal to 1 or two coinciding coordinates repeats a matrix
/// row, so these triples annihilate every generalized Vandermonde
/// determinant.
pub fn is_trivial(e: [u64; 3]) -> bool {
    e[0] == 0 || e[1] == 0 || e[2] == 0 || e[0] == e[1] || e[0] == e[2] || e[1] == e[2]
}

/// Enumerates all exponent triples in `(Z_N)^3`, evaluating every system
/// polynomial exactly with early exit on the first nonzero value.
pub fn torus_solutions(system: &[GVExponents], order: u64) -> TorusSolutionSet {
    assert!(!system.is_empty(), "system must be nonempty");
    assert!(order >= 1);
    let polys: Vec<GVPolynomial> = system.iter().map(gv_det).collect();

    let per_slice: Vec<Vec<[u64; 3]>> = (0..order)
        .into_par_iter()
        .map(|e1| {
            let mut found = Vec::new();
            for e2 in 0..order {
                for e3 in 0..order {
                    let e = [e1, e2, e3];
                    if is_trivial(e) || polys.iter().all(|p| p.vanishes_at_roots(order, e)) {
                        found.push(e);
                    }
                }
            }
            found
        })
        .collect();

    let mut solutions = Vec::new();
    for slice in per_slice {
        solutions.extend(slice);
    }
    let trivial_count = solutions.iter().filter(|e| is_trivial(**e)).count() as u64;
    let nontrivial_count = solutions.len() as u64 - trivial_count;
    TorusSolutionSet {
        order,
        solutions,
        trivial_count,
        nontrivial_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(j: u64, k: u64, l: u64) -> GVExponents {
        GVExponents::new(j, k, l).unwrap()
    }

    #[test]
    fn trivial_triples_always_solve() {
        let set = torus_solutions(&[e(2, 5, 9), e(1, 4, 6)], 5);
        for sol in [[0u64, 3, 4], [2, 2, 4], [1, 3, 3], [4, 2, 4]] {
            assert!(set.solutions().contains(&sol));
        }
        // Count of trivial triples in (Z_5)^3: inclusion-exclusion gives
        // 5^3 - (wlog distinct nonzero) = 125 - 4*3*2 = 101.
        assert_eq!(set.trivial_count(), 101);
    }

    #[test]
    fn classical_system_has_only_trivial_solutions_at_order_three() {
        let set = torus_solutions(&[e(1, 2, 3)], 3);
        assert_eq!(set.nontrivial_count(), 0);
        // Three distinct nonzero exponents cannot be drawn from {1, 2},
        // so every triple in (Z_3)^3 is trivial.
        assert_eq!(set.trivial_count(), 27);
        assert_eq!(set.order(), 3);
    }

    #[test]
    fn solutions_are_sorted_and_exact() {
        let set = torus_solutions(&[e(1, 2, 3)], 4);
        let mut sorted = set.solutions().to_vec();
        sorted.sort_unstable();
        assert_eq!(&sorted, set.solutions());
        // R_(1,2,3) vanishes only when two nodes of (1, X1, X2, X3)
        // coincide; at order 4 the nontrivial triples are those avoiding
        // 1 and each other, where the classical factorization is nonzero.
        assert_eq!(set.nontrivial_count(), 0);
    }
}
