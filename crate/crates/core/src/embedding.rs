//! The torus embedding of candidate spectra.
//!
//! A real number `x` maps to the pair of exponent vectors of
//! `e^{2 pi i (a_j + r_j) x}` (right endpoints) and `e^{2 pi i a_j x}` (left
//! endpoints). Mutual orthogonality of exponentials on the interval union is
//! the vanishing of the indefinite conjugate-linear form on these vectors,
//! so ranks, periods and membership all become exact computations in a
//! cyclotomic field.

use num_traits::Zero;

use crate::exactnum::{cyclo_invert, root_sum, CyclotomicNumber};
use crate::geometry::IntervalUnion;
use crate::rational::{
    as_integer, denominator_u64, format_rational, lcm_u64, mod_one, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("the two points do not share an embedding vector")]
    NotEqualVectors,
    #[error("period candidate {0} is not a positive integer")]
    NonIntegerPeriod(String),
    #[error("membership test requires a nonempty basis")]
    EmptyBasis,
}

/// Image of a point under the torus embedding, stored as exponents in
/// `[0, 1)`: entry `theta` stands for `e^{2 pi i theta}`.
///
/// The second block always starts with exponent 0 because the first left
/// endpoint is pinned at the origin, so the corresponding coordinate is 1
/// for every real input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiVector {
    first: Vec<Rational>,
    second: Vec<Rational>,
}

impl PhiVector {
    pub fn n(&self) -> usize {
        self.first.len()
    }

    /// Exponents against the right endpoints.
    pub fn first(&self) -> &[Rational] {
        &self.first
    }

    /// Exponents against the left endpoints.
    pub fn second(&self) -> &[Rational] {
        &self.second
    }

    /// All `2n` exponents, first block then second block.
    pub fn exponents(&self) -> impl Iterator<Item = &Rational> {
        self.first.iter().chain(self.second.iter())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "first": self.first.iter().map(format_rational).collect::<Vec<_>>(),
            "second": self.second.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

/// The embedding map: exponent of each endpoint times `x`, reduced mod 1.
pub fn phi(omega: &IntervalUnion, x: &Rational) -> PhiVector {
    let n = omega.n();
    let mut first = Vec::with_capacity(n);
    let mut second = Vec::with_capacity(n);
    for j in 0..n {
        first.push(mod_one(&(omega.right(j) * x)));
        second.push(mod_one(&(omega.left(j) * x)));
    }
    debug_assert!(second[0].is_zero());
    PhiVector { first, second }
}

/// The indefinite conjugate-linear form: inner product of the first blocks
/// minus inner product of the second blocks, as an exact cyclotomic value.
pub fn null_form(u: &PhiVector, v: &PhiVector) -> CyclotomicNumber {
    assert_eq!(u.n(), v.n(), "vectors must have the same block size");
    let mut terms = Vec::with_capacity(2 * u.n());
    for j in 0..u.n() {
        terms.push((Rational::from_integer(1.into()), &u.first[j] - &v.first[j]));
    }
    for j in 0..u.n() {
        terms.push((
            Rational::from_integer((-1).into()),
            &u.second[j] - &v.second[j],
        ));
    }
    root_sum(&terms)
}

/// A maximal independent subset of embedded points.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    points: Vec<Rational>,
    rank: usize,
}

impl SpanBasis {
    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// Rank and greedy basis of the span of the embedded points, by exact
/// Gaussian elimination over the cyclotomic field of the lcm order.
///
/// The earliest point whose vector is independent of the previously kept
/// ones wins, so the basis is deterministic.
pub fn span_rank(omega: &IntervalUnion, points: &[Rational]) -> SpanBasis {
    let vectors: Vec<(Rational, Vec<Rational>)> = points
        .iter()
        .map(|x| {
            let v = phi(omega, x);
            (x.clone(), v.exponents().cloned().collect())
        })
        .collect();
    let order = vectors
        .iter()
        .flat_map(|(_, exps)| exps.iter())
        .fold(1u64, |acc, e| lcm_u64(acc, denominator_u64(e)));

    let width = 2 * omega.n();
    // Rows already reduced: (pivot column, row normalized to pivot 1).
    let mut echelon: Vec<(usize, Vec<CyclotomicNumber>)> = Vec::new();
    let mut basis = Vec::new();

    for (point, exps) in vectors {
        let mut row: Vec<CyclotomicNumber> = exps
            .iter()
            .map(|e| CyclotomicNumber::root_of_unity(e).lift_to_order(order))
            .collect();
        for (pivot, reduced) in &echelon {
            let factor = row[*pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (cell, base) in row.iter_mut().zip(reduced.iter()) {
                *cell = cell.sub(&factor.mul(base));
            }
        }
        if let Some(pivot) = row.iter().position(|c| !c.is_zero()) {
            let inv = cyclo_invert(&row[pivot]).expect("pivot is nonzero");
            for cell in row.iter_mut() {
                *cell = cell.mul(&inv);
            }
            echelon.push((pivot, row));
            echelon.sort_by_key(|(p, _)| *p);
            basis.push(point);
        }
        if basis.len() == width {
            break;
        }
    }

    SpanBasis {
        rank: basis.len(),
        points: basis,
    }
}

/// Checks that two points share the same embedding vector and returns the
/// induced period `|l1 - l2|`, verifying it is a positive integer.
///
/// For a genuine spectral pair the period is guaranteed to be an integer;
/// on other inputs the check fails loudly instead of assuming it.
pub fn detect_period(
    omega: &IntervalUnion,
    l1: &Rational,
    l2: &Rational,
) -> Result<u64, EmbeddingError> {
    if phi(omega, l1) != phi(omega, l2) {
        return Err(EmbeddingError::NotEqualVectors);
    }
    let gap = if l1 > l2 { l1 - l2 } else { l2 - l1 };
    match as_integer(&gap) {
        Some(d) if d > 0 => Ok(d as u64),
        _ => Err(EmbeddingError::NonIntegerPeriod(format_rational(&gap))),
    }
}

/// Whether `x` is null against every basis point: the executable form of the
/// local-finiteness property of spectra.
pub fn membership_test(
    omega: &IntervalUnion,
    basis: &SpanBasis,
    x: &Rational,
) -> Result<bool, EmbeddingError> {
    if basis.points.is_empty() {
        return Err(EmbeddingError::EmptyBasis);
    }
    let vx = phi(omega, x);
    for y in &basis.points {
        if !null_form(&vx, &phi(omega, y)).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn two_halves() -> IntervalUnion {
        "0,1/2;1,1/2".parse().unwrap()
    }

    #[test]
    fn phi_direct_substitution() {
        let o = two_halves();
        let v = phi(&o, &ratio(1, 2));
        assert_eq!(v.first(), &[ratio(1, 4), ratio(3, 4)]);
        assert_eq!(v.second(), &[ratio(0, 1), ratio(1, 2)]);

        // All products integral at x = 2, so the vector collapses to phi(0).
        let v2 = phi(&o, &ratio(2, 1));
        assert_eq!(v2, phi(&o, &ratio(0, 1)));

        let any: IntervalUnion = "0,1/3;1,1/3;2,1/3".parse().unwrap();
        let v0 = phi(&any, &ratio(0, 1));
        assert!(v0.exponents().all(|e| e.is_zero()));
    }

    #[test]
    fn null_form_examples() {
        let o = two_halves();
        let p0 = phi(&o, &ratio(0, 1));
        let phalf = phi(&o, &ratio(1, 2));
        let p1 = phi(&o, &ratio(1, 1));

        assert!(null_form(&p0, &p0).is_zero());
        assert!(null_form(&p0, &phalf).is_zero());
        let minus_four = CyclotomicNumber::from_rational(ratio(-4, 1));
        assert_eq!(null_form(&p0, &p1), minus_four);
    }

    #[test]
    fn span_rank_examples() {
        let unit: IntervalUnion = "0,1".parse().unwrap();
        assert_eq!(span_rank(&unit, &[]).rank(), 0);
        let pts = [ratio(0, 1), ratio(1, 1), ratio(2, 1)];
        assert_eq!(span_rank(&unit, &pts).rank(), 1);

        let o = two_halves();
        let pts = [ratio(0, 1), ratio(1, 2), ratio(2, 1)];
        let basis = span_rank(&o, &pts);
        assert_eq!(basis.rank(), 2);
        assert_eq!(basis.points(), &[ratio(0, 1), ratio(1, 2)]);
    }

    #[test]
    fn detect_period_examples() {
        let unit: IntervalUnion = "0,1".parse().unwrap();
        assert_eq!(
            detect_period(&unit, &ratio(0, 1), &ratio(1, 1)).unwrap(),
            1
        );

        let o = two_halves();
        assert_eq!(detect_period(&o, &ratio(0, 1), &ratio(2, 1)).unwrap(), 2);

        let three: IntervalUnion = "0,1/3;1,1/3;2,1/3".parse().unwrap();
        assert_eq!(
            detect_period(&three, &ratio(0, 1), &ratio(3, 1)).unwrap(),
            3
        );
    }

    #[test]
    fn detect_period_errors() {
        let o = two_halves();
        assert_eq!(
            detect_period(&o, &ratio(0, 1), &ratio(1, 1)),
            Err(EmbeddingError::NotEqualVectors)
        );
        // Equal phi-vectors force an integer gap whenever the lengths sum
        // to 1, so the non-integer arm is only reachable through a zero gap.
        assert_eq!(
            detect_period(&o, &ratio(1, 2), &ratio(1, 2)),
            Err(EmbeddingError::NonIntegerPeriod("0".into()))
        );
    }

    #[test]
    fn membership_examples() {
        let o = two_halves();
        let basis = span_rank(&o, &[ratio(0, 1), ratio(1, 2)]);
        assert!(membership_test(&o, &basis, &ratio(0, 1)).unwrap());
        assert!(membership_test(&o, &basis, &ratio(5, 2)).unwrap());
        assert!(!membership_test(&o, &basis, &ratio(1, 1)).unwrap());
    }

    #[test]
    fn membership_requires_basis() {
        let o = two_halves();
        let empty = span_rank(&o, &[]);
        assert_eq!(
            membership_test(&o, &empty, &ratio(0, 1)),
            Err(EmbeddingError::EmptyBasis)
        );
    }
}
