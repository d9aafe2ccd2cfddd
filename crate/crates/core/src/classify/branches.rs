//! Replays of the two- and three-interval case analyses on verified
//! spectral pairs. Every branch decision is taken by exact computation and
//! the quantities behind it are recorded as evidence; arms that are
//! impossible on a verified pair fail loudly instead of guessing.

use num_integer::Integer;
use num_traits::Zero;

use super::{
    tiles_decision, verify_completeness, verify_orthogonality, Branch, BranchReport,
    CircleRelation, ClassifyError, Completeness, Conclusion, Evidence, PeriodicSpectrum,
    TilesOutcome,
};
use crate::classify::verify::k_cycle;
use crate::embedding::{detect_period, membership_test, phi, span_rank, SpanBasis};
use crate::exactnum::{root_sum, CyclotomicNumber};
use crate::geometry::IntervalUnion;
use crate::rational::{
    as_integer, denominator_u64, format_rational, lcm_u64, ratio, rational_from_u64, Rational,
};
use crate::vandermonde::{gv_det, GVExponents};

/// Relation between the circles `alpha (e^{2 pi i t} - 1)` and
/// `beta (e^{2 pi i s} - 1)`: coincident when the radii agree, otherwise
/// whether the two parameters pick out the same point.
pub fn circle_relation(
    alpha: &CyclotomicNumber,
    beta: &CyclotomicNumber,
    t: &Rational,
    s: &Rational,
) -> Result<CircleRelation, ClassifyError> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(ClassifyError::ZeroRadius);
    }
    if alpha == beta {
        return Ok(CircleRelation::Coincident);
    }
    let p1 = alpha.mul(&circle_point(t));
    let p2 = beta.mul(&circle_point(s));
    if p1 == p2 {
        Ok(CircleRelation::SharedPoint)
    } else {
        Ok(CircleRelation::Distinct)
    }
}

/// `e^{2 pi i theta} - 1`.
fn circle_point(theta: &Rational) -> CyclotomicNumber {
    root_sum(&[
        (Rational::from_integer(1.into()), theta.clone()),
        (Rational::from_integer((-1).into()), Rational::zero()),
    ])
}

fn verified_or_not_spectral(
    omega: &IntervalUnion,
    spectrum: &PeriodicSpectrum,
) -> Result<Completeness, ClassifyError> {
    if !verify_orthogonality(omega, spectrum) {
        return Err(ClassifyError::NotSpectral {
            stage: "orthogonality",
        });
    }
    let completeness = verify_completeness(omega, spectrum)?;
    if !completeness.admits_spectrality() {
        return Err(ClassifyError::NotSpectral {
            stage: "completeness",
        });
    }
    Ok(completeness)
}

fn certified(
    omega: &IntervalUnion,
    branch: Branch,
    evidence: Vec<Evidence>,
) -> Result<BranchReport, ClassifyError> {
    match tiles_decision(omega, None)? {
        TilesOutcome::Tiles(cert) => Ok(BranchReport {
            branch,
            evidence,
            conclusion: Conclusion::TilingCertified,
            certificate: Some(cert),
        }),
        TilesOutcome::NotTiling { conflict_cell } => Err(ClassifyError::Internal(format!(
            "branch {branch:?} proves tiling but the greedy run conflicts at cell {conflict_cell}",
        ))),
    }
}

fn matrix_evidence(omega: &IntervalUnion, points: &[&Rational]) -> Evidence {
    let rows: Vec<serde_json::Value> = points.iter().map(|x| phi(omega, x).to_json()).collect();
    Evidence::new("exponentialMatrix", serde_json::Value::Array(rows))
}

/// Replays the two-interval case analysis on the first three nonnegative
/// spectrum elements. Every verified pair lands in a tiling branch; the
/// distinct-circles closure is unreachable and reported as an internal
/// error if ever hit.
pub fn classify_two_intervals(
    omega: &IntervalUnion,
    spectrum: &PeriodicSpectrum,
) -> Result<BranchReport, ClassifyError> {
    if omega.n() != 2 {
        return Err(ClassifyError::WrongIntervalCount {
            expected: 2,
            got: omega.n(),
        });
    }
    let completeness = verified_or_not_spectral(omega, spectrum)?;
    let d = spectrum.period();
    let r = omega.length(0).clone();
    let a = omega.left(1).clone();

    let mut evidence = vec![
        Evidence::new("period", serde_json::json!(d)),
        Evidence::new("completeness", serde_json::json!(completeness.label())),
    ];

    if d == 1 {
        evidence.push(Evidence::new("lambda", serde_json::json!("Z")));
        return certified(omega, Branch::LambdaIsZ, evidence);
    }

    let elems = spectrum.elements_from_zero(3);
    let (l1, l2, l3) = (&elems[0], &elems[1], &elems[2]);
    let v0 = phi(omega, l1);
    let v2 = phi(omega, l2);
    let v3 = phi(omega, l3);
    evidence.push(Evidence::new(
        "lambda23",
        serde_json::json!([format_rational(l2), format_rational(l3)]),
    ));
    evidence.push(matrix_evidence(omega, &[l1, l2, l3]));

    if v2 == v0 || v2 == v3 {
        return Err(ClassifyError::Internal(
            "phi(lambda2) coincides with a neighbour on a verified two-interval pair".into(),
        ));
    }

    if v0 == v3 {
        // Period-2 branch: phi(0) = phi(lambda3) makes the spectrum
        // 2-periodic and pins r = 1/2, a in Z/2.
        let period = detect_period(omega, l1, l3)?;
        if period != 2 {
            return Err(ClassifyError::Internal(format!(
                "two elements below the repeated point force period 2, got {period}"
            )));
        }
        let two_a = &a * ratio(2, 1);
        if r != ratio(1, 2) || as_integer(&two_a).is_none() {
            return Err(ClassifyError::Internal(
                "phi(2) = phi(0) must pin r = 1/2 and a in Z/2".into(),
            ));
        }
        evidence.push(Evidence::new("d", serde_json::json!(2)));
        evidence.push(Evidence::new("r", serde_json::json!("1/2")));
        evidence.push(Evidence::new(
            "a",
            serde_json::json!(format_rational(&a)),
        ));
        evidence.push(Evidence::new(
            "aInHalfIntegerLattice",
            serde_json::json!(true),
        ));
        return certified(omega, Branch::CaseOne, evidence);
    }

    // All three vectors distinct: the embedded matrix has rank 2, so the
    // 3x3 minor on the (a, r) columns is singular.
    let e2a = CyclotomicNumber::root_of_unity(&(l2 * &a));
    let e2r = CyclotomicNumber::root_of_unity(&(l2 * &r));
    let e3a = CyclotomicNumber::root_of_unity(&(l3 * &a));
    let e3r = CyclotomicNumber::root_of_unity(&(l3 * &r));
    let det3 = e2a
        .mul(&e3r)
        .sub(&e2r.mul(&e3a))
        .sub(&e3r.sub(&e3a))
        .add(&e2r.sub(&e2a));
    if !det3.is_zero() {
        return Err(ClassifyError::Internal(
            "rank-2 matrix of a verified pair has a nonsingular 3x3 minor".into(),
        ));
    }
    evidence.push(Evidence::new("caseTwoDeterminant", serde_json::json!("0")));

    let one = CyclotomicNumber::one();
    let alpha = e2a.sub(&one);
    let beta = e2r.sub(&one);
    evidence.push(Evidence::new("alpha", alpha.to_json()));
    evidence.push(Evidence::new("beta", beta.to_json()));

    if alpha.is_zero() {
        return Err(ClassifyError::Internal(
            "alpha = 0 would collapse phi(lambda2) onto phi(0)".into(),
        ));
    }
    if beta.is_zero() {
        if !spectrum.is_integer_lattice() {
            return Err(ClassifyError::Internal(
                "beta = 0 forces the integer lattice".into(),
            ));
        }
        evidence.push(Evidence::new("lambda", serde_json::json!("Z")));
        return certified(omega, Branch::BetaZero, evidence);
    }

    match circle_relation(&alpha, &beta, &(l3 * &r), &(l3 * &a))? {
        CircleRelation::Coincident => {
            if !spectrum.is_integer_lattice() {
                return Err(ClassifyError::Internal(
                    "coincident circles force the integer lattice".into(),
                ));
            }
            evidence.push(Evidence::new("lambda", serde_json::json!("Z")));
            certified(omega, Branch::CoincidentCircles, evidence)
        }
        rel => Err(ClassifyError::Internal(format!(
            "distinct circles ({rel:?}) would carry three intersection points on a verified pair",
        ))),
    }
}

/// Points spanning `V(Lambda)`: one `k`-cycle of every residue class.
fn spanning_points(omega: &IntervalUnion, spectrum: &PeriodicSpectrum) -> Vec<Rational> {
    let d = spectrum.period();
    let qd = k_cycle(omega, d);
    let mut points = Vec::new();
    for k in 0..qd {
        let shift = rational_from_u64(d) * rational_from_u64(k);
        for r in spectrum.residues() {
            points.push(r + &shift);
        }
    }
    points.sort();
    points
}

/// Minimal positive integer `g` with `g Z` contained in the spectrum,
/// found by scanning divisors of the period with the membership test.
fn minimal_lattice_period(
    omega: &IntervalUnion,
    spectrum: &PeriodicSpectrum,
    basis: &SpanBasis,
) -> Result<u64, ClassifyError> {
    let d = spectrum.period();
    for g in crate::exactnum::divisors(d) {
        let mut all_in = true;
        for k in 1..(d / g) {
            let x = rational_from_u64(g * k);
            let by_lemma = membership_test(omega, basis, &x)?;
            let by_residue = spectrum.contains(&x);
            if by_lemma != by_residue {
                return Err(ClassifyError::Internal(format!(
                    "membership test and residue lookup disagree at {}",
                    format_rational(&x)
                )));
            }
            if !by_lemma {
                all_in = false;
                break;
            }
        }
        if all_in {
            return Ok(g);
        }
    }
    unreachable!("g = d always succeeds: 0 is a residue")
}

/// Replays the three-interval case analysis: rank of the embedded span,
/// minimal lattice inside the spectrum, the two dimension splits, and the
/// routes they force. The `Exceptional` branch carries the generalized
/// Vandermonde payload.
pub fn classify_three_intervals(
    omega: &IntervalUnion,
    spectrum: &PeriodicSpectrum,
) -> Result<BranchReport, ClassifyError> {
    if omega.n() != 3 {
        return Err(ClassifyError::WrongIntervalCount {
            expected: 3,
            got: omega.n(),
        });
    }
    let completeness = verified_or_not_spectral(omega, spectrum)?;
    let d = spectrum.period();

    let points = spanning_points(omega, spectrum);
    let basis = span_rank(omega, &points);
    let rank = basis.rank();

    let mut evidence = vec![
        Evidence::new("period", serde_json::json!(d)),
        Evidence::new("completeness", serde_json::json!(completeness.label())),
        Evidence::new("rank", serde_json::json!(rank)),
    ];
    evidence.push(matrix_evidence(
        omega,
        &basis.points().iter().collect::<Vec<_>>(),
    ));

    if rank < 3 {
        return Ok(BranchReport {
            branch: Branch::DegenerateRank,
            evidence,
            conclusion: Conclusion::Degenerate,
            certificate: None,
        });
    }

    let dmin = minimal_lattice_period(omega, spectrum, &basis)?;
    evidence.push(Evidence::new("minimalLatticePeriod", serde_json::json!(dmin)));

    // dim V(dmin Z): one exponent cycle of the lattice points.
    let lattice_cycle = k_cycle(omega, dmin);
    let lattice_points: Vec<Rational> = (0..lattice_cycle)
        .map(|k| rational_from_u64(dmin * k))
        .collect();
    let dim_lattice = span_rank(omega, &lattice_points).rank();
    evidence.push(Evidence::new("dimVdZ", serde_json::json!(dim_lattice)));

    if dim_lattice >= 2 {
        return certified(omega, Branch::BckmRoute, evidence);
    }

    // dim V(Lambda \ dmin Z).
    let dmin_r = rational_from_u64(dmin);
    let complement_points: Vec<Rational> = points
        .iter()
        .filter(|x| as_integer(&(*x / &dmin_r)).is_none())
        .cloned()
        .collect();
    let dim_complement = span_rank(omega, &complement_points).rank();
    evidence.push(Evidence::new(
        "dimVComplement",
        serde_json::json!(dim_complement),
    ));

    match dim_complement {
        2 => {
            // Forced into the equal-thirds family.
            if dmin != 3 {
                return Err(ClassifyError::Internal(format!(
                    "dim split (1, 2) forces d = 3, got {dmin}"
                )));
            }
            let third = ratio(1, 3);
            if (0..3).any(|j| omega.length(j) != &third) {
                return Err(ClassifyError::Internal(
                    "d = 3 with lattice dimension 1 forces three equal thirds".into(),
                ));
            }
            evidence.push(Evidence::new("d", serde_json::json!(3)));
            evidence.push(Evidence::new("r", serde_json::json!("1/3")));
            evidence.push(Evidence::new("s", serde_json::json!("1/3")));
            certified(omega, Branch::ThreeEqualIntervals, evidence)
        }
        3 => exceptional_payload(omega, spectrum, &basis, dmin, evidence),
        other => Err(ClassifyError::Internal(format!(
            "dim V(dZ) = 1 with complement dimension {other} contradicts rank 3"
        ))),
    }
}

/// Builds the hand-off payload for the open case: the cell data on the
/// `(1/d)`-grid, the three distinguished generalized Vandermonde systems,
/// and the root-of-unity point the spectrum pins on them.
fn exceptional_payload(
    omega: &IntervalUnion,
    spectrum: &PeriodicSpectrum,
    basis: &SpanBasis,
    dmin: u64,
    mut evidence: Vec<Evidence>,
) -> Result<BranchReport, ClassifyError> {
    let dr = rational_from_u64(dmin);
    // dim V(dZ) = 1 pins every endpoint on the (1/d)-grid.
    let mut k = [0u64; 3];
    let mut l = [0u64; 3];
    for j in 0..3 {
        let kj = as_integer(&(omega.length(j) * &dr));
        let lj = as_integer(&(omega.left(j) * &dr));
        match (kj, lj) {
            (Some(kj), Some(lj)) if kj > 0 && lj >= 0 => {
                k[j] = kj as u64;
                l[j] = lj as u64;
            }
            _ => {
                return Err(ClassifyError::Internal(
                    "lattice dimension 1 must place the endpoints on the (1/d)-grid".into(),
                ))
            }
        }
    }
    if k[0] + k[1] + k[2] != dmin {
        return Err(ClassifyError::Internal(
            "cell counts must sum to the minimal lattice period".into(),
        ));
    }
    evidence.push(Evidence::new(
        "cells",
        serde_json::json!({"k": k.to_vec(), "l": l.to_vec()}),
    ));

    // Distinguished minors: left-endpoint columns plus one right endpoint.
    let right_exponents = [k[0], l[1] + k[1], l[2] + k[2]];
    let mut system = Vec::with_capacity(3);
    let mut gcds = Vec::with_capacity(3);
    for x in right_exponents {
        let mut e = vec![l[1], l[2], x];
        e.sort_unstable();
        let exps = GVExponents::new(e[0], e[1], e[2]).map_err(|err| {
            ClassifyError::Internal(format!("distinguished minor exponents invalid: {err}"))
        })?;
        gcds.push(exps.gcd());
        system.push(exps);
    }
    let total_gcd = gcds.iter().fold(0u64, |acc, g| acc.gcd(g));
    if total_gcd != 1 {
        return Err(ClassifyError::Internal(format!(
            "minimality of d forces gcd(g1,g2,g3) = 1, got {total_gcd}"
        )));
    }
    evidence.push(Evidence::new(
        "distinguishedSystem",
        serde_json::json!(system
            .iter()
            .map(|e| vec![e.j(), e.k(), e.l()])
            .collect::<Vec<_>>()),
    ));
    evidence.push(Evidence::new("gcds", serde_json::json!(gcds)));

    // The spectrum picks lambda_2, lambda_3 from the basis and a lambda_4
    // with independent embedded vectors; their induced torus point must
    // kill every distinguished minor.
    let lambda2 = basis.points()[1].clone();
    let lambda3 = basis.points()[2].clone();
    let lambda4 = spectrum
        .residues()
        .iter()
        .find(|x| {
            span_rank(omega, &[lambda2.clone(), lambda3.clone(), (*x).clone()]).rank() == 3
        })
        .cloned()
        .ok_or_else(|| {
            ClassifyError::Internal(
                "complement dimension 3 guarantees an independent fourth element".into(),
            )
        })?;

    let lambdas = [lambda2.clone(), lambda3.clone(), lambda4.clone()];
    let order = dmin
        * lambdas
            .iter()
            .fold(1u64, |acc, x| lcm_u64(acc, denominator_u64(x)));
    let exps: Vec<u64> = lambdas
        .iter()
        .map(|x| {
            let scaled = x * rational_from_u64(order) / &dr;
            as_integer(&scaled).expect("order clears denominators") as u64 % order
        })
        .collect();
    for member in &system {
        let poly = gv_det(member);
        if !poly.vanishes_at_roots(order, [exps[0], exps[1], exps[2]]) {
            return Err(ClassifyError::Internal(
                "rank-3 matrix must kill every distinguished minor".into(),
            ));
        }
    }
    evidence.push(Evidence::new(
        "torusPoint",
        serde_json::json!({
            "order": order,
            "exponents": exps,
            "lambdas": lambdas.iter().map(format_rational).collect::<Vec<_>>(),
        }),
    ));
    evidence.push(Evidence::new(
        "distinguishedMinorsVanish",
        serde_json::json!(true),
    ));

    // The case analysis is inconclusive here, but the tiling decision
    // itself is still computable and worth recording.
    let tiles = tiles_decision(omega, None)?;
    evidence.push(Evidence::new(
        "tilesDecision",
        serde_json::json!(tiles.tiles()),
    ));

    Ok(BranchReport {
        branch: Branch::Exceptional,
        evidence,
        conclusion: Conclusion::Exceptional,
        certificate: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega(text: &str) -> IntervalUnion {
        text.parse().unwrap()
    }

    fn spectrum(text: &str) -> PeriodicSpectrum {
        text.parse().unwrap()
    }

    #[test]
    fn circle_relation_examples() {
        let z3 = CyclotomicNumber::root_of_unity(&ratio(1, 3));
        let z3sq = CyclotomicNumber::root_of_unity(&ratio(2, 3));
        let one = CyclotomicNumber::one();
        let alpha = z3.sub(&one);
        let beta = z3sq.sub(&one);

        assert_eq!(
            circle_relation(&alpha, &alpha, &ratio(1, 5), &ratio(1, 7)).unwrap(),
            CircleRelation::Coincident
        );
        // Both circles pass through 0.
        assert_eq!(
            circle_relation(&alpha, &beta, &ratio(0, 1), &ratio(0, 1)).unwrap(),
            CircleRelation::SharedPoint
        );
        assert_eq!(
            circle_relation(&alpha, &beta, &ratio(2, 3), &ratio(1, 3)).unwrap(),
            CircleRelation::SharedPoint
        );
        assert_eq!(
            circle_relation(&alpha, &beta, &ratio(1, 3), &ratio(1, 3)).unwrap(),
            CircleRelation::Distinct
        );
        assert_eq!(
            circle_relation(&CyclotomicNumber::zero(), &beta, &ratio(0, 1), &ratio(0, 1)),
            Err(ClassifyError::ZeroRadius)
        );
    }

    #[test]
    fn two_interval_case_one() {
        let report =
            classify_two_intervals(&omega("0,1/2;1,1/2"), &spectrum("d=2;0,1/2")).unwrap();
        assert_eq!(report.branch, Branch::CaseOne);
        assert_eq!(report.conclusion, Conclusion::TilingCertified);
        let cert = report.certificate.unwrap();
        assert!(cert.is_exact_partition());
        assert!(report.evidence.iter().any(|e| e.name == "d"));
    }

    #[test]
    fn two_interval_lattice_spectrum() {
        let report = classify_two_intervals(&omega("0,1/2;3/2,1/2"), &spectrum("d=1;0")).unwrap();
        assert_eq!(report.branch, Branch::LambdaIsZ);
        assert_eq!(report.conclusion, Conclusion::TilingCertified);
        assert!(report.certificate.unwrap().is_exact_partition());
    }

    #[test]
    fn two_interval_not_spectral() {
        let err =
            classify_two_intervals(&omega("0,1/2;3/4,1/2"), &spectrum("d=2;0,1/2")).unwrap_err();
        assert_eq!(
            err,
            ClassifyError::NotSpectral {
                stage: "orthogonality"
            }
        );
    }

    #[test]
    fn integer_residues_fail_on_equal_thirds() {
        // The transform of the equal-thirds union factors through
        // 1 + e^{2 pi i xi} + e^{4 pi i xi}, which is 3 at xi = 1, so the
        // integer lattice is not a spectrum for it.
        let err = classify_three_intervals(&omega("0,1/3;1,1/3;2,1/3"), &spectrum("d=3;0,1,2"))
            .unwrap_err();
        assert_eq!(
            err,
            ClassifyError::NotSpectral {
                stage: "orthogonality"
            }
        );
    }

    #[test]
    fn three_equal_intervals_fractional_spectrum() {
        let report =
            classify_three_intervals(&omega("0,1/3;1,1/3;2,1/3"), &spectrum("d=3;0,1/3,2/3"))
                .unwrap();
        assert_eq!(report.branch, Branch::ThreeEqualIntervals);
        assert_eq!(report.conclusion, Conclusion::TilingCertified);
        assert!(report
            .evidence
            .iter()
            .any(|e| e.name == "minimalLatticePeriod" && e.value == serde_json::json!(3)));
    }

    #[test]
    fn wrong_arity_is_rejected() {
        assert!(matches!(
            classify_two_intervals(&omega("0,1"), &spectrum("d=1;0")),
            Err(ClassifyError::WrongIntervalCount { expected: 2, .. })
        ));
        assert!(matches!(
            classify_three_intervals(&omega("0,1"), &spectrum("d=1;0")),
            Err(ClassifyError::WrongIntervalCount { expected: 3, .. })
        ));
    }
}
