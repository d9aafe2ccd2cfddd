//! Spectral-pair verification: exact orthogonality, then completeness via
//! the complex Hadamard condition on the cell grid or, off the grid, a
//! certified numeric Parseval check.

use num_traits::{One, ToPrimitive, Zero};

use super::{ClassifyError, PeriodicSpectrum};
use crate::exactnum::root_sum;
use crate::geometry::{ft_numerator, IntervalUnion};
use crate::rational::{
    denominator_u64, lcm_u64, mod_one, rational_from_u64, Rational,
};

/// Period of the exponent pattern of `xi -> xi + d k` in `k`: the lcm over
/// endpoints `e` of the denominator of `d e`. Checking one full cycle of
/// `k` therefore decides the vanishing of the transform on the whole
/// arithmetic progression.
pub fn k_cycle(omega: &IntervalUnion, d: u64) -> u64 {
    let dr = rational_from_u64(d);
    omega
        .endpoints()
        .iter()
        .fold(1u64, |acc, e| acc.lcm_with(denominator_u64(&(e * &dr))))
}

trait LcmWith {
    fn lcm_with(self, other: u64) -> u64;
}

impl LcmWith for u64 {
    fn lcm_with(self, other: u64) -> u64 {
        lcm_u64(self, other)
    }
}

/// Exponent multiset of the transform numerator at frequency `xi`; used to
/// assert that the pattern really is periodic in `k` with the stated cycle.
fn exponent_pattern(omega: &IntervalUnion, xi: &Rational) -> Vec<Rational> {
    omega
        .endpoints()
        .iter()
        .map(|e| mod_one(&(xi * e)))
        .collect()
}

/// Whether the transform numerator vanishes on the whole progression
/// `xi0 + d Z`, decided over one full `k`-cycle. `skip_zero` omits the
/// `xi = 0` member (needed when `xi0 = 0`).
fn progression_vanishes(omega: &IntervalUnion, xi0: &Rational, d: u64, skip_zero: bool) -> bool {
    let qd = k_cycle(omega, d);
    let dr = rational_from_u64(d);
    debug_assert_eq!(
        exponent_pattern(omega, xi0),
        exponent_pattern(omega, &(xi0 + &dr * rational_from_u64(qd))),
        "exponent pattern must repeat after one k-cycle"
    );
    let range = if skip_zero { 1..=qd } else { 0..=qd - 1 };
    for k in range {
        let xi = xi0 + &dr * rational_from_u64(k);
        if xi.is_zero() {
            continue;
        }
        if !ft_numerator(omega, &xi).is_zero() {
            return false;
        }
    }
    true
}

/// Mutual orthogonality of the exponentials indexed by the spectrum: the
/// transform must vanish at every residue difference shifted by every
/// multiple of the period, and at every nonzero multiple of the period.
pub fn verify_orthogonality(omega: &IntervalUnion, spectrum: &PeriodicSpectrum) -> bool {
    let d = spectrum.period();
    let res = spectrum.residues();
    for (i, li) in res.iter().enumerate() {
        for (j, lj) in res.iter().enumerate() {
            if i != j && !progression_vanishes(omega, &(li - lj), d, false) {
                return false;
            }
        }
    }
    progression_vanishes(omega, &Rational::zero(), d, true)
}

/// Completeness verdict for a candidate pair that already passed
/// orthogonality.
#[derive(Debug, Clone, PartialEq)]
pub enum Completeness {
    /// Exact verdict through the complex Hadamard condition.
    Complete,
    Incomplete,
    /// Numeric Parseval verdict with a certified residual bound: the
    /// partial sums match completeness to within the bound.
    NumericCertified(f64),
}

impl Completeness {
    pub fn admits_spectrality(&self) -> bool {
        !matches!(self, Completeness::Incomplete)
    }

    /// Stable string form used in reports.
    pub fn label(&self) -> String {
        match self {
            Completeness::Complete => "Complete".into(),
            Completeness::Incomplete => "Incomplete".into(),
            Completeness::NumericCertified(b) => format!("NumericCertified(bound={b:e})"),
        }
    }
}

/// Completeness of the exponential system on the interval union.
///
/// When every endpoint lies on the `(1/d)`-grid the union is a disjoint
/// collection of `d` cells of width `1/d` and completeness is exactly the
/// complex Hadamard condition `H H* = d I` for the matrix
/// `H[i][j] = e^{2 pi i lambda_i c_j / d}`, checked in exact arithmetic.
/// Otherwise a Parseval sum over the cell-local exponential basis is
/// evaluated numerically with a closed-form tail bound.
pub fn verify_completeness(
    omega: &IntervalUnion,
    spectrum: &PeriodicSpectrum,
) -> Result<Completeness, ClassifyError> {
    if !verify_orthogonality(omega, spectrum) {
        return Err(ClassifyError::PreconditionViolated(
            "verify_orthogonality must pass before the completeness check",
        ));
    }
    let d = spectrum.period();
    if omega
        .endpoints()
        .iter()
        .all(|e| d % denominator_u64(e) == 0)
    {
        Ok(hadamard_check(omega, spectrum))
    } else {
        Ok(parseval_check(omega, spectrum))
    }
}

/// Exact route: rows of the cell-exponential matrix must be pairwise
/// orthogonal; diagonal entries are `d` automatically.
fn hadamard_check(omega: &IntervalUnion, spectrum: &PeriodicSpectrum) -> Completeness {
    let d = spectrum.period();
    let dr = rational_from_u64(d);
    let mut cells: Vec<u64> = Vec::new();
    for j in 0..omega.n() {
        let start: u64 = (omega.left(j) * &dr)
            .to_integer()
            .try_into()
            .expect("grid start");
        let count: u64 = (omega.length(j) * &dr)
            .to_integer()
            .try_into()
            .expect("grid count");
        cells.extend(start..start + count);
    }
    debug_assert_eq!(cells.len() as u64, d);
    let res = spectrum.residues();
    for i in 0..res.len() {
        for j in (i + 1)..res.len() {
            let delta = &res[i] - &res[j];
            let terms: Vec<(Rational, Rational)> = cells
                .iter()
                .map(|&c| (Rational::one(), &delta * rational_from_u64(c) / &dr))
                .collect();
            if !root_sum(&terms).is_zero() {
                return Completeness::Incomplete;
            }
        }
    }
    Completeness::Complete
}

/// Terms per residue and side in the truncated Parseval sums.
const PARSEVAL_CUTOFF: i64 = 200_000;
/// Rounding slop granted to the f64 partial sums.
const PARSEVAL_SLOP: f64 = 1e-9;

/// Numeric route: for cells of width `1/Q`, Parseval against the
/// cell-local exponential basis requires
/// `sum_{i,k} w(mQ - lambda_i - dk) = 1/Q` for every integer `m`, where
/// `w(u) = sin^2(pi u / Q) / (pi u)^2`. The sum only depends on `m`
/// through `mQ mod d`, so finitely many classes are checked; tails are
/// bounded by comparison with `sum 1/(x+k)^2`.
fn parseval_check(omega: &IntervalUnion, spectrum: &PeriodicSpectrum) -> Completeness {
    let q = omega.grid_denominator();
    let d = spectrum.period();
    let qf = q as f64;
    let df = d as f64;
    let target = 1.0 / qf;

    let residues: Vec<f64> = spectrum
        .residues()
        .iter()
        .map(|r| r.to_f64().expect("residue fits f64"))
        .collect();

    let classes = lcm_u64(q, d) / q; // d / gcd(q, d)
    // Tail: per residue the excluded terms sit at distance >= d(K + 1/2),
    // so each side is bounded by (pi d)^-2 sum_{j>K} (j - 1/2)^-2
    // <= (pi d)^-2 / (K - 1/2).
    let tail = residues.len() as f64 * 2.0
        / (std::f64::consts::PI.powi(2) * df * df)
        / (PARSEVAL_CUTOFF as f64 - 0.5);
    let bound = tail + PARSEVAL_SLOP;

    for m in 0..classes {
        let mq = (m * q) as f64;
        let mut sum = 0.0f64;
        for &lam in &residues {
            let x = mq - lam;
            let k0 = (x / df).round() as i64;
            for k in (k0 - PARSEVAL_CUTOFF)..=(k0 + PARSEVAL_CUTOFF) {
                let u = x - df * k as f64;
                sum += cell_weight(u, qf);
            }
        }
        if (sum - target).abs() > bound {
            return Completeness::Incomplete;
        }
    }
    Completeness::NumericCertified(bound)
}

/// `|FT of a width-1/Q cell|^2` at frequency `u`.
fn cell_weight(u: f64, q: f64) -> f64 {
    if u.abs() < 1e-12 {
        return 1.0 / (q * q);
    }
    let s = (std::f64::consts::PI * u / q).sin();
    s * s / (std::f64::consts::PI * u).powi(2)
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
    fn lattice_pair_is_orthogonal() {
        assert!(verify_orthogonality(&omega("0,1"), &spectrum("d=1;0")));
    }

    #[test]
    fn half_shift_pair_is_orthogonal() {
        assert!(verify_orthogonality(
            &omega("0,1/2;1,1/2"),
            &spectrum("d=2;0,1/2")
        ));
    }

    #[test]
    fn integer_pair_fails_orthogonality() {
        assert!(!verify_orthogonality(
            &omega("0,1/2;1,1/2"),
            &spectrum("d=2;0,1")
        ));
    }

    #[test]
    fn completeness_examples() {
        assert_eq!(
            verify_completeness(&omega("0,1"), &spectrum("d=1;0")).unwrap(),
            Completeness::Complete
        );
        assert_eq!(
            verify_completeness(&omega("0,1/2;1,1/2"), &spectrum("d=2;0,1/2")).unwrap(),
            Completeness::Complete
        );
        // Fractional residues make the cell matrix the 3x3 Fourier matrix.
        assert_eq!(
            verify_completeness(&omega("0,1/3;1,1/3;2,1/3"), &spectrum("d=3;0,1/3,2/3"))
                .unwrap(),
            Completeness::Complete
        );
    }

    #[test]
    fn completeness_requires_orthogonality() {
        let err =
            verify_completeness(&omega("0,1/2;1,1/2"), &spectrum("d=2;0,1")).unwrap_err();
        assert!(matches!(err, ClassifyError::PreconditionViolated(_)));
    }

    #[test]
    fn off_grid_lattice_pair_certifies_numerically() {
        // Endpoints have denominator 2 but the period is 1, so the exact
        // grid route does not apply; the Parseval fallback must certify.
        let o = omega("0,1/2;3/2,1/2");
        let s = spectrum("d=1;0");
        assert!(verify_orthogonality(&o, &s));
        match verify_completeness(&o, &s).unwrap() {
            Completeness::NumericCertified(bound) => assert!(bound < 1e-4),
            other => panic!("expected numeric certification, got {other:?}"),
        }
    }
}
