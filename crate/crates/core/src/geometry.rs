//! Interval-union domain model, cell decomposition and the exact
//! Fourier-transform vanishing test.
//!
//! An interval union is a finite set of disjoint half-open intervals of total
//! measure one starting at the origin. Because all endpoints are rational it
//! can be rewritten as a set of unit cells over a common denominator, and the
//! vanishing of its Fourier transform at a rational frequency reduces to an
//! exact root-of-unity sum.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::exactnum::{root_sum, CyclotomicNumber};
use crate::rational::{
    denominator_u64, format_rational, lcm_u64, parse_rational, rational_from_u64, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("the Fourier vanishing test requires a nonzero frequency")]
    ZeroFrequency,
}

/// A union of finitely many disjoint half-open intervals `[a_j, a_j + r_j)`
/// with `a_1 = 0` and total measure 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalUnion {
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalUnion {
    /// Validates and builds an interval union from `(left, length)` pairs.
    pub fn new(mut intervals: Vec<(Rational, Rational)>) -> Result<Self, GeometryError> {
        if intervals.is_empty() {
            return Err(GeometryError::InvalidGeometry("no intervals given".into()));
        }
        intervals.sort_by(|a, b| a.0.cmp(&b.0));
        if !intervals[0].0.is_zero() {
            return Err(GeometryError::InvalidGeometry(
                "first left endpoint must be 0".into(),
            ));
        }
        let mut total = Rational::zero();
        for (left, len) in &intervals {
            if !len.is_positive() {
                return Err(GeometryError::InvalidGeometry(format!(
                    "interval at {} has non-positive length",
                    format_rational(left)
                )));
            }
            total += len;
        }
        if !total.is_one() {
            return Err(GeometryError::InvalidGeometry(format!(
                "total measure is {}, expected 1",
                format_rational(&total)
            )));
        }
        for w in intervals.windows(2) {
            let right = &w[0].0 + &w[0].1;
            if right > w[1].0 {
                return Err(GeometryError::InvalidGeometry(format!(
                    "intervals at {} and {} overlap",
                    format_rational(&w[0].0),
                    format_rational(&w[1].0)
                )));
            }
            if right == w[1].0 {
                return Err(GeometryError::InvalidGeometry(format!(
                    "adjacent intervals at {} must be merged",
                    format_rational(&w[1].0)
                )));
            }
        }
        Ok(IntervalUnion { intervals })
    }

    pub fn n(&self) -> usize {
        self.intervals.len()
    }

    /// `(left, length)` pairs, sorted by left endpoint.
    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn left(&self, j: usize) -> &Rational {
        &self.intervals[j].0
    }

    pub fn length(&self, j: usize) -> &Rational {
        &self.intervals[j].1
    }

    pub fn right(&self, j: usize) -> Rational {
        &self.intervals[j].0 + &self.intervals[j].1
    }

    /// All endpoints (left and right of every interval).
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(2 * self.n());
        for j in 0..self.n() {
            out.push(self.left(j).clone());
            out.push(self.right(j));
        }
        out
    }

    /// lcm of all endpoint denominators: the unit-cell grid.
    pub fn grid_denominator(&self) -> u64 {
        self.endpoints()
            .iter()
            .fold(1u64, |acc, e| lcm_u64(acc, denominator_u64(e)))
    }
}

impl FromStr for IntervalUnion {
    type Err = GeometryError;

    /// Parses the `"left,length;left,length"` rational text format.
    fn from_str(text: &str) -> Result<Self, GeometryError> {
        let mut intervals = Vec::new();
        for part in text.split(';') {
            let (l, r) = part.split_once(',').ok_or_else(|| {
                GeometryError::Parse(format!("expected `left,length`, got `{part}`"))
            })?;
            let left = parse_rational(l).map_err(|e| GeometryError::Parse(e.to_string()))?;
            let len = parse_rational(r).map_err(|e| GeometryError::Parse(e.to_string()))?;
            intervals.push((left, len));
        }
        IntervalUnion::new(intervals)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(l, r)| format!("{},{}", format_rational(l), format_rational(r)))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// An interval union rewritten as unit cells of width `1/Q` on the integer
/// grid; measure one means exactly `Q` cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellDecomposition {
    denominator: u64,
    cells: Vec<u64>,
}

impl CellDecomposition {
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// Sorted cell indices; cell `c` covers `[c/Q, (c+1)/Q)`.
    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    /// Reconstructs the interval union by merging runs of adjacent cells.
    pub fn to_interval_union(&self) -> IntervalUnion {
        let q = rational_from_u64(self.denominator);
        let mut intervals: Vec<(Rational, Rational)> = Vec::new();
        let mut run_start = self.cells[0];
        let mut prev = self.cells[0];
        for &c in &self.cells[1..] {
            if c != prev + 1 {
                intervals.push(run_interval(run_start, prev, &q));
                run_start = c;
            }
            prev = c;
        }
        intervals.push(run_interval(run_start, prev, &q));
        IntervalUnion::new(intervals).expect("cells of a valid union reassemble")
    }
}

fn run_interval(start: u64, end: u64, q: &Rational) -> (Rational, Rational) {
    (
        rational_from_u64(start) / q,
        rational_from_u64(end - start + 1) / q,
    )
}

/// Decomposes an interval union into unit cells over the lcm denominator.
pub fn cell_decomposition(omega: &IntervalUnion) -> CellDecomposition {
    let q = omega.grid_denominator();
    let qr = rational_from_u64(q);
    let mut cells = Vec::new();
    for j in 0..omega.n() {
        let first: u64 = (omega.left(j) * &qr)
            .to_integer()
            .try_into()
            .expect("non-negative cell index");
        let count: u64 = (omega.length(j) * &qr)
            .to_integer()
            .try_into()
            .expect("positive cell count");
        cells.extend(first..first + count);
    }
    cells.sort_unstable();
    debug_assert_eq!(cells.len() as u64, q);
    debug_assert_eq!(cells[0], 0);
    CellDecomposition {
        denominator: q,
        cells,
    }
}

/// Exact numerator of the Fourier transform at frequency `xi`:
/// `sum_j (e^{2 pi i xi (a_j + r_j)} - e^{2 pi i xi a_j})`, which equals
/// `2 pi i xi` times the transform of the indicator function.
pub fn ft_numerator(omega: &IntervalUnion, xi: &Rational) -> CyclotomicNumber {
    let mut terms = Vec::with_capacity(2 * omega.n());
    for j in 0..omega.n() {
        terms.push((Rational::one(), xi * omega.right(j)));
        terms.push((-Rational::one(), xi * omega.left(j)));
    }
    root_sum(&terms)
}

/// Whether the Fourier transform of the indicator of `omega` vanishes at the
/// nonzero rational frequency `xi`. Mutual orthogonality of two exponentials
/// `e_lambda, e_mu` on `omega` is exactly this test at `xi = lambda - mu`.
pub fn ft_is_zero(omega: &IntervalUnion, xi: &Rational) -> Result<bool, GeometryError> {
    if xi.is_zero() {
        return Err(GeometryError::ZeroFrequency);
    }
    Ok(ft_numerator(omega, xi).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn omega(text: &str) -> IntervalUnion {
        text.parse().unwrap()
    }

    #[test]
    fn parses_single_and_double() {
        let one = omega("0,1");
        assert_eq!(one.n(), 1);
        let two = omega("0,1/2;1,1/2");
        assert_eq!(two.n(), 2);
        assert_eq!(two.left(1), &ratio(1, 1));
    }

    #[test]
    fn rejects_overlap() {
        let err = "0,1/2;1/4,1/2".parse::<IntervalUnion>().unwrap_err();
        assert!(matches!(err, GeometryError::InvalidGeometry(msg) if msg.contains("overlap")));
    }

    #[test]
    fn rejects_bad_measure_zero_length_and_offset_start() {
        assert!("0,1/2;1,1/4".parse::<IntervalUnion>().is_err());
        assert!("0,0;0,1".parse::<IntervalUnion>().is_err());
        assert!("1/4,1".parse::<IntervalUnion>().is_err());
        assert!("0,1/2;1/2,1/2".parse::<IntervalUnion>().is_err());
    }

    #[test]
    fn cell_decomposition_examples() {
        let d = cell_decomposition(&omega("0,1"));
        assert_eq!((d.denominator(), d.cells()), (1, &[0u64][..]));

        let d = cell_decomposition(&omega("0,1/2;1,1/2"));
        assert_eq!((d.denominator(), d.cells()), (2, &[0u64, 2][..]));

        let d = cell_decomposition(&omega("0,1/3;1,1/3;2,1/3"));
        assert_eq!((d.denominator(), d.cells()), (3, &[0u64, 3, 6][..]));
    }

    #[test]
    fn cells_round_trip() {
        for text in ["0,1", "0,1/2;1,1/2", "0,1/3;1,1/3;2,1/3", "0,2/3;1,1/3"] {
            let o = omega(text);
            let d = cell_decomposition(&o);
            assert_eq!(d.to_interval_union(), o);
        }
    }

    #[test]
    fn ft_vanishing_examples() {
        let unit = omega("0,1");
        assert!(ft_is_zero(&unit, &ratio(1, 1)).unwrap());

        let two = omega("0,1/2;1,1/2");
        assert!(ft_is_zero(&two, &ratio(1, 2)).unwrap());
        assert!(!ft_is_zero(&two, &ratio(1, 1)).unwrap());
    }

    #[test]
    fn ft_rejects_zero_frequency() {
        let unit = omega("0,1");
        assert_eq!(
            ft_is_zero(&unit, &ratio(0, 1)),
            Err(GeometryError::ZeroFrequency)
        );
    }
}
