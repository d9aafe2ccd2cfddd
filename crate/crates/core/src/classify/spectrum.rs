//! Periodic candidate spectra with rational residues.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use super::ClassifyError;
use crate::rational::{
    as_integer, format_rational, parse_rational, rational_from_u64, Rational,
};

/// A candidate spectrum `{residues} + period Z` with `residues[0] = 0`,
/// all residues distinct rationals in `[0, period)`. Density one forces
/// exactly `period` residues, which is enforced at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicSpectrum {
    period: u64,
    residues: Vec<Rational>,
}

impl PeriodicSpectrum {
    pub fn new(period: u64, mut residues: Vec<Rational>) -> Result<Self, ClassifyError> {
        if period == 0 {
            return Err(ClassifyError::InvalidSpectrum("period must be >= 1".into()));
        }
        residues.sort();
        if residues.len() as u64 != period {
            return Err(ClassifyError::InvalidSpectrum(format!(
                "density must be 1: got {} residues for period {}",
                residues.len(),
                period
            )));
        }
        if !residues[0].is_zero() {
            return Err(ClassifyError::InvalidSpectrum(
                "residues must contain 0".into(),
            ));
        }
        let p = rational_from_u64(period);
        for w in residues.windows(2) {
            if w[0] == w[1] {
                return Err(ClassifyError::InvalidSpectrum(format!(
                    "duplicate residue {}",
                    format_rational(&w[0])
                )));
            }
        }
        if residues.iter().any(|r| r.is_negative() || *r >= p) {
            return Err(ClassifyError::InvalidSpectrum(format!(
                "residues must lie in [0, {period})"
            )));
        }
        Ok(PeriodicSpectrum { period, residues })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Sorted residues in `[0, period)`, starting with 0.
    pub fn residues(&self) -> &[Rational] {
        &self.residues
    }

    /// First `count` elements of the spectrum intersected with `[0, inf)`.
    pub fn elements_from_zero(&self, count: usize) -> Vec<Rational> {
        let p = rational_from_u64(self.period);
        let mut out = Vec::with_capacity(count);
        let mut shift = Rational::zero();
        while out.len() < count {
            for r in &self.residues {
                out.push(r + &shift);
                if out.len() == count {
                    break;
                }
            }
            shift += &p;
        }
        out
    }

    /// Whether `x` belongs to the spectrum, by residue lookup.
    pub fn contains(&self, x: &Rational) -> bool {
        let p = rational_from_u64(self.period);
        let res = x - (x / &p).floor() * &p;
        self.residues.contains(&res)
    }

    /// Whether the spectrum is exactly the integer lattice.
    pub fn is_integer_lattice(&self) -> bool {
        self.residues
            .iter()
            .enumerate()
            .all(|(i, r)| as_integer(r) == Some(i as i64))
    }
}

impl FromStr for PeriodicSpectrum {
    type Err = ClassifyError;

    /// Parses the `"d=2;0,1/2"` format: period, then comma-separated
    /// residues.
    fn from_str(text: &str) -> Result<Self, ClassifyError> {
        let (head, tail) = text
            .split_once(';')
            .ok_or_else(|| ClassifyError::Parse(format!("expected `d=<n>;<residues>`: {text}")))?;
        let period = head
            .trim()
            .strip_prefix("d=")
            .ok_or_else(|| ClassifyError::Parse(format!("expected `d=<n>`, got `{head}`")))?
            .trim()
            .parse::<u64>()
            .map_err(|_| ClassifyError::Parse(format!("bad period `{head}`")))?;
        let residues = tail
            .split(',')
            .map(|t| parse_rational(t).map_err(|e| ClassifyError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        PeriodicSpectrum::new(period, residues)
    }
}

impl fmt::Display for PeriodicSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(format_rational).collect();
        write!(f, "d={};{}", self.period, parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn parses_and_sorts() {
        let s: PeriodicSpectrum = "d=2;0,1/2".parse().unwrap();
        assert_eq!(s.period(), 2);
        assert_eq!(s.residues(), &[ratio(0, 1), ratio(1, 2)]);
    }

    #[test]
    fn rejects_bad_density_and_range() {
        assert!("d=2;0".parse::<PeriodicSpectrum>().is_err());
        assert!("d=1;1/2".parse::<PeriodicSpectrum>().is_err());
        assert!("d=2;0,2".parse::<PeriodicSpectrum>().is_err());
        assert!("d=2;0,0".parse::<PeriodicSpectrum>().is_err());
        assert!("2;0,1".parse::<PeriodicSpectrum>().is_err());
    }

    #[test]
    fn elements_walk_upwards() {
        let s: PeriodicSpectrum = "d=2;0,1/2".parse().unwrap();
        assert_eq!(
            s.elements_from_zero(4),
            vec![ratio(0, 1), ratio(1, 2), ratio(2, 1), ratio(5, 2)]
        );
    }

    #[test]
    fn membership_by_residue() {
        let s: PeriodicSpectrum = "d=2;0,1/2".parse().unwrap();
        assert!(s.contains(&ratio(5, 2)));
        assert!(s.contains(&ratio(-2, 1)));
        assert!(!s.contains(&ratio(1, 1)));
    }

    #[test]
    fn lattice_detection() {
        let z: PeriodicSpectrum = "d=3;0,1,2".parse().unwrap();
        assert!(z.is_integer_lattice());
        let s: PeriodicSpectrum = "d=2;0,1/2".parse().unwrap();
        assert!(!s.is_integer_lattice());
    }
}
