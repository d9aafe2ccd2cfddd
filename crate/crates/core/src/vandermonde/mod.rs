//! Generalized Vandermonde determinants in three variables, their Schur
//! quotients, root-of-unity solution sets, and the exhaustive search over
//! small-denominator three-interval configurations.

mod search;
mod torus;

pub use search::{
    exceptional_search, ConfigReport, Counterexample, DSummary, ExceptionalHit, SearchOptions,
    SearchReport,
};
pub use torus::{torus_solutions, TorusSolutionSet};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exactnum::int_root_combination_is_zero;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VandermondeError {
    #[error("exponents must satisfy 0 < j < k < l, got ({0}, {1}, {2})")]
    BadExponents(u64, u64, u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial division left a remainder; divisibility structure violated")]
    NotDivisible,
}

/// Strictly increasing positive exponents `(j, k, l)` of a generalized
/// Vandermonde determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GVExponents {
    j: u64,
    k: u64,
    l: u64,
}

impl GVExponents {
    pub fn new(j: u64, k: u64, l: u64) -> Result<Self, VandermondeError> {
        if j == 0 || j >= k || k >= l {
            return Err(VandermondeError::BadExponents(j, k, l));
        }
        Ok(GVExponents { j, k, l })
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn gcd(&self) -> u64 {
        self.j.gcd(&self.k).gcd(&self.l)
    }

    /// `(j, k, l) / g`.
    pub fn primitive(&self) -> GVExponents {
        let g = self.gcd();
        GVExponents {
            j: self.j / g,
            k: self.k / g,
            l: self.l / g,
        }
    }
}

impl FromStr for GVExponents {
    type Err = VandermondeError;

    /// Parses the `"j,k,l"` text form.
    fn from_str(text: &str) -> Result<Self, VandermondeError> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(VandermondeError::Parse(format!(
                "expected `j,k,l`, got `{text}`"
            )));
        }
        let nums: Vec<u64> = parts
            .iter()
            .map(|p| {
                p.parse::<u64>()
                    .map_err(|_| VandermondeError::Parse(format!("bad exponent `{p}`")))
            })
            .collect::<Result<_, _>>()?;
        GVExponents::new(nums[0], nums[1], nums[2])
    }
}

impl fmt::Display for GVExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.j, self.k, self.l)
    }
}

/// Parses a `|`-separated system of exponent triples.
pub fn parse_system(text: &str) -> Result<Vec<GVExponents>, VandermondeError> {
    text.split('|').map(|p| p.trim().parse()).collect()
}

/// Sparse exact-integer polynomial in `X1, X2, X3`; keys are exponent
/// triples, zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GVPolynomial {
    terms: BTreeMap<[u64; 3], BigInt>,
}

impl GVPolynomial {
    pub fn zero() -> Self {
        GVPolynomial::default()
    }

    pub fn one() -> Self {
        GVPolynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = GVPolynomial::default();
        p.add_term([0, 0, 0], c);
        p
    }

    pub fn monomial(exps: [u64; 3], coeff: BigInt) -> Self {
        let mut p = GVPolynomial::default();
        p.add_term(exps, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&[0, 0, 0]).is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u64; 3], &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exps: [u64; 3], coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        GVPolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = GVPolynomial::default();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }

    /// Transposes two variables.
    pub fn swap_vars(&self, a: usize, b: usize) -> Self {
        GVPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e.swap(a, b);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Substitutes `X_i -> X_i^g`.
    pub fn substitute_powers(&self, g: u64) -> Self {
        GVPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[0] * g, e[1] * g, e[2] * g], c.clone()))
                .collect(),
        }
    }

    fn leading(&self) -> Option<(&[u64; 3], &BigInt)> {
        self.terms.last_key_value()
    }

    /// Exact multivariate division: `self = q * divisor` with no remainder,
    /// under the lexicographic term order.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Self, VandermondeError> {
        let (dexp, dcoeff) = divisor.leading().ok_or(VandermondeError::NotDivisible)?;
        let (dexp, dcoeff) = (*dexp, dcoeff.clone());
        let mut rem = self.clone();
        let mut quot = GVPolynomial::default();
        while let Some((rexp, rcoeff)) = rem.leading() {
            let mut qexp = [0u64; 3];
            for i in 0..3 {
                qexp[i] = rexp[i]
                    .checked_sub(dexp[i])
                    .ok_or(VandermondeError::NotDivisible)?;
            }
            if !(rcoeff % &dcoeff).is_zero() {
                return Err(VandermondeError::NotDivisible);
            }
            let qcoeff = rcoeff / &dcoeff;
            let t = GVPolynomial::monomial(qexp, qcoeff);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Ok(quot)
    }

    /// Whether the polynomial vanishes at
    /// `(zeta^e1, zeta^e2, zeta^e3)` for the order-`n` primitive root,
    /// decided in exact integer cyclotomic arithmetic.
    pub fn vanishes_at_roots(&self, n: u64, e: [u64; 3]) -> bool {
        let mut dense = vec![BigInt::zero(); n as usize];
        for (exps, coeff) in self.terms() {
            let mut pow = 0u64;
            for i in 0..3 {
                pow = (pow + (exps[i] % n) * (e[i] % n)) % n;
            }
            dense[pow as usize] += coeff;
        }
        int_root_combination_is_zero(n, &dense)
    }

    /// Signed evaluation at an integer point, for test oracles.
    pub fn eval_int(&self, x: [i64; 3]) -> BigInt {
        let mut acc = BigInt::zero();
        for (exps, coeff) in self.terms() {
            let mut term = coeff.clone();
            for i in 0..3 {
                term *= BigInt::from(x[i]).pow(exps[i] as u32);
            }
            acc += term;
        }
        acc
    }

    /// Sorted term list `[[e1, e2, e3], "coeff"]`; coefficients are strings
    /// so nothing overflows on the wire.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(e, c)| serde_json::json!([e.to_vec(), c.to_string()]))
            .collect();
        serde_json::Value::Array(terms)
    }
}

impl fmt::Display for GVPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| format!("{c}*X1^{}*X2^{}*X3^{}", e[0], e[1], e[2]))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All permutations of `[0, 1, 2, 3]` with signs.
fn permutations4() -> Vec<([usize; 4], i8)> {
    let mut out = Vec::with_capacity(24);
    let mut items = [0usize, 1, 2, 3];
    permute_rec(&mut items, 0, &mut out);
    out
}

fn permute_rec(items: &mut [usize; 4], k: usize, out: &mut Vec<([usize; 4], i8)>) {
    if k == 4 {
        out.push((*items, perm_sign(items)));
        return;
    }
    for i in k..4 {
        items.swap(k, i);
        permute_rec(items, k + 1, out);
        items.swap(k, i);
    }
}

fn perm_sign(p: &[usize; 4]) -> i8 {
    let mut inversions = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The exponents-`(j,k,l)` generalized Vandermonde determinant: the 4x4
/// determinant with an all-ones first row and rows
/// `(1, X_i^j, X_i^k, X_i^l)`, expanded to canonical sparse form.
pub fn gv_det(exps: &GVExponents) -> GVPolynomial {
    let column_exponents = [0u64, exps.j, exps.k, exps.l];
    let mut out = GVPolynomial::default();
    for (perm, sign) in permutations4() {
        // Row 0 contributes 1 from any column; rows 1..3 contribute
        // X_i ^ column_exponents[perm[i]].
        let e = [
            column_exponents[perm[1]],
            column_exponents[perm[2]],
            column_exponents[perm[3]],
        ];
        out.add_term(e, BigInt::from(sign as i64));
    }
    out
}

/// The ordinary three-variable Vandermonde `prod_{i<j} (X_j - X_i)`.
pub fn vandermonde3() -> GVPolynomial {
    let x = |i: usize| {
        let mut e = [0u64; 3];
        e[i] = 1;
        GVPolynomial::monomial(e, BigInt::one())
    };
    let b = |hi: usize, lo: usize| x(hi).sub(&x(lo));
    b(1, 0).mul(&b(2, 0)).mul(&b(2, 1))
}

/// Schur-type quotient `S = R / prod_{i<j}(X_j - X_i)` and the quotient
/// `T = R / R_{(1,2,3)}(X^g)` with `g = gcd(j,k,l)`; both divisions are
/// exact by the alternant structure and verified remainder-free.
pub fn schur_and_t(exps: &GVExponents) -> Result<(GVPolynomial, GVPolynomial), VandermondeError> {
    let r = gv_det(exps);
    let s = r.divide_exact(&vandermonde3())?;
    let g = exps.gcd();
    let nodes4 = gv_det(&GVExponents::new(1, 2, 3).unwrap()).substitute_powers(g);
    let t = r.divide_exact(&nodes4)?;
    Ok((s, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(j: u64, k: u64, l: u64) -> GVExponents {
        GVExponents::new(j, k, l).unwrap()
    }

    /// Independent construction of the classical factorization
    /// `prod_i (X_i - 1) * prod_{i<j} (X_j - X_i)`.
    fn classical_product() -> GVPolynomial {
        let x = |i: usize| {
            let mut exps = [0u64; 3];
            exps[i] = 1;
            GVPolynomial::monomial(exps, BigInt::one())
        };
        let one = GVPolynomial::one();
        let mut acc = GVPolynomial::one();
        for i in 0..3 {
            acc = acc.mul(&x(i).sub(&one));
        }
        acc.mul(&vandermonde3())
    }

    #[test]
    fn permutations_have_signs_and_count() {
        let perms = permutations4();
        assert_eq!(perms.len(), 24);
        let plus = perms.iter().filter(|(_, s)| *s == 1).count();
        assert_eq!(plus, 12);
    }

    #[test]
    fn classical_vandermonde_factorization() {
        assert_eq!(gv_det(&e(1, 2, 3)), classical_product());
    }

    #[test]
    fn repeated_variables_kill_the_determinant() {
        let r = gv_det(&e(2, 5, 9));
        // X1 = X2 = 2, X3 = 3.
        assert_eq!(r.eval_int([2, 2, 3]), BigInt::zero());
        // X1 = 1 duplicates the ones row.
        assert_eq!(r.eval_int([1, 5, 7]), BigInt::zero());
    }

    #[test]
    fn schur_examples() {
        let (s, t) = schur_and_t(&e(1, 2, 3)).unwrap();
        let one = GVPolynomial::one();
        let x = |i: usize| {
            let mut exps = [0u64; 3];
            exps[i] = 1;
            GVPolynomial::monomial(exps, BigInt::one())
        };
        let expected_s = x(0)
            .sub(&one)
            .mul(&x(1).sub(&one))
            .mul(&x(2).sub(&one));
        assert_eq!(s, expected_s);
        assert!(t.is_one());

        let (_, t246) = schur_and_t(&e(2, 4, 6)).unwrap();
        assert!(t246.is_one());
    }

    #[test]
    fn division_contract() {
        for exps in [e(1, 2, 3), e(2, 4, 6), e(2, 5, 9), e(3, 7, 11)] {
            let r = gv_det(&exps);
            let (s, t) = schur_and_t(&exps).unwrap();
            assert_eq!(s.mul(&vandermonde3()), r);
            let nodes =
                gv_det(&e(1, 2, 3)).substitute_powers(exps.gcd());
            assert_eq!(t.mul(&nodes), r);
        }
    }

    #[test]
    fn antisymmetry_under_transpositions() {
        let r = gv_det(&e(2, 5, 9));
        for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
            assert_eq!(r.swap_vars(a, b), r.neg());
        }
    }

    #[test]
    fn substitution_law() {
        for (base, g) in [(e(1, 2, 3), 2u64), (e(1, 3, 7), 3), (e(2, 3, 5), 4)] {
            let scaled = e(base.j * g, base.k * g, base.l * g);
            assert_eq!(gv_det(&scaled), gv_det(&base).substitute_powers(g));
        }
    }

    #[test]
    fn exponent_validation_and_parsing() {
        assert!(GVExponents::new(0, 1, 2).is_err());
        assert!(GVExponents::new(1, 1, 2).is_err());
        assert!(GVExponents::new(1, 3, 3).is_err());
        assert_eq!("1,2,3".parse::<GVExponents>().unwrap(), e(1, 2, 3));
        assert_eq!(
            parse_system("1,2,3|2,4,6").unwrap(),
            vec![e(1, 2, 3), e(2, 4, 6)]
        );
        assert!(parse_system("1,2").is_err());
    }

    #[test]
    fn not_divisible_is_detected() {
        let r = gv_det(&e(1, 2, 3));
        let bad = GVPolynomial::monomial([0, 0, 2], BigInt::one());
        assert_eq!(r.divide_exact(&bad), Err(VandermondeError::NotDivisible));
    }
}
