//! Exact arithmetic in cyclotomic fields.
//!
//! Values are canonical residues modulo the N-th cyclotomic polynomial with
//! arbitrary-precision rational coefficients, so a sum of roots of unity is
//! zero exactly when its canonical form is the zero vector. Every zero test
//! in the crate bottoms out here; no floating point is involved anywhere.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::rational::{denominator_u64, format_rational, lcm_u64, mod_one, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("attempted to invert zero in a cyclotomic field")]
    ZeroInversion,
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut n = n;
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut pk = 1u64;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            phi *= pk / p * (p - 1);
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

static CYCLO_CACHE: Lazy<RwLock<HashMap<u64, Arc<Vec<BigInt>>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Coefficients of the N-th cyclotomic polynomial, constant term first.
///
/// Computed by exact division of `x^N - 1` by every proper-divisor
/// cyclotomic polynomial; results are cached process-wide.
fn cyclotomic_coeffs(n: u64) -> Arc<Vec<BigInt>> {
    if let Some(c) = CYCLO_CACHE.read().unwrap().get(&n) {
        return c.clone();
    }
    let coeffs = compute_cyclotomic(n);
    let arc = Arc::new(coeffs);
    CYCLO_CACHE
        .write()
        .unwrap()
        .entry(n)
        .or_insert_with(|| arc.clone());
    arc
}

fn compute_cyclotomic(n: u64) -> Vec<BigInt> {
    // x^n - 1
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_coeffs(d);
        p = exact_div_int(&p, &phi_d);
    }
    debug_assert_eq!(p.len() as u64 - 1, euler_phi(n));
    p
}

/// Exact division of integer polynomials; the divisor must be monic and the
/// remainder must vanish.
fn exact_div_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    assert!(den[dn].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); rem.len() - dn];
    for i in (dn..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut rem[i], BigInt::zero());
        for (j, dj) in den.iter().enumerate().take(dn) {
            let t = &c * dj;
            rem[i - dn + j] -= t;
        }
        quot[i - dn] = c;
    }
    assert!(
        rem.iter().all(|c| c.is_zero()),
        "exact polynomial division left a remainder"
    );
    while quot.len() > 1 && quot.last().unwrap().is_zero() {
        quot.pop();
    }
    quot
}

/// The N-th cyclotomic polynomial in dense integer form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloPoly {
    order: u64,
    coeffs: Vec<BigInt>,
}

impl CycloPoly {
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients, constant term first; the leading coefficient is 1.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }
}

/// Computes the N-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u64) -> CycloPoly {
    assert!(n >= 1, "cyclotomic order must be positive");
    CycloPoly {
        order: n,
        coeffs: cyclotomic_coeffs(n).as_ref().clone(),
    }
}

/// Reduces a dense rational polynomial modulo the order-`n` cyclotomic
/// polynomial, returning exactly `phi(n)` coefficients.
fn reduce_mod_cyclo(mut p: Vec<Rational>, n: u64) -> Vec<Rational> {
    let phi = euler_phi(n) as usize;
    let cyclo = cyclotomic_coeffs(n);
    for i in (phi..p.len()).rev() {
        if p[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut p[i], Rational::zero());
        for (j, fj) in cyclo.iter().enumerate().take(phi) {
            if !fj.is_zero() {
                let t = &c * Rational::from_integer(fj.clone());
                p[i - phi + j] -= t;
            }
        }
    }
    p.truncate(phi);
    p.resize(phi, Rational::zero());
    p
}

/// Zero test for an integer combination of N-th roots of unity given as a
/// dense coefficient vector indexed by the exponent.
///
/// This is the allocation-light path used by brute-force root-of-unity
/// solvers; it is algebraically identical to building the canonical form and
/// checking it for zero.
pub fn int_root_combination_is_zero(n: u64, dense: &[BigInt]) -> bool {
    debug_assert!(dense.len() as u64 <= n);
    let phi = euler_phi(n) as usize;
    let cyclo = cyclotomic_coeffs(n);
    let mut p = dense.to_vec();
    for i in (phi..p.len()).rev() {
        if p[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut p[i], BigInt::zero());
        for (j, fj) in cyclo.iter().enumerate().take(phi) {
            if !fj.is_zero() {
                let t = &c * fj;
                p[i - phi + j] -= t;
            }
        }
    }
    p.iter().all(|c| c.is_zero())
}

/// An element of the order-N cyclotomic field in canonical form: a rational
/// polynomial in the primitive root, of degree below `phi(N)`.
#[derive(Debug, Clone)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    fn from_dense(order: u64, dense: Vec<Rational>) -> Self {
        CyclotomicNumber {
            order,
            coeffs: reduce_mod_cyclo(dense, order),
        }
    }

    pub fn zero() -> Self {
        CyclotomicNumber {
            order: 1,
            coeffs: vec![Rational::zero()],
        }
    }

    pub fn one() -> Self {
        CyclotomicNumber {
            order: 1,
            coeffs: vec![Rational::one()],
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        CyclotomicNumber {
            order: 1,
            coeffs: vec![r],
        }
    }

    /// `e^{2 pi i theta}` for a rational number of turns.
    pub fn root_of_unity(theta: &Rational) -> Self {
        let theta = mod_one(theta);
        let q = denominator_u64(&theta);
        let p: u64 = (&theta * Rational::from_integer(BigInt::from(q)))
            .to_integer()
            .try_into()
            .expect("reduced exponent numerator fits u64");
        let mut dense = vec![Rational::zero(); q as usize];
        dense[p as usize] = Rational::one();
        Self::from_dense(q, dense)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Canonical coefficients, length `phi(order)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self == &CyclotomicNumber::one()
    }

    /// Rewrites the value in the order-`m` field; `m` must be a multiple of
    /// the current order.
    pub fn lift_to_order(&self, m: u64) -> Self {
        assert!(m % self.order == 0, "target order must be a multiple");
        if m == self.order {
            return self.clone();
        }
        let k = (m / self.order) as usize;
        let mut dense = vec![Rational::zero(); self.coeffs.len() * k];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[i * k] = c.clone();
            }
        }
        Self::from_dense(m, dense)
    }

    /// Attempts to rewrite the value in the order-`n` subfield; `n` must
    /// divide the current order. Returns `None` when the value does not lie
    /// in that subfield.
    pub fn descend_to_order(&self, n: u64) -> Option<Self> {
        assert!(self.order % n == 0, "target order must divide");
        if n == self.order {
            return Some(self.clone());
        }
        let k = self.order / n;
        let phi_n = euler_phi(n) as usize;
        let phi_m = euler_phi(self.order) as usize;
        // Column j is the canonical form of zeta_M^{j k}.
        let mut cols = Vec::with_capacity(phi_n);
        for j in 0..phi_n {
            let mut dense = vec![Rational::zero(); (j as u64 * k) as usize + 1];
            *dense.last_mut().unwrap() = Rational::one();
            cols.push(reduce_mod_cyclo(dense, self.order));
        }
        let sol = solve_columns(&cols, &self.coeffs, phi_m)?;
        Some(CyclotomicNumber {
            order: n,
            coeffs: sol,
        })
    }

    pub fn negate(&self) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = lcm_u64(self.order, other.order);
        let a = self.lift_to_order(n);
        let b = other.lift_to_order(n);
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x + y)
            .collect();
        CyclotomicNumber { order: n, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.negate())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = lcm_u64(self.order, other.order);
        let a = self.lift_to_order(n);
        let b = other.lift_to_order(n);
        let mut dense = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    let t = x * y;
                    dense[i + j] += t;
                }
            }
        }
        Self::from_dense(n, dense)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// JSON form used in reports: order plus canonical coefficients.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order,
            "coeffs": self.coeffs.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        let n = lcm_u64(self.order, other.order);
        self.lift_to_order(n).coeffs == other.lift_to_order(n).coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                parts.push(format_rational(c));
            } else {
                parts.push(format!("{}*z{}^{}", format_rational(c), self.order, i));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Solves `sum_j x_j col_j = rhs` over the rationals; `None` if inconsistent.
fn solve_columns(cols: &[Vec<Rational>], rhs: &[Rational], rows: usize) -> Option<Vec<Rational>> {
    let ncols = cols.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut rank = 0usize;
    for col in 0..ncols {
        let piv = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(piv) = piv else { continue };
        m.swap(rank, piv);
        let inv = m[rank][col].recip();
        for j in col..=ncols {
            let v = &m[rank][j] * &inv;
            m[rank][j] = v;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..=ncols {
                    let t = &factor * &m[rank][j];
                    m[r][j] -= t;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
    }
    // Inconsistent if any zero row has nonzero rhs.
    for r in rank..rows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Rational::zero(); ncols];
    for col in 0..ncols {
        if pivot_of_col[col] != usize::MAX {
            sol[col] = m[pivot_of_col[col]][ncols].clone();
        }
    }
    Some(sol)
}

/// Canonical form of `sum_k c_k e^{2 pi i theta_k}`.
///
/// The field order is the lcm of the reduced exponent denominators; the
/// result is zero exactly when the complex sum is zero.
pub fn root_sum(terms: &[(Rational, Rational)]) -> CyclotomicNumber {
    if terms.is_empty() {
        return CyclotomicNumber::zero();
    }
    let reduced: Vec<(Rational, Rational)> = terms
        .iter()
        .map(|(c, theta)| (c.clone(), mod_one(theta)))
        .collect();
    let n = reduced
        .iter()
        .fold(1u64, |acc, (_, t)| lcm_u64(acc, denominator_u64(t)));
    let mut dense = vec![Rational::zero(); n as usize];
    for (c, theta) in &reduced {
        let q = denominator_u64(theta);
        let p: u64 = (theta * Rational::from_integer(BigInt::from(q)))
            .to_integer()
            .try_into()
            .expect("reduced exponent numerator fits u64");
        dense[(p * (n / q)) as usize] += c;
    }
    CyclotomicNumber::from_dense(n, dense)
}

/// Multiplicative inverse in the same field, via the extended Euclidean
/// algorithm against the cyclotomic polynomial.
pub fn cyclo_invert(z: &CyclotomicNumber) -> Result<CyclotomicNumber, ExactError> {
    if z.is_zero() {
        return Err(ExactError::ZeroInversion);
    }
    let n = z.order;
    let cyclo: Vec<Rational> = cyclotomic_coeffs(n)
        .iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect();
    let mut r0 = trim(z.coeffs.clone());
    let mut r1 = trim(cyclo);
    // r_i = s_i * z  (mod cyclotomic)
    let mut s0 = vec![Rational::one()];
    let mut s1 = vec![Rational::zero()];
    while !is_zero_poly(&r1) {
        let (q, rem) = poly_divmod(&r0, &r1);
        r0 = r1;
        r1 = rem;
        let qs1 = poly_mul(&q, &s1);
        let next = poly_sub(&s0, &qs1);
        s0 = s1;
        s1 = next;
    }
    // r0 is a nonzero constant: the cyclotomic polynomial is irreducible.
    debug_assert_eq!(r0.len(), 1);
    let c = r0[0].recip();
    let dense = s0.iter().map(|x| x * &c).collect();
    Ok(CyclotomicNumber::from_dense(n, dense))
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dn = den.len() - 1;
    let lead = den[dn].recip();
    let mut rem = num.to_vec();
    if rem.len() <= dn {
        return (vec![Rational::zero()], trim(rem));
    }
    let mut quot = vec![Rational::zero(); rem.len() - dn];
    for i in (dn..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut rem[i], Rational::zero()) * &lead;
        for (j, dj) in den.iter().enumerate().take(dn) {
            if !dj.is_zero() {
                let t = &c * dj;
                rem[i - dn + j] -= t;
            }
        }
        quot[i - dn] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                let t = x * y;
                out[i + j] += t;
            }
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use num_traits::ToPrimitive;

    fn poly_i64(p: &CycloPoly) -> Vec<i64> {
        p.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(poly_i64(&cyclotomic_poly(1)), vec![-1, 1]);
        assert_eq!(poly_i64(&cyclotomic_poly(4)), vec![1, 0, 1]);
        // Phi_12 = x^4 - x^2 + 1, by dividing x^12 - 1 through
        // Phi_1 Phi_2 Phi_3 Phi_4 Phi_6.
        assert_eq!(poly_i64(&cyclotomic_poly(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn third_roots_sum_to_zero() {
        let z = root_sum(&[
            (ratio(1, 1), ratio(0, 1)),
            (ratio(1, 1), ratio(1, 3)),
            (ratio(1, 1), ratio(2, 3)),
        ]);
        assert!(z.is_zero());
    }

    #[test]
    fn singleton_is_one() {
        let z = root_sum(&[(ratio(1, 1), ratio(0, 1))]);
        assert!(z.is_one());
    }

    #[test]
    fn eighth_root_difference_is_twice_a_root() {
        // zeta_8 - zeta_8^5 = 2 zeta_8
        let z = root_sum(&[(ratio(1, 1), ratio(1, 8)), (ratio(-1, 1), ratio(5, 8))]);
        let double = CyclotomicNumber::root_of_unity(&ratio(1, 8)).scale(&ratio(2, 1));
        assert_eq!(z, double);
        assert!(!z.is_zero());
    }

    #[test]
    fn invert_one_and_roots() {
        assert!(cyclo_invert(&CyclotomicNumber::one()).unwrap().is_one());
        let z8 = CyclotomicNumber::root_of_unity(&ratio(1, 8));
        let inv = cyclo_invert(&z8).unwrap();
        assert_eq!(inv, CyclotomicNumber::root_of_unity(&ratio(7, 8)));
        assert!(z8.mul(&inv).is_one());
    }

    #[test]
    fn invert_one_plus_third_root() {
        // (1 + zeta_3)^-1 = -zeta_3 since 1 + zeta_3 = -zeta_3^2.
        let z3 = CyclotomicNumber::root_of_unity(&ratio(1, 3));
        let v = CyclotomicNumber::one().add(&z3);
        let inv = cyclo_invert(&v).unwrap();
        assert_eq!(inv, z3.negate());
        assert!(v.mul(&inv).is_one());
    }

    #[test]
    fn inverting_zero_fails() {
        assert_eq!(
            cyclo_invert(&CyclotomicNumber::zero()),
            Err(ExactError::ZeroInversion)
        );
    }

    #[test]
    fn lift_and_descend_round_trip() {
        let z = root_sum(&[(ratio(2, 3), ratio(1, 6)), (ratio(-1, 2), ratio(5, 6))]);
        let lifted = z.lift_to_order(z.order() * 4);
        assert_eq!(lifted.order(), z.order() * 4);
        let back = lifted.descend_to_order(z.order()).unwrap();
        assert_eq!(back.coeffs(), z.coeffs());
        assert_eq!(back.order(), z.order());
    }

    #[test]
    fn descend_rejects_values_outside_subfield() {
        let z8 = CyclotomicNumber::root_of_unity(&ratio(1, 8));
        assert!(z8.descend_to_order(4).is_none());
    }

    #[test]
    fn equality_lifts_orders() {
        // zeta_3 expressed at order 3 and at order 6.
        let a = CyclotomicNumber::root_of_unity(&ratio(1, 3));
        let b = a.lift_to_order(6);
        assert_eq!(a, b);
    }
}
