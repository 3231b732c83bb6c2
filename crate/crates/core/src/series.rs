//! Multivariate power series with integer coefficients, truncated at a total
//! degree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exponent vector, ordered by total degree and then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A series in `nvars` variables with every monomial of total degree at most
/// `cap`. Zero coefficients are never stored.
#[derive(Debug, Clone)]
pub struct TruncSeries {
    nvars: usize,
    cap: u32,
    coeffs: BTreeMap<Exponent, BigInt>,
}

impl TruncSeries {
    pub fn zero(nvars: usize, cap: u32) -> Self {
        TruncSeries { nvars, cap, coeffs: BTreeMap::new() }
    }

    pub fn one(nvars: usize, cap: u32) -> Self {
        Self::monomial(nvars, cap, vec![0; nvars], BigInt::one())
    }

    /// `coeff * y^exps`, or zero if the degree exceeds `cap`.
    pub fn monomial(nvars: usize, cap: u32, exps: Vec<u32>, coeff: BigInt) -> Self {
        assert_eq!(exps.len(), nvars, "exponent length must match the number of variables");
        let mut s = Self::zero(nvars, cap);
        s.add_term(Exponent(exps), coeff);
        s
    }

    /// The variable `y_i`, 1-based.
    pub fn var(nvars: usize, cap: u32, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        Self::monomial(nvars, cap, e, BigInt::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, BigInt)>>(nvars: usize, cap: u32, terms: I) -> Self {
        let mut s = Self::zero(nvars, cap);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            s.add_term(Exponent(e), c);
        }
        s
    }

    /// Adds `coeff * y^exp`, silently dropping terms above the cap.
    pub fn add_term(&mut self, exp: Exponent, coeff: BigInt) {
        if exp.degree() > self.cap || coeff.is_zero() {
            return;
        }
        match self.coeffs.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Nonzero terms in dump order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest total degree carrying a nonzero coefficient.
    pub fn max_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(Exponent::degree).max()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.get(&Exponent(vec![0; self.nvars])).cloned().unwrap_or_default()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Result<BigInt> {
        if exps.len() != self.nvars {
            return Err(Error::InvalidIndex(format!(
                "exponent vector of length {} for {} variables",
                exps.len(),
                self.nvars
            )));
        }
        let exp = Exponent(exps.to_vec());
        if exp.degree() > self.cap {
            return Err(Error::DegreeAboveCap { degree: exp.degree(), cap: self.cap });
        }
        Ok(self.coeffs.get(&exp).cloned().unwrap_or_default())
    }

    pub fn truncate(&self, cap: u32) -> Self {
        let coeffs =
            self.coeffs.iter().filter(|(e, _)| e.degree() <= cap).map(|(e, c)| (e.clone(), c.clone())).collect();
        TruncSeries { nvars: self.nvars, cap, coeffs }
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "series in different numbers of variables");
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero(self.nvars, self.cap);
        for (e, c) in &self.coeffs {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    /// Inverse up to the cap; requires constant term 1.
    pub fn inverse(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::NonUnitConstant);
        }
        // s = 1 + t, 1/s = 1 - t + t^2 - ... evaluated by Horner; t has no
        // constant term so cap + 1 steps reach every degree.
        let one = Self::one(self.nvars, self.cap);
        let t = self - &one;
        let mut acc = one.clone();
        for _ in 0..self.cap {
            acc = &one - &(&t * &acc);
        }
        Ok(acc)
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// [`TruncSeries::inverse`].
    pub fn int_pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = Self::one(self.nvars, self.cap);
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &sq;
            }
            exp >>= 1;
            if exp > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// `[[e_1, ..., e_n, coeff], ...]` in dump order. Coefficients outside the
    /// `i64` range are emitted as strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|(e, c)| {
                    let mut row: Vec<Value> = e.0.iter().map(|&x| Value::from(x)).collect();
                    row.push(crate::big_to_json(c));
                    Value::Array(row)
                })
                .collect(),
        )
    }
}

/// Equal when all coefficients up to the smaller cap agree.
impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        let cap = self.cap.min(other.cap);
        let a = self.coeffs.iter().filter(|(e, _)| e.degree() <= cap);
        let b = other.coeffs.iter().filter(|(e, _)| e.degree() <= cap);
        a.eq(b)
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;

    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        self.check_compatible(rhs);
        let mut out = self.truncate(self.cap.min(rhs.cap));
        for (e, c) in &rhs.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;

    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        self.check_compatible(rhs);
        let mut out = self.truncate(self.cap.min(rhs.cap));
        for (e, c) in &rhs.coeffs {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;

    fn neg(self) -> TruncSeries {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;

    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        self.check_compatible(rhs);
        let cap = self.cap.min(rhs.cap);
        let mut out = TruncSeries::zero(self.nvars, cap);
        for (ea, ca) in &self.coeffs {
            let da = ea.degree();
            if da > cap {
                continue;
            }
            for (eb, cb) in &rhs.coeffs {
                if da + eb.degree() > cap {
                    continue;
                }
                let e: Vec<u32> = ea.0.iter().zip(&eb.0).map(|(x, y)| x + y).collect();
                out.add_term(Exponent(e), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for TruncSeries {
    /// `1 + 2*y1 + y1^2`; the zero series prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.coeffs.iter().enumerate() {
            let vars: Vec<String> =
                e.0.iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { format!("y{}", i + 1) } else { format!("y{}^{}", i + 1, x) })
                    .collect();
            let mag = c.abs();
            let body = match (vars.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => vars.join("*"),
                (false, false) => format!("{}*{}", mag, vars.join("*")),
            };
            match (idx, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly1(cap: u32, coeffs: &[i64]) -> TruncSeries {
        TruncSeries::from_terms(1, cap, coeffs.iter().enumerate().map(|(i, &c)| (vec![i as u32], BigInt::from(c))))
    }

    #[test]
    fn basic_products() {
        let y1 = poly1(5, &[1, 1]);
        assert_eq!(&y1 * &y1, poly1(5, &[1, 2, 1]));
        assert_eq!((&y1 * &y1).to_string(), "1 + 2*y1 + y1^2");
        let q = poly1(5, &[1, 1, 1]);
        assert_eq!(&q * &poly1(5, &[1, -1]), poly1(5, &[1, 0, 0, -1]));
        assert_eq!(&poly1(2, &[1, 1, 1]) * &poly1(2, &[1, -1]), poly1(2, &[1]));
        let one = TruncSeries::one(1, 5);
        assert_eq!(&one * &q, q);
    }

    #[test]
    fn inverses() {
        let inv = poly1(6, &[1, -1]).inverse().unwrap();
        assert_eq!(inv, poly1(6, &[1; 7]));
        let inv = poly1(6, &[1, 1]).inverse().unwrap();
        assert_eq!(inv, poly1(6, &[1, -1, 1, -1, 1, -1, 1]));
        assert_eq!(TruncSeries::one(2, 3).inverse().unwrap(), TruncSeries::one(2, 3));
        assert_eq!(poly1(3, &[2, 1]).inverse(), Err(Error::NonUnitConstant));
    }

    #[test]
    fn powers() {
        let s = poly1(4, &[1, 1]);
        assert_eq!(s.int_pow(-2).unwrap(), poly1(4, &[1, -2, 3, -4, 5]));
        assert_eq!(s.int_pow(0).unwrap(), TruncSeries::one(1, 4));
        assert_eq!(s.int_pow(1).unwrap(), s);
        assert_eq!(s.int_pow(3).unwrap(), poly1(4, &[1, 3, 3, 1]));
    }

    #[test]
    fn coefficient_lookup() {
        let s = TruncSeries::from_terms(2, 3, [(vec![1, 1], BigInt::from(5))]);
        assert_eq!(s.coefficient(&[1, 1]).unwrap(), BigInt::from(5));
        assert_eq!(s.coefficient(&[0, 1]).unwrap(), BigInt::zero());
        assert_eq!(s.coefficient(&[2, 2]), Err(Error::DegreeAboveCap { degree: 4, cap: 3 }));
    }

    #[test]
    fn display_and_json() {
        let s = TruncSeries::from_terms(
            2,
            4,
            [(vec![0, 0], BigInt::from(1)), (vec![0, 1], BigInt::from(-3)), (vec![2, 0], BigInt::from(1))],
        );
        assert_eq!(s.to_string(), "1 - 3*y2 + y1^2");
        assert_eq!(s.to_json().to_string(), "[[0,0,1],[0,1,-3],[2,0,1]]");
        assert_eq!(TruncSeries::zero(1, 2).to_string(), "0");
    }

    fn arb_series() -> impl Strategy<Value = TruncSeries> {
        proptest::collection::vec(((0u32..4, 0u32..4), -5i64..=5), 0..8).prop_map(|terms| {
            TruncSeries::from_terms(2, 4, terms.into_iter().map(|((a, b), c)| (vec![a, b], BigInt::from(c))))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            let prod = &a * &b;
            prop_assert!(prod.max_degree().unwrap_or(0) <= 4);
        }

        #[test]
        fn inverse_is_two_sided(a in arb_series()) {
            let mut s = a.clone();
            let c0 = s.constant_term();
            s.add_term(Exponent(vec![0, 0]), BigInt::one() - c0);
            let inv = s.inverse().unwrap();
            let one = TruncSeries::one(2, 4);
            prop_assert_eq!(&s * &inv, one.clone());
            prop_assert_eq!(&inv * &s, one);
        }
    }
}
