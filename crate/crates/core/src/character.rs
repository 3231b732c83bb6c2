//! Weight multiplicities of irreducible modules of the finite part `g0`
//! (Freudenthal), tensor products by convolution, and the normalized
//! character series compared against the counting series.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::algebra::{AlgebraData, Family};
use crate::error::{Error, Result};
use crate::pattern::SparseArray;
use crate::qsystem::r_series;
use crate::series::{Exponent, TruncSeries};

/// Weight in fundamental-weight coordinates of `g0`.
pub type Weight = Vec<i64>;

pub type WeightMultMap = BTreeMap<Weight, u64>;

fn rank(alg: &AlgebraData) -> usize {
    alg.n
}

/// `alpha_j` in fundamental coordinates is column `j` of the Cartan matrix.
fn root_to_weight(alg: &AlgebraData, coeffs: &[i64]) -> Weight {
    let n = rank(alg);
    (1..=n).map(|i| (1..=n).map(|j| alg.a(i, j) * coeffs[j - 1]).sum()).collect()
}

/// `(x, alpha)` for a weight `x` and a root with simple-root coefficients `c`.
fn pair_weight_root(alg: &AlgebraData, x: &[i64], c: &[i64]) -> i64 {
    (1..=rank(alg)).map(|j| c[j - 1] * alg.d(j) * x[j - 1]).sum()
}

/// `(beta, beta)` for `beta = sum n_j alpha_j`.
fn root_norm(alg: &AlgebraData, c: &[i64]) -> i64 {
    let n = rank(alg);
    let mut s = 0;
    for i in 1..=n {
        for j in 1..=n {
            s += c[i - 1] * c[j - 1] * alg.d(i) * alg.a(i, j);
        }
    }
    s
}

/// Positive roots of `g0` as simple-root coefficient vectors, built by
/// root strings and sorted by height.
pub fn positive_roots(alg: &AlgebraData) -> Vec<Vec<i64>> {
    let n = rank(alg);
    let mut roots: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut c = vec![0; n];
            c[i] = 1;
            c
        })
        .collect();
    while !layer.is_empty() {
        roots.extend(layer.iter().cloned());
        let mut next = BTreeSet::new();
        for beta in &layer {
            let coords = root_to_weight(alg, beta);
            for i in 0..n {
                // p = length of the string below beta in direction alpha_i
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if down[i] < 0 || !roots.contains(&down) {
                        break;
                    }
                    p += 1;
                }
                let q = p - coords[i];
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    next.insert(up);
                }
            }
        }
        layer = next.into_iter().collect();
    }
    let mut out: Vec<Vec<i64>> = roots.into_iter().collect();
    out.sort_by_key(|c| (c.iter().sum::<i64>(), c.clone()));
    out
}

fn check_dominant(alg: &AlgebraData, highest: &[i64]) -> Result<()> {
    if highest.len() != rank(alg) {
        return Err(Error::InvalidIndex(format!("weight has {} coordinates, expected {}", highest.len(), rank(alg))));
    }
    if highest.iter().any(|&x| x < 0) {
        return Err(Error::NonDominant(highest.to_vec()));
    }
    Ok(())
}

/// Multiplicities of `V(highest)` for all weights of depth `<= depth_cap`
/// below the highest weight; the whole module when `depth_cap` is `None`.
pub fn freudenthal(alg: &AlgebraData, highest: &[i64], depth_cap: Option<usize>) -> Result<WeightMultMap> {
    let by_depth = freudenthal_by_depth(alg, highest, depth_cap)?;
    let mut out = WeightMultMap::new();
    for (depth, mult) in by_depth {
        let shift = root_to_weight(alg, &depth);
        let mu: Weight = highest.iter().zip(&shift).map(|(l, s)| l - s).collect();
        out.insert(mu, mult);
    }
    Ok(out)
}

/// Same as [`freudenthal`] but keyed by the depth vector `n` with
/// `mu = highest - sum n_j alpha_j`.
pub fn freudenthal_by_depth(
    alg: &AlgebraData,
    highest: &[i64],
    depth_cap: Option<usize>,
) -> Result<BTreeMap<Vec<i64>, u64>> {
    check_dominant(alg, highest)?;
    let n = rank(alg);
    let roots = positive_roots(alg);
    let mut mult: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    mult.insert(vec![0; n], 1);
    let mut layer: Vec<Vec<i64>> = vec![vec![0; n]];
    let mut height = 0usize;
    while !layer.is_empty() && depth_cap.is_none_or(|c| height < c) {
        height += 1;
        let candidates: BTreeSet<Vec<i64>> = layer
            .iter()
            .flat_map(|d| {
                (0..n).map(move |i| {
                    let mut e = d.clone();
                    e[i] += 1;
                    e
                })
            })
            .collect();
        let mut next = Vec::new();
        for depth in candidates {
            let m = freudenthal_step(alg, highest, &roots, &mult, &depth)?;
            if m > 0 {
                mult.insert(depth.clone(), m);
                next.push(depth);
            }
        }
        layer = next;
    }
    Ok(mult)
}

fn freudenthal_step(
    alg: &AlgebraData,
    highest: &[i64],
    roots: &[Vec<i64>],
    known: &BTreeMap<Vec<i64>, u64>,
    depth: &[i64],
) -> Result<u64> {
    let n = rank(alg);
    let lam_rho: Vec<i64> = highest.iter().map(|l| l + 1).collect();
    let denom = 2 * pair_weight_root(alg, &lam_rho, depth) - root_norm(alg, depth);
    if denom == 0 {
        return Ok(0);
    }
    let mut num = BigInt::zero();
    for c in roots {
        let mut k = 1;
        loop {
            let shifted: Vec<i64> = (0..n).map(|j| depth[j] - k * c[j]).collect();
            if shifted.iter().any(|&x| x < 0) {
                break;
            }
            if let Some(&m) = known.get(&shifted) {
                let s = root_to_weight(alg, &shifted);
                let mu: Weight = highest.iter().zip(&s).map(|(l, x)| l - x).collect();
                num += BigInt::from(m) * BigInt::from(pair_weight_root(alg, &mu, c));
            }
            k += 1;
        }
    }
    let value = BigRational::new(num * 2, BigInt::from(denom));
    if !value.is_integer() || value.is_negative() {
        return Err(Error::Invariant(format!(
            "Freudenthal multiplicity {value} at depth {depth:?} is not a nonnegative integer"
        )));
    }
    value.to_integer().to_u64().ok_or_else(|| Error::Invariant("multiplicity overflow".into()))
}

/// Weyl dimension formula `prod_{alpha > 0} (lambda + rho, alpha) / (rho, alpha)`.
pub fn weyl_dimension(alg: &AlgebraData, highest: &[i64]) -> Result<BigInt> {
    check_dominant(alg, highest)?;
    let lam_rho: Vec<i64> = highest.iter().map(|l| l + 1).collect();
    let rho = vec![1; rank(alg)];
    let mut q = BigRational::one();
    for c in positive_roots(alg) {
        q *= BigRational::new(pair_weight_root(alg, &lam_rho, &c).into(), pair_weight_root(alg, &rho, &c).into());
    }
    if !q.is_integer() {
        return Err(Error::Invariant(format!("Weyl dimension {q} is not an integer")));
    }
    Ok(q.to_integer())
}

/// `s_i(mu) = mu - mu_i alpha_i`, 1-based `i`.
pub fn reflect(alg: &AlgebraData, mu: &[i64], i: usize) -> Weight {
    (1..=rank(alg)).map(|j| mu[j - 1] - mu[i - 1] * alg.a(j, i)).collect()
}

pub fn dimension(map: &WeightMultMap) -> u64 {
    map.values().sum()
}

/// Weights of a tensor product: the convolution of the factors.
pub fn tensor_weights(factors: &[WeightMultMap]) -> WeightMultMap {
    let mut acc: WeightMultMap = BTreeMap::new();
    let width = factors.iter().find_map(|f| f.keys().next().map(Vec::len)).unwrap_or(0);
    acc.insert(vec![0; width], 1);
    for f in factors {
        let mut next = WeightMultMap::new();
        for (w1, m1) in &acc {
            for (w2, m2) in f {
                let w: Weight = w1.iter().zip(w2).map(|(a, b)| a + b).collect();
                *next.entry(w).or_insert(0) += m1 * m2;
            }
        }
        acc = next;
    }
    acc
}

/// Solves `A lambda = top - mu` over the rationals.
fn depth_of(alg: &AlgebraData, top: &[i64], mu: &[i64]) -> Result<Vec<i64>> {
    let n = rank(alg);
    let mut m: Vec<Vec<BigRational>> = (1..=n)
        .map(|i| {
            let mut row: Vec<BigRational> = (1..=n).map(|j| BigRational::from_integer(alg.a(i, j).into())).collect();
            row.push(BigRational::from_integer((top[i - 1] - mu[i - 1]).into()));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= p * &f;
                }
            }
        }
    }
    m.iter()
        .map(|row| {
            let v = &row[n];
            if v.is_integer() {
                v.to_integer().to_i64().ok_or_else(|| Error::Invariant("depth overflow".into()))
            } else {
                Err(Error::Invariant(format!("weight difference is not in the root lattice: {v}")))
            }
        })
        .collect()
}

fn check_supported(alg: &AlgebraData) -> Result<()> {
    if alg.label.family == Family::A && alg.label.twist == 1 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("character comparison is implemented for A_n^(1) only, not {}", alg.label)))
    }
}

/// `Lambda(nu) = sum m nu_m^(a) Lambda_a`.
pub fn top_weight(alg: &AlgebraData, nu: &SparseArray) -> Weight {
    let mut w = vec![0; rank(alg)];
    for ((a, m), c) in nu.iter() {
        w[a - 1] += (m as u64 * c) as i64;
    }
    w
}

/// Character of `tensor_{a,m} V(m Lambda_a)^{nu_m^(a)}` written in
/// `y_a = e^{-alpha_a}` relative to the top weight, truncated at total
/// degree `cap`.
pub fn normalized_series(alg: &AlgebraData, nu: &SparseArray, cap: u32) -> Result<TruncSeries> {
    check_supported(alg)?;
    nu.check_colors(alg.n)?;
    let n = rank(alg);
    let mut factors = vec![WeightMultMap::from([(vec![0; n], 1)])];
    for ((a, m), c) in nu.iter() {
        let mut hw = vec![0; n];
        hw[a - 1] = m as i64;
        let module = freudenthal(alg, &hw, Some(cap as usize))?;
        for _ in 0..c {
            factors.push(module.clone());
        }
    }
    let top = top_weight(alg, nu);
    let mut out = TruncSeries::zero(n, cap);
    for (mu, mult) in tensor_weights(&factors) {
        let depth = depth_of(alg, &top, &mu)?;
        if depth.iter().any(|&x| x < 0) {
            return Err(Error::Invariant(format!("weight {mu:?} lies above the top weight")));
        }
        let exps: Vec<u32> = depth.iter().map(|&x| x as u32).collect();
        out.add_term(Exponent(exps), BigInt::from(mult));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub monomial: Vec<u32>,
    pub counting: BigInt,
    pub character: BigInt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessReport {
    pub family: String,
    pub nu: String,
    pub degree: u32,
    pub mismatches: Vec<Mismatch>,
}

impl CompletenessReport {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let mism: Vec<Value> = self
            .mismatches
            .iter()
            .map(|m| {
                json!({
                    "monomial": m.monomial,
                    "r_series": crate::big_to_json(&m.counting),
                    "character": crate::big_to_json(&m.character),
                })
            })
            .collect();
        json!({
            "family": self.family,
            "nu": self.nu,
            "degree": self.degree,
            "match": self.matches(),
            "mismatches": mism,
        })
    }
}

/// Coefficientwise comparison of the counting series with the normalized
/// character up to total degree `cap`.
pub fn compare_completeness(alg: &AlgebraData, nu: &SparseArray, cap: u32) -> Result<CompletenessReport> {
    let chi = normalized_series(alg, nu, cap)?;
    let r = r_series(alg, nu, cap)?;
    let keys: BTreeSet<Exponent> = chi.terms().chain(r.terms()).map(|(e, _)| e.clone()).collect();
    let mut mismatches = Vec::new();
    for e in keys {
        let lhs = r.coefficient(&e.0)?;
        let rhs = chi.coefficient(&e.0)?;
        if lhs != rhs {
            mismatches.push(Mismatch { monomial: e.0.clone(), counting: lhs, character: rhs });
        }
    }
    Ok(CompletenessReport { family: alg.label.to_string(), nu: nu.to_string(), degree: cap, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::algebra;

    fn map(entries: &[(&[i64], u64)]) -> WeightMultMap {
        entries.iter().map(|(w, m)| (w.to_vec(), *m)).collect()
    }

    #[test]
    fn sl2_spin_one() {
        let alg = algebra("A1^1").unwrap();
        assert_eq!(freudenthal(&alg, &[2], None).unwrap(), map(&[(&[2], 1), (&[0], 1), (&[-2], 1)]));
        assert_eq!(freudenthal(&alg, &[0], None).unwrap(), map(&[(&[0], 1)]));
    }

    #[test]
    fn sl3_adjoint() {
        let alg = algebra("A2^1").unwrap();
        let ch = freudenthal(&alg, &[1, 1], None).unwrap();
        assert_eq!(ch[&vec![0, 0]], 2);
        assert_eq!(dimension(&ch), 8);
        assert_eq!(weyl_dimension(&alg, &[1, 1]).unwrap(), BigInt::from(8));
    }

    #[test]
    fn root_counts() {
        for (label, count) in [
            ("A3^1", 6),
            ("B3^1", 9),
            ("C3^1", 9),
            ("D4^1", 12),
            ("G2^1", 6),
            ("F4^1", 24),
            ("E6^1", 36),
            ("E6^2", 24),
            ("D4^3", 6),
        ] {
            assert_eq!(positive_roots(&algebra(label).unwrap()).len(), count, "{label}");
        }
    }

    #[test]
    fn known_dimensions() {
        let g2 = algebra("G2^1").unwrap();
        let mut dims: Vec<BigInt> = [[1, 0], [0, 1]].iter().map(|w| weyl_dimension(&g2, w).unwrap()).collect();
        dims.sort();
        assert_eq!(dims, vec![BigInt::from(7), BigInt::from(14)]);
        let e6 = algebra("E6^1").unwrap();
        assert_eq!(weyl_dimension(&e6, &[1, 0, 0, 0, 0, 0]).unwrap(), BigInt::from(27));
    }

    #[test]
    fn dimensions_agree_with_weyl() {
        for label in ["A2^1", "A3^1", "B3^1", "C3^1", "G2^1", "D4^1", "A2^2", "D4^3"] {
            let alg = algebra(label).unwrap();
            let n = alg.n;
            let mut checked = 0;
            for code in 0..3usize.pow(n as u32) {
                let hw: Vec<i64> = (0..n).map(|i| ((code / 3usize.pow(i as u32)) % 3) as i64).collect();
                let dim = weyl_dimension(&alg, &hw).unwrap();
                if dim > BigInt::from(200) {
                    continue;
                }
                let ch = freudenthal(&alg, &hw, None).unwrap();
                assert_eq!(BigInt::from(dimension(&ch)), dim, "{label} {hw:?}");
                checked += 1;
            }
            assert!(checked > 1, "{label}");
        }
    }

    #[test]
    fn weyl_symmetric() {
        for (label, hw) in [("A3^1", vec![1, 0, 2]), ("B3^1", vec![0, 1, 0]), ("G2^1", vec![1, 1])] {
            let alg = algebra(label).unwrap();
            let ch = freudenthal(&alg, &hw, None).unwrap();
            for (mu, m) in &ch {
                for i in 1..=alg.n {
                    assert_eq!(ch.get(&reflect(&alg, mu, i)), Some(m), "{label} {mu:?} s{i}");
                }
            }
        }
    }

    #[test]
    fn non_dominant() {
        let alg = algebra("A2^1").unwrap();
        assert_eq!(freudenthal(&alg, &[1, -1], None), Err(Error::NonDominant(vec![1, -1])));
    }

    #[test]
    fn convolution() {
        let doublet = map(&[(&[1], 1), (&[-1], 1)]);
        let four = tensor_weights(&[doublet.clone(), doublet.clone(), doublet.clone(), doublet.clone()]);
        assert_eq!(four, map(&[(&[4], 1), (&[2], 4), (&[0], 6), (&[-2], 4), (&[-4], 1)]));
        assert_eq!(tensor_weights(&[doublet.clone(), map(&[(&[0], 1)])]), doublet);
        assert_eq!(tensor_weights(&[]), map(&[(&[], 1)]));
    }

    #[test]
    fn normalized_examples() {
        let alg = algebra("A1^1").unwrap();
        let s = normalized_series(&alg, &"1,1:4".parse().unwrap(), 6).unwrap();
        let expect = TruncSeries::from_terms(
            1,
            6,
            [1, 4, 6, 4, 1].iter().enumerate().map(|(i, &c)| (vec![i as u32], BigInt::from(c))),
        );
        assert_eq!(s, expect);
        let s = normalized_series(&alg, &"1,2:1".parse().unwrap(), 5).unwrap();
        let expect = TruncSeries::from_terms(1, 5, (0..3).map(|i| (vec![i], BigInt::from(1))));
        assert_eq!(s, expect);
        assert_eq!(normalized_series(&alg, &SparseArray::new(), 3).unwrap(), TruncSeries::one(1, 3));
    }

    #[test]
    fn unsupported_family() {
        let alg = algebra("C2^1").unwrap();
        assert!(matches!(normalized_series(&alg, &SparseArray::unit(1, 1), 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn completeness_small() {
        let a1 = algebra("A1^1").unwrap();
        assert!(compare_completeness(&a1, &"1,1:4".parse().unwrap(), 4).unwrap().matches());
        assert!(compare_completeness(&a1, &"1,2:1".parse().unwrap(), 5).unwrap().matches());
        let a2 = algebra("A2^1").unwrap();
        let rep = compare_completeness(&a2, &"1,1:1;2,1:1".parse().unwrap(), 4).unwrap();
        assert!(rep.matches(), "{:?}", rep.mismatches);
        assert!(compare_completeness(&a2, &SparseArray::new(), 4).unwrap().matches());
    }
}
