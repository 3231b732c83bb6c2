//! The generating series `R^nu(y)`, the canonical solution of the Q-system
//! built from it, and the checks that tie the two together.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::algebra::AlgebraData;
use crate::error::{Error, Result};
use crate::pattern::{PatternEnumerator, SparseArray};
use crate::series::{Exponent, TruncSeries};
use crate::strings::r_number;

/// `sum_{weight(N) <= cap} R(nu, N) prod_a y_a^{M_a(N)}`.
pub fn r_series(alg: &AlgebraData, nu: &SparseArray, cap: u32) -> Result<TruncSeries> {
    nu.check_colors(alg.n)?;
    let patterns = PatternEnumerator::new(alg.n, cap as usize).patterns();
    let terms: Vec<(Vec<u32>, BigInt)> = patterns
        .par_iter()
        .map(|pat| {
            let r = r_number(alg, nu, pat)?;
            let exps = (1..=alg.n).map(|a| pat.color_weight(a) as u32).collect();
            Ok((exps, r))
        })
        .collect::<Result<_>>()?;
    let mut out = TruncSeries::zero(alg.n, cap);
    for (e, r) in terms {
        out.add_term(Exponent(e), r);
    }
    Ok(out)
}

/// `Q_m^(a)` of the canonical solution, i.e. `R^nu` for `nu = e_(a,m)`;
/// `Q_0^(a) = 1`.
pub fn canonical_q(alg: &AlgebraData, a: usize, m: usize, cap: u32) -> Result<TruncSeries> {
    if a == 0 || a > alg.n {
        return Err(Error::InvalidIndex(format!("color {a} outside 1..={}", alg.n)));
    }
    if m == 0 {
        return Ok(TruncSeries::one(alg.n, cap));
    }
    r_series(alg, &SparseArray::unit(a, m), cap)
}

/// Memoized canonical solution at a fixed cap.
pub struct CanonicalSolution<'a> {
    alg: &'a AlgebraData,
    cap: u32,
    cache: HashMap<(usize, usize), TruncSeries>,
}

impl<'a> CanonicalSolution<'a> {
    pub fn new(alg: &'a AlgebraData, cap: u32) -> Self {
        CanonicalSolution { alg, cap, cache: HashMap::new() }
    }

    pub fn get(&mut self, a: usize, m: usize) -> Result<&TruncSeries> {
        if !self.cache.contains_key(&(a, m)) {
            let q = canonical_q(self.alg, a, m, self.cap)?;
            self.cache.insert((a, m), q);
        }
        Ok(&self.cache[&(a, m)])
    }
}

/// Upper bound on `k` for which `G_{am,bk}` can be nonzero.
fn kernel_range(alg: &AlgebraData, m: usize) -> usize {
    alg.max_d() as usize * (m + 1)
}

/// `(Q_m)^2 - Q_{m+1} Q_{m-1} - y_a^m (Q_m)^2 prod_(b,k) (Q_k^(b))^{G_{am,bk}}`.
pub fn q_system_residual(alg: &AlgebraData, a: usize, m: usize, cap: u32) -> Result<TruncSeries> {
    let mut sol = CanonicalSolution::new(alg, cap);
    q_system_residual_with(&mut sol, a, m)
}

pub fn q_system_residual_with(sol: &mut CanonicalSolution<'_>, a: usize, m: usize) -> Result<TruncSeries> {
    let alg = sol.alg;
    let cap = sol.cap;
    if m == 0 {
        return Err(Error::InvalidIndex("the Q-system relation starts at m = 1".into()));
    }
    let range = kernel_range(alg, m);
    for b in 1..=alg.n {
        for k in range + 1..=2 * range + 3 {
            if alg.g_kernel(a, m as i64, b, k as i64) != 0 {
                return Err(Error::Invariant(format!("G_{{{a}{m},{b}{k}}} is nonzero beyond k = {range}")));
            }
        }
    }
    let qm = sol.get(a, m)?.clone();
    let qnext = sol.get(a, m + 1)?.clone();
    let qprev = sol.get(a, m - 1)?.clone();
    let mut exps = vec![0u32; alg.n];
    exps[a - 1] = m as u32;
    let mut rhs = &TruncSeries::monomial(alg.n, cap, exps, BigInt::from(1)) * &(&qm * &qm);
    for b in 1..=alg.n {
        for k in 1..=range {
            let g = alg.g_kernel(a, m as i64, b, k as i64);
            if g != 0 {
                let factor = sol.get(b, k)?.int_pow(g)?;
                rhs = &rhs * &factor;
            }
        }
    }
    Ok(&(&(&qm * &qm) - &(&qnext * &qprev)) - &rhs)
}

/// `R^{nu1 + nu2} = R^{nu1} R^{nu2}` up to `cap`.
pub fn verify_multiplicativity(alg: &AlgebraData, nu1: &SparseArray, nu2: &SparseArray, cap: u32) -> Result<bool> {
    let joint = r_series(alg, &nu1.sum(nu2), cap)?;
    let prod = &r_series(alg, nu1, cap)? * &r_series(alg, nu2, cap)?;
    Ok(joint == prod)
}

/// Outcome of the stabilization test for `Q_m^(a)` as `m` grows.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    /// Smallest `m0` with `Q_m = Q_{m_max}` for all `m0 <= m <= m_max`,
    /// provided `m0 < m_max`.
    pub stable_from: Option<usize>,
    pub limit: TruncSeries,
}

impl Convergence {
    pub fn converged(&self) -> bool {
        self.stable_from.is_some()
    }
}

/// Witnesses the formal limit of `Q_m^(a)` by stabilization of all
/// coefficients of degree `<= cap` before `m_max`.
pub fn verify_convergence(alg: &AlgebraData, a: usize, cap: u32, m_max: usize) -> Result<Convergence> {
    if m_max == 0 {
        return Err(Error::InvalidIndex("m_max must be positive".into()));
    }
    let qs: Vec<TruncSeries> = (1..=m_max).map(|m| canonical_q(alg, a, m, cap)).collect::<Result<_>>()?;
    let limit = qs[m_max - 1].clone();
    let mut m0 = m_max;
    while m0 > 1 && qs[m0 - 2] == limit {
        m0 -= 1;
    }
    Ok(Convergence { stable_from: (m0 < m_max).then_some(m0), limit })
}

/// Number of nonzero residual coefficients, for reporting.
pub fn residual_norm(res: &TruncSeries) -> usize {
    res.nonzero_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::algebra;

    fn poly1(cap: u32, coeffs: &[i64]) -> TruncSeries {
        TruncSeries::from_terms(1, cap, coeffs.iter().enumerate().map(|(i, &c)| (vec![i as u32], BigInt::from(c))))
    }

    #[test]
    fn binomial_series() {
        let alg = algebra("A1^1").unwrap();
        let s = r_series(&alg, &"1,1:4".parse().unwrap(), 4).unwrap();
        assert_eq!(s, poly1(4, &[1, 4, 6, 4, 1]));
    }

    #[test]
    fn spin_one_series_terminates() {
        let alg = algebra("A1^1").unwrap();
        let s = r_series(&alg, &"1,2:1".parse().unwrap(), 5).unwrap();
        assert_eq!(s, poly1(5, &[1, 1, 1]));
        assert_eq!(s.max_degree(), Some(2));
    }

    #[test]
    fn zero_datum() {
        for text in ["A1^1", "C2^1", "A2^2"] {
            let alg = algebra(text).unwrap();
            let s = r_series(&alg, &SparseArray::new(), 4).unwrap();
            assert_eq!(s, TruncSeries::one(alg.n, 4));
        }
    }

    #[test]
    fn canonical_q_a1_closed_recursion() {
        // Q_{m+1} = (Q_m^2 - y^m) / Q_{m-1}, Q_0 = 1, Q_1 = 1 + y
        let alg = algebra("A1^1").unwrap();
        let cap = 7;
        let mut prev = TruncSeries::one(1, cap);
        let mut cur = poly1(cap, &[1, 1]);
        for m in 1..=6u32 {
            assert_eq!(canonical_q(&alg, 1, m as usize, cap).unwrap(), cur);
            let mut ym = vec![0i64; m as usize + 1];
            ym[m as usize] = 1;
            let next = &(&(&cur * &cur) - &poly1(cap, &ym)) * &prev.inverse().unwrap();
            prev = cur;
            cur = next;
        }
        assert_eq!(canonical_q(&alg, 1, 0, cap).unwrap(), TruncSeries::one(1, cap));
        assert_eq!(canonical_q(&alg, 1, 3, 0).unwrap(), TruncSeries::one(1, 0));
    }

    #[test]
    fn residual_a1() {
        let alg = algebra("A1^1").unwrap();
        for m in 1..=3 {
            assert!(q_system_residual(&alg, 1, m, 4).unwrap().is_zero());
        }
        // (1+y)^2 - (1+y+y^2) = y
        let q1 = poly1(4, &[1, 1]);
        assert_eq!(&(&q1 * &q1) - &poly1(4, &[1, 1, 1]), poly1(4, &[0, 1]));
    }

    #[test]
    fn residual_a2_twisted() {
        let alg = algebra("A2^2").unwrap();
        for m in 1..=3 {
            let res = q_system_residual(&alg, 1, m, 6).unwrap();
            assert!(res.is_zero(), "m={m}: {res}");
        }
    }

    #[test]
    fn multiplicativity_a1() {
        let alg = algebra("A1^1").unwrap();
        let e = SparseArray::unit(1, 1);
        assert!(verify_multiplicativity(&alg, &e, &e, 3).unwrap());
        assert!(verify_multiplicativity(&alg, &e, &SparseArray::new(), 3).unwrap());
        assert_eq!(r_series(&alg, &e.sum(&e), 3).unwrap(), poly1(3, &[1, 2, 1]));
    }

    #[test]
    fn convergence_a1() {
        let alg = algebra("A1^1").unwrap();
        let c = verify_convergence(&alg, 1, 3, 6).unwrap();
        assert!(c.converged());
        assert_eq!(c.limit, poly1(3, &[1, 1, 1, 1]));
        assert_eq!(c.stable_from, Some(3));
        assert!(verify_convergence(&alg, 1, 0, 6).unwrap().converged());
    }
}
