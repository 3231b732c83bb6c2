//! Integer invariants of a quantum space datum `nu` and a string pattern `N`:
//! vacancy numbers, the string center matrix, the counting number `R(nu, N)`
//! and the order estimates attached to each string member.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::AlgebraData;
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Label};
use crate::pattern::SparseArray;

fn check_color(alg: &AlgebraData, a: usize) -> Result<()> {
    if a == 0 || a > alg.n {
        return Err(Error::InvalidIndex(format!("color {a} outside 1..={}", alg.n)));
    }
    Ok(())
}

fn check_length(m: i64) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidIndex(format!("length {m} must be positive")));
    }
    Ok(())
}

fn check_inputs(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray) -> Result<()> {
    nu.check_colors(alg.n)?;
    pattern.check_colors(alg.n)
}

/// `num / den`, failing loudly if the quotient is not an integer.
fn exact_div(num: i64, den: i64, what: &str) -> Result<i64> {
    let (q, r) = num.div_rem(&den);
    if r != 0 {
        return Err(Error::Invariant(format!("{what}: {num}/{den} is not an integer")));
    }
    Ok(q)
}

/// `N_k^(b)` for `b` up to `ntilde`, reading color `n + 1` as color `n`.
fn mirrored(alg: &AlgebraData, pattern: &SparseArray, b: usize, k: usize) -> u64 {
    pattern.get(alg.mirror_source(b), k)
}

/// `gamma_m^(a) = sum_k min(m, k) nu_k^(a)`.
pub fn gamma(nu: &SparseArray, a: usize, m: i64) -> i64 {
    nu.iter().filter(|((b, _), _)| *b == a).map(|((_, k), c)| m.min(k as i64) * c as i64).sum()
}

/// The coefficient `(A_ab / (eps_a d'_b)) min(d'_a m, d'_b k)` entering `P_m^(a)`.
fn p_coefficient(alg: &AlgebraData, a: usize, m: i64, b: usize, k: i64) -> Result<i64> {
    let num = alg.a(a, b) * (alg.dprime(a) * m).min(alg.dprime(b) * k);
    exact_div(num, alg.eps(a) * alg.dprime(b), "vacancy coefficient")
}

/// The coefficient `(A_ba / (eps_b d'_a)) min(d'_a m, d'_b k)` of the string
/// center matrix and of `F`.
fn sce_coefficient(alg: &AlgebraData, a: usize, m: i64, b: usize, k: i64) -> Result<i64> {
    let num = alg.a(b, a) * (alg.dprime(a) * m).min(alg.dprime(b) * k);
    exact_div(num, alg.eps(b) * alg.dprime(a), "string center coefficient")
}

/// Vacancy number `P_m^(a)`.
pub fn vacancy_p(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray, a: usize, m: i64) -> Result<i64> {
    check_color(alg, a)?;
    check_length(m)?;
    check_inputs(alg, nu, pattern)?;
    let mut p = gamma(nu, a, m);
    for ((b, k), c) in pattern.iter() {
        p -= p_coefficient(alg, a, m, b, k as i64)? * c as i64;
    }
    Ok(p)
}

/// `P-hat_m^(a)`, built from `A'` instead of `A`; it only enters the signs of
/// the string center equation.
pub fn vacancy_p_hat(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray, a: usize, m: i64) -> Result<i64> {
    check_color(alg, a)?;
    check_length(m)?;
    check_inputs(alg, nu, pattern)?;
    let mut p = gamma(nu, a, m);
    for ((b, k), c) in pattern.iter() {
        let num = alg.a_prime(a, b) * (alg.dprime(a) * m).min(alg.dprime(b) * k as i64);
        p -= exact_div(num, alg.dprime(b), "hat vacancy coefficient")? * c as i64;
    }
    Ok(p)
}

/// Vacancy numbers over the support of `N`, in canonical order.
pub fn vacancies(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray) -> Result<Vec<((usize, usize), i64)>> {
    pattern.support().into_iter().map(|(a, m)| Ok(((a, m), vacancy_p(alg, nu, pattern, a, m as i64)?))).collect()
}

pub fn vacancies_hat(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray) -> Result<Vec<((usize, usize), i64)>> {
    pattern.support().into_iter().map(|(a, m)| Ok(((a, m), vacancy_p_hat(alg, nu, pattern, a, m as i64)?))).collect()
}

/// String labels `(a, m, alpha)` in lexicographic order.
pub fn string_labels(pattern: &SparseArray) -> Vec<Label> {
    pattern.iter().flat_map(|((a, m), c)| (1..=c as usize).map(move |al| Label::string(a, m, al))).collect()
}

/// The exponent matrix `A_{am alpha, bk beta}` of the string center equation.
pub fn sce_matrix(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray) -> Result<IntMatrix> {
    if pattern.is_zero() {
        return Err(Error::EmptyPattern);
    }
    check_inputs(alg, nu, pattern)?;
    let labels = string_labels(pattern);
    let vac: std::collections::BTreeMap<_, _> = vacancies(alg, nu, pattern)?.into_iter().collect();
    let size = labels.len();
    let mut out = IntMatrix::zeros(size, size);
    for (i, row) in labels.iter().enumerate() {
        for (j, col) in labels.iter().enumerate() {
            let mut v = sce_coefficient(alg, row.a, row.m as i64, col.a, col.m as i64)?;
            if row.class() == col.class() {
                v -= 1;
                if row.alpha == col.alpha {
                    v += vac[&row.class()] + pattern.get(row.a, row.m) as i64;
                }
            }
            out.set(i, j, v.into());
        }
    }
    Ok(out.with_labels(labels))
}

/// `F_{am,bk}` over `H'(N)`.
pub fn f_matrix(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray) -> Result<IntMatrix> {
    check_inputs(alg, nu, pattern)?;
    let support = pattern.support();
    let vac = vacancies(alg, nu, pattern)?;
    let size = support.len();
    let mut out = IntMatrix::zeros(size, size);
    for (i, &(a, m)) in support.iter().enumerate() {
        for (j, &(b, k)) in support.iter().enumerate() {
            let mut v = sce_coefficient(alg, a, m as i64, b, k as i64)? * pattern.get(b, k) as i64;
            if i == j {
                v += vac[i].1;
            }
            out.set(i, j, v.into());
        }
    }
    let labels = support.into_iter().map(|(a, m)| Label::pair(a, m)).collect();
    Ok(out.with_labels(labels))
}

/// `binom(k, j)` extended polynomially in `k`: the falling factorial
/// `k (k-1) ... (k-j+1) / j!` for `j >= 0`, and 0 for `j < 0`.
pub fn binomial(k: i64, j: i64) -> BigInt {
    if j < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..j {
        num *= BigInt::from(k - t);
        den *= BigInt::from(t + 1);
    }
    num / den
}

/// `R(nu, N) = det F * prod (1/N) binom(P + N - 1, N - 1)`, with `R(nu, 0) = 1`.
pub fn r_number(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray) -> Result<BigInt> {
    if pattern.is_zero() {
        check_inputs(alg, nu, pattern)?;
        return Ok(BigInt::one());
    }
    let f = f_matrix(alg, nu, pattern)?;
    let mut num = f.determinant();
    let mut den = BigInt::one();
    for ((a, m), p) in vacancies(alg, nu, pattern)? {
        let count = pattern.get(a, m) as i64;
        num *= binomial(p + count - 1, count - 1);
        den *= BigInt::from(count);
    }
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::Invariant(format!("R({nu}, {pattern}) = {num}/{den} is not an integer")));
    }
    Ok(q)
}

/// `Delta_j^(a)`: nonzero only for untwisted types, at a node `a` joined to a
/// node `a'` with `d_a > d_a' = 1`.
///
/// For `d_a = 3` the middle string length `3j` carries weight 2: a short
/// `3j`-string against a long member at offset `j` leaves a defect of 2 in
/// the order balance, the neighbours `3j +- 1` a defect of 1.
pub fn delta_term(alg: &AlgebraData, pattern: &SparseArray, a: usize, j: i64) -> Result<i64> {
    check_color(alg, a)?;
    check_length(j)?;
    if alg.twist() != 1 {
        return Ok(0);
    }
    let partners: Vec<usize> =
        (1..=alg.n).filter(|&b| alg.d(a) > alg.d(b) && alg.d(b) == 1 && alg.a(a, b) != 0).collect();
    let partner = match partners.as_slice() {
        [] => return Ok(0),
        [b] => *b,
        _ => return Err(Error::Invariant(format!("color {a} has several short neighbours"))),
    };
    let n = |k: i64| pattern.at(partner, k);
    Ok(match alg.d(a) {
        2 => -n(2 * j),
        3 => -(n(3 * j - 1) + 2 * n(3 * j) + n(3 * j + 1)),
        d => return Err(Error::Invariant(format!("unexpected d_a = {d}"))),
    })
}

/// Necessary condition for a generic string solution of pattern `N`.
pub fn genericity_condition(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray) -> Result<bool> {
    check_inputs(alg, nu, pattern)?;
    for (a, m) in pattern.support() {
        let m = m as i64;
        for i in 2..=m {
            let mut total = 0;
            for k in 1..=(i - 1).min(m + 1 - i) {
                let l = m + 1 - 2 * k;
                let p = vacancy_p(alg, nu, pattern, a, l)?;
                total += alg.dprime(a) * (p + pattern.at(a, l)) + delta_term(alg, pattern, a, l)?;
            }
            if total <= 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The four order estimates attached to member `i` of an `m`-string of color `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orders {
    pub xi_plus: i64,
    pub xi_minus: i64,
    pub eta_plus: i64,
    pub eta_minus: i64,
}

pub fn xi_eta(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray, a: usize, m: i64, i: i64) -> Result<Orders> {
    check_color(alg, a)?;
    check_length(m)?;
    check_inputs(alg, nu, pattern)?;
    if i < 1 || i > m {
        return Err(Error::InvalidIndex(format!("member {i} outside 1..={m}")));
    }
    let x = m + 1 - 2 * i;
    let scale = alg.kappa0 * alg.epsprime(a) * alg.dprime(a);
    let mut xi_plus = 0;
    let mut xi_minus = 0;
    for ((b, k), c) in nu.iter() {
        if b != a {
            continue;
        }
        let (k, c) = (k as i64, c as i64);
        xi_plus += c * (x + k).min(0);
        xi_minus += c * x.min(k);
    }

    let mut eta_plus = 0;
    let mut eta_minus = 0;
    for b in 1..=alg.ntilde {
        let src = alg.mirror_source(b);
        let eab = alg.epsprime_pair(a, b);
        let (da, db) = (alg.dprime(a), alg.dprime(b));
        let (apab, apba) = (alg.a_prime(a, b), alg.a_prime(b, a));
        for ((c, k), _) in pattern.iter() {
            if c != src {
                continue;
            }
            let count = mirrored(alg, pattern, b, k) as i64;
            let k = k as i64;
            for j in 1..=k {
                let y = k + 1 - 2 * j;
                eta_plus += count * eab * (da * (x + apab)).min(db * y);
                eta_minus += count * eab * (da * x).min(db * (y + apba));
            }
        }
    }
    Ok(Orders {
        xi_plus: scale * xi_plus,
        xi_minus: scale * xi_minus,
        eta_plus: alg.kappa0 * eta_plus,
        eta_minus: alg.kappa0 * eta_minus,
    })
}

/// Both sides of the order balance identity for member `i` of an `m`-string:
/// `(xi+ + eta-) - (xi- + eta+)` against its closed form in `P`, `N`, `Delta`.
pub fn order_balance_sides(
    alg: &AlgebraData,
    nu: &SparseArray,
    pattern: &SparseArray,
    a: usize,
    m: i64,
    i: i64,
) -> Result<(i64, i64)> {
    let o = xi_eta(alg, nu, pattern, a, m, i)?;
    let lhs = (o.xi_plus + o.eta_minus) - (o.xi_minus + o.eta_plus);
    let x = m + 1 - 2 * i;
    let rhs = if x == 0 {
        0
    } else {
        let l = x.abs();
        let p = vacancy_p(alg, nu, pattern, a, l)?;
        let body = alg.kappa0 * alg.epsprime(a) * alg.dprime(a) * (p + pattern.at(a, l))
            + alg.kappa0 * delta_term(alg, pattern, a, l)?;
        if x > 0 {
            -body
        } else {
            body
        }
    };
    Ok((lhs, rhs))
}

/// True when every vacancy number on the support is nonnegative, the regime
/// in which `R(nu, N)` counts off-diagonal string center solutions.
pub fn all_vacancies_nonnegative(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray) -> Result<bool> {
    Ok(vacancies(alg, nu, pattern)?.iter().all(|(_, p)| *p >= 0))
}

/// `prod N_m^(a)!` over the support.
pub fn factorial_product(pattern: &SparseArray) -> BigInt {
    pattern.iter().map(|(_, c)| (1..=c).map(BigInt::from).product::<BigInt>()).product()
}

pub(crate) fn abs_det(m: &IntMatrix) -> BigInt {
    m.determinant().abs()
}
