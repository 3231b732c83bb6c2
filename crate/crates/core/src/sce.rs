//! Ground truth for the string center equation: every solution on the torus
//! is enumerated exactly, as rational angles, through a Smith normal form of
//! the exponent matrix. Off-diagonal solutions are then recounted
//! independently by Moebius inversion over coincidence patterns.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::AlgebraData;
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Label};
use crate::pattern::SparseArray;
use crate::strings::{abs_det, factorial_product, r_number, sce_matrix, vacancies, vacancy_p_hat};

/// `U M V = S` with `U`, `V` unimodular and `S` diagonal, positive, each
/// entry dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows()).map(|i| self.s.get(i, i).clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    if !m.is_square() {
        return Err(Error::InvalidIndex("Smith normal form needs a square matrix".into()));
    }
    if m.determinant().is_zero() {
        return Err(Error::Singular);
    }
    let n = m.rows();
    let mut a = m.clone();
    a.labels.clear();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);

    for t in 0..n {
        loop {
            let (pi, pj) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !a.get(i, j).is_zero())
                .min_by(|&(i1, j1), &(i2, j2)| a.get(i1, j1).abs().cmp(&a.get(i2, j2).abs()))
                .ok_or(Error::Singular)?;
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..n {
                let q = a.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    a.add_row_multiple(i, t, &-&q);
                    u.add_row_multiple(i, t, &-&q);
                }
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = a.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    a.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-&q);
                }
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..n).find(|&i| (t + 1..n).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    Ok(SmithForm { u, s: a, v })
}

/// One solution of the string center equation. Coordinate `i` is
/// `exp(2 pi sqrt(-1) angles[i])` for the string `labels[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusSolution {
    pub labels: Vec<Label>,
    pub angles: Vec<BigRational>,
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Right-hand side angles: `(-1)^{P-hat + N + 1}` becomes `0` or `1/2`.
pub fn sce_rhs(
    alg: &AlgebraData,
    nu: &SparseArray,
    pattern: &SparseArray,
    labels: &[Label],
) -> Result<Vec<BigRational>> {
    let mut by_class = BTreeMap::new();
    for l in labels {
        if let std::collections::btree_map::Entry::Vacant(slot) = by_class.entry(l.class()) {
            let ph = vacancy_p_hat(alg, nu, pattern, l.a, l.m as i64)?;
            let e = ph + pattern.get(l.a, l.m) as i64 + 1;
            slot.insert(if e.rem_euclid(2) == 0 { BigRational::zero() } else { half() });
        }
    }
    Ok(labels.iter().map(|l| by_class[&l.class()].clone()).collect())
}

/// Largest fiber the enumerator will materialize.
pub const MAX_SOLUTIONS: u64 = 5_000_000;

/// All `|det A|` solutions, in a fixed order.
pub fn enumerate_solutions(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray) -> Result<Vec<TorusSolution>> {
    let a = sce_matrix(alg, nu, pattern)?;
    let rhs = sce_rhs(alg, nu, pattern, &a.labels)?;
    let angles = solve_torus(&a, &rhs)?;
    Ok(angles.into_iter().map(|angles| TorusSolution { labels: a.labels.clone(), angles }).collect())
}

/// Solves `M theta = t (mod 1)` for every `theta` in `[0,1)^n`.
pub fn solve_torus(m: &IntMatrix, rhs: &[BigRational]) -> Result<Vec<Vec<BigRational>>> {
    let snf = smith_normal_form(m)?;
    let n = m.rows();
    let diag = snf.diagonal();
    let total = diag.iter().product::<BigInt>();
    let total = total
        .to_u64()
        .filter(|&t| t <= MAX_SOLUTIONS)
        .ok_or_else(|| Error::Unsupported(format!("fiber of size {total} is too large to enumerate")))?;
    // S phi = U t (mod 1), theta = V phi
    let ut: Vec<BigRational> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from(snf.u.get(i, j).clone()) * &rhs[j]).sum()).collect();
    let radices: Vec<u64> = diag.iter().map(|d| d.to_u64().expect("bounded by total")).collect();
    let sols: Vec<Vec<BigRational>> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let phi: Vec<BigRational> = (0..n)
                .rev()
                .map(|i| {
                    let digit = idx % radices[i];
                    idx /= radices[i];
                    (i, digit)
                })
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .map(|(i, digit)| {
                    (&ut[i] + BigRational::from(BigInt::from(digit))) / BigRational::from(diag[i].clone())
                })
                .collect();
            (0..n).map(|i| frac(&(0..n).map(|j| BigRational::from(snf.v.get(i, j).clone()) * &phi[j]).sum())).collect()
        })
        .collect();
    Ok(sols)
}

/// Substitutes `theta` back into `M theta = t (mod 1)`.
pub fn satisfies(m: &IntMatrix, rhs: &[BigRational], theta: &[BigRational]) -> bool {
    (0..m.rows()).all(|i| {
        let lhs: BigRational = (0..m.cols()).map(|j| BigRational::from(m.get(i, j).clone()) * &theta[j]).sum();
        (lhs - &rhs[i]).is_integer()
    })
}

/// Off-diagonal: centers within each `(a, m)` class are pairwise distinct.
pub fn classify_offdiagonal(sol: &TorusSolution) -> bool {
    let mut seen = BTreeSet::new();
    sol.labels.iter().zip(&sol.angles).all(|(l, th)| seen.insert((l.class(), th.clone())))
}

/// `<m> = {m-1, m-3, ..., -m+1}`.
fn bracket(m: i64) -> impl Iterator<Item = i64> {
    (0..m).map(move |t| m - 1 - 2 * t)
}

/// Genericity of a string center solution: centers avoid 1 when a quantum
/// space length sits in `<m>`, and colliding powers are excluded whenever
/// the corresponding orders coincide.
pub fn classify_generic(alg: &AlgebraData, sol: &TorusSolution, nu: &SparseArray) -> Result<bool> {
    let n = alg.n;
    for (l, th) in sol.labels.iter().zip(&sol.angles) {
        let m = l.m as i64;
        let active = nu.iter().any(|((b, k), c)| b == l.a && c > 0 && bracket(m).any(|x| x == k as i64));
        if active && th.is_zero() {
            return Ok(false);
        }
    }
    // strings of colors 1..=ntilde, color n+1 mirroring color n with z -> -z
    let mut extended: Vec<(usize, usize, usize, BigRational)> = Vec::new();
    for (l, th) in sol.labels.iter().zip(&sol.angles) {
        let al = l.alpha.unwrap_or(1);
        extended.push((l.a, l.m, al, th.clone()));
        if alg.ntilde == n + 1 && l.a == n {
            extended.push((n + 1, l.m, al, frac(&(th + half()))));
        }
    }
    for (l, th) in sol.labels.iter().zip(&sol.angles) {
        let (a, m, al) = (l.a, l.m as i64, l.alpha.unwrap_or(1));
        for (b, k, be, tb) in &extended {
            if (*b, *k, *be) == (a, l.m, al) {
                continue;
            }
            let (da, db) = (alg.dprime(a), alg.dprime(*b));
            let target = da * alg.a_prime(a, *b);
            let k = *k as i64;
            let coincide = bracket(m).any(|i| bracket(k).any(|j| i * da - j * db == target));
            if !coincide {
                continue;
            }
            let eab = alg.epsprime_pair(a, *b);
            let (ea, eb) = (alg.epsprime(a), alg.epsprime(*b));
            if eab % ea != 0 || eab % eb != 0 {
                return Err(Error::Invariant("eps'_ab / eps' is not an integer".into()));
            }
            let lhs = frac(&(th * BigRational::from(BigInt::from(eab / ea))));
            let rhs = frac(&(tb * BigRational::from(BigInt::from(eab / eb))));
            if lhs == rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A set partition of the strings of each `(a, m)` class, as restricted
/// growth strings indexed by `alpha - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockPartition {
    pub classes: Vec<((usize, usize), Vec<usize>)>,
}

/// Restricted growth strings of length `k`, one per set partition.
pub fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, k: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + usize::from(!cur.is_empty()) {
            if cur.is_empty() && b > 0 {
                break;
            }
            cur.push(b);
            let next_max = max.max(b);
            rec(cur, k, next_max, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), k, 0, &mut out);
    out
}

impl BlockPartition {
    /// Every string in its own block.
    pub fn discrete(pattern: &SparseArray) -> Self {
        BlockPartition { classes: pattern.iter().map(|(cls, c)| (cls, (0..c as usize).collect())).collect() }
    }

    /// All partitions, product over classes.
    pub fn all(pattern: &SparseArray) -> Vec<Self> {
        let mut out = vec![BlockPartition { classes: Vec::new() }];
        for (cls, c) in pattern.iter() {
            let parts = set_partitions(c as usize);
            out = out
                .into_iter()
                .flat_map(|bp| {
                    parts.iter().map(move |p| {
                        let mut next = bp.clone();
                        next.classes.push((cls, p.clone()));
                        next
                    })
                })
                .collect();
        }
        out
    }

    /// The exact coincidence pattern of a solution.
    pub fn of_solution(sol: &TorusSolution) -> Self {
        let mut classes: Vec<((usize, usize), Vec<usize>)> = Vec::new();
        let mut reps: Vec<Vec<BigRational>> = Vec::new();
        for (l, th) in sol.labels.iter().zip(&sol.angles) {
            if classes.last().map(|c| c.0) != Some(l.class()) {
                classes.push((l.class(), Vec::new()));
                reps.push(Vec::new());
            }
            let r = reps.last_mut().unwrap();
            let id = match r.iter().position(|x| x == th) {
                Some(i) => i,
                None => {
                    r.push(th.clone());
                    r.len() - 1
                }
            };
            classes.last_mut().unwrap().1.push(id);
        }
        BlockPartition { classes }
    }

    /// `self <= other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &BlockPartition) -> bool {
        self.classes.len() == other.classes.len()
            && self.classes.iter().zip(&other.classes).all(|((c1, p), (c2, s))| {
                c1 == c2
                    && p.len() == s.len()
                    && (0..p.len()).all(|i| (0..p.len()).all(|j| p[i] != p[j] || s[i] == s[j]))
            })
    }

    /// Moebius function `mu(self, other)` of the partition lattice, assuming
    /// `self <= other`: a product of `(-1)^{k-1} (k-1)!` over the blocks of
    /// `other`, `k` counting the blocks of `self` merged into each.
    pub fn mobius_to(&self, other: &BlockPartition) -> BigInt {
        let mut mu = BigInt::one();
        for ((_, p), (_, s)) in self.classes.iter().zip(&other.classes) {
            let mut merged: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for (pi, si) in p.iter().zip(s) {
                merged.entry(*si).or_default().insert(*pi);
            }
            for blocks in merged.values() {
                let k = blocks.len() as i64;
                let f: BigInt = (1..k).map(BigInt::from).product();
                mu *= if (k - 1) % 2 == 0 { f } else { -f };
            }
        }
        mu
    }

    /// Global blocks in label order: each is the list of string indices it holds.
    fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (_, p) in &self.classes {
            let nb = p.iter().max().map_or(0, |x| x + 1);
            for b in 0..nb {
                out.push((0..p.len()).filter(|&i| p[i] == b).map(|i| i + offset).collect());
            }
            offset += p.len();
        }
        out
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .classes
            .iter()
            .map(|((a, m), p)| {
                let s: Vec<String> = p.iter().map(ToString::to_string).collect();
                format!("{a},{m}:[{}]", s.join(","))
            })
            .collect();
        parts.join(";")
    }
}

/// The system obtained by identifying the centers inside each block: columns
/// are summed per block, one row kept per block.
pub fn collapsed_matrix(a: &IntMatrix, partition: &BlockPartition) -> Result<IntMatrix> {
    let blocks = partition.blocks();
    let size = blocks.len();
    let mut out = IntMatrix::zeros(size, size);
    for (bi, rows) in blocks.iter().enumerate() {
        let mut first: Option<Vec<BigInt>> = None;
        for &r in rows {
            let row: Vec<BigInt> = blocks.iter().map(|cols| cols.iter().map(|&c| a.get(r, c).clone()).sum()).collect();
            match &first {
                None => first = Some(row),
                Some(f) if *f != row => {
                    return Err(Error::Invariant(format!(
                        "rows of block {bi} differ after collapsing {}",
                        partition.describe()
                    )))
                }
                _ => {}
            }
        }
        for (bj, v) in first.unwrap_or_default().into_iter().enumerate() {
            out.set(bi, bj, v);
        }
    }
    Ok(out)
}

/// Number of solutions whose coincidence pattern is exactly `pi`:
/// `sum_{sigma >= pi} mu(pi, sigma) |det B(sigma)|`.
///
/// A singular collapsed matrix contributes 0: its solution set embeds in the
/// finite fiber of the full system, and a singular monomial map has either
/// empty or infinite fibers.
pub fn count_exact_coincidence(
    alg: &AlgebraData,
    nu: &SparseArray,
    pattern: &SparseArray,
    pi: &BlockPartition,
) -> Result<BigInt> {
    let a = sce_matrix(alg, nu, pattern)?;
    if a.determinant().is_zero() {
        return Err(Error::Singular);
    }
    let mut total = BigInt::zero();
    for sigma in BlockPartition::all(pattern) {
        if !pi.refines(&sigma) {
            continue;
        }
        let b = collapsed_matrix(&a, &sigma)?;
        total += pi.mobius_to(&sigma) * abs_det(&b);
    }
    Ok(total)
}

/// Off-diagonal count by inclusion-exclusion over the partition lattice.
pub fn count_via_moebius(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray) -> Result<BigInt> {
    count_exact_coincidence(alg, nu, pattern, &BlockPartition::discrete(pattern))
}

/// Off-diagonal count by direct enumeration.
pub fn count_offdiagonal(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray) -> Result<BigInt> {
    let sols = enumerate_solutions(alg, nu, pattern)?;
    Ok(BigInt::from(sols.iter().filter(|s| classify_offdiagonal(s)).count()))
}

/// Everything the `sce` report needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceReport {
    pub det: BigInt,
    pub total: u64,
    pub off_diagonal: u64,
    pub diagonal: u64,
    pub generic: u64,
    pub generic_off_diagonal: u64,
    pub moebius: Option<BigInt>,
    pub r: BigInt,
    pub factorial_product: BigInt,
    pub vacancies_nonnegative: bool,
}

impl SceReport {
    /// Off-diagonal count equals `R * prod N!`; only asserted when every
    /// vacancy number is nonnegative.
    pub fn counting_holds(&self) -> bool {
        BigInt::from(self.off_diagonal) == &self.r * &self.factorial_product
    }

    pub fn moebius_agrees(&self) -> bool {
        self.moebius.as_ref().is_none_or(|m| *m == BigInt::from(self.off_diagonal))
    }
}

/// Enumerates, classifies and optionally recounts by Moebius inversion.
pub fn sce_report(alg: &AlgebraData, nu: &SparseArray, pattern: &SparseArray, with_moebius: bool) -> Result<SceReport> {
    let a = sce_matrix(alg, nu, pattern)?;
    let det = a.determinant();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let sols = enumerate_solutions(alg, nu, pattern)?;
    let mut off = 0;
    let mut generic = 0;
    let mut generic_off = 0;
    for s in &sols {
        let o = classify_offdiagonal(s);
        let g = classify_generic(alg, s, nu)?;
        off += u64::from(o);
        generic += u64::from(g);
        generic_off += u64::from(o && g);
    }
    let total = sols.len() as u64;
    Ok(SceReport {
        det,
        total,
        off_diagonal: off,
        diagonal: total - off,
        generic,
        generic_off_diagonal: generic_off,
        moebius: if with_moebius { Some(count_via_moebius(alg, nu, pattern)?) } else { None },
        r: r_number(alg, nu, pattern)?,
        factorial_product: factorial_product(pattern),
        vacancies_nonnegative: vacancies(alg, nu, pattern)?.iter().all(|(_, p)| *p >= 0),
    })
}
