//! Cartan data for the affine types `X^(r)_N`.
//!
//! Every admissible label is mapped to the finite-dimensional data the rest
//! of the crate consumes: the Cartan matrix `A` of the invariant subalgebra
//! `g0`, the Cartan matrix `A'` of `g` together with the diagram automorphism
//! `sigma`, the symmetrizers `d`, `d'`, the twist factors `eps`, `eps'` and
//! `kappa0`.
//!
//! Node numbering follows the affine diagrams with the 0-th node dropped; the
//! nodes of `g0` embed into those of `g` by the identity map. Cartan matrices
//! use the convention `A_ab = 2(alpha_a, alpha_b) / (alpha_a, alpha_a)`, which
//! makes `(d_a A_ab)` symmetric with `d_a` proportional to the squared length
//! of `alpha_a`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn from_char(c: char) -> Option<Family> {
        Some(match c {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// An affine type `X^(r)_N`: family letter, rank `N` of `g` and twist order `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraLabel {
    pub family: Family,
    pub rank: usize,
    pub twist: usize,
}

impl AlgebraLabel {
    /// Builds a label, rejecting combinations outside the admissible list.
    pub fn new(family: Family, rank: usize, twist: usize) -> Result<Self> {
        let label = AlgebraLabel { family, rank, twist };
        label.check_admissible()?;
        Ok(label)
    }

    fn check_admissible(&self) -> Result<()> {
        use Family::*;
        let n = self.rank;
        let constraint = match (self.family, self.twist) {
            (A, 1) if n >= 1 => return Ok(()),
            (A, 1) => "A_n^(1) requires n >= 1",
            (B, 1) if n >= 3 => return Ok(()),
            (B, 1) => "B_n^(1) requires n >= 3",
            (C, 1) if n >= 2 => return Ok(()),
            (C, 1) => "C_n^(1) requires n >= 2",
            (D, 1) if n >= 4 => return Ok(()),
            (D, 1) => "D_n^(1) requires n >= 4",
            (E, 1) if (6..=8).contains(&n) => return Ok(()),
            (E, 1) => "E_n^(1) requires n in {6, 7, 8}",
            (F, 1) if n == 4 => return Ok(()),
            (F, 1) => "F^(1) exists only for N = 4",
            (G, 1) if n == 2 => return Ok(()),
            (G, 1) => "G^(1) exists only for N = 2",
            (A, 2) if n >= 2 => return Ok(()),
            (A, 2) => "A_N^(2) requires N >= 2 (A_2n^(2) with n >= 1, A_2n-1^(2) with n >= 2)",
            (D, 2) if n >= 3 => return Ok(()),
            (D, 2) => "D_n+1^(2) requires n >= 2",
            (E, 2) if n == 6 => return Ok(()),
            (E, 2) => "E^(2) exists only for N = 6",
            (D, 3) if n == 4 => return Ok(()),
            (D, 3) => "D^(3) exists only for N = 4",
            (_, 2) | (_, 3) => "no affine algebra of this family has this twist order",
            _ => "twist order must be 1, 2 or 3",
        };
        Err(Error::Inadmissible { label: self.to_string(), constraint: constraint.to_string() })
    }

    pub fn is_a2n_twisted(&self) -> bool {
        self.family == Family::A && self.twist == 2 && self.rank.is_multiple_of(2)
    }
}

impl fmt::Display for AlgebraLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}^{}", self.family.letter(), self.rank, self.twist)
    }
}

impl FromStr for AlgebraLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_label(s)
    }
}

/// Parses `<letter><N>^<r>`, e.g. `A2^2` or `D4^3`.
pub fn parse_label(text: &str) -> Result<AlgebraLabel> {
    let bad = || Error::Parse(format!("malformed algebra label {text:?}, expected <letter><N>^<r>"));
    let text = text.trim();
    let mut chars = text.chars();
    let family = chars.next().and_then(Family::from_char).ok_or_else(bad)?;
    let rest = chars.as_str();
    let (rank, twist) = rest.split_once('^').ok_or_else(bad)?;
    if rank.is_empty() || !rank.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if twist.len() != 1 || !twist.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let rank: usize = rank.parse().map_err(|_| bad())?;
    let twist: usize = twist.parse().map_err(|_| bad())?;
    AlgebraLabel::new(family, rank, twist)
}

/// All constants of one affine type. Immutable once loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraData {
    pub label: AlgebraLabel,
    /// Rank of `g0`.
    pub n: usize,
    /// `n`, except `n + 1` for `A_2n^(2)`.
    pub ntilde: usize,
    /// Cartan matrix of `g0`, `n x n`.
    pub cartan_g0: Vec<Vec<i64>>,
    /// Full Cartan matrix of `g`, `N x N`.
    pub cartan_g: Vec<Vec<i64>>,
    /// Diagram automorphism of `g`, 0-based.
    pub sigma: Vec<usize>,
    pub d: Vec<i64>,
    /// Length `ntilde`.
    pub dprime: Vec<i64>,
    pub eps: Vec<i64>,
    /// Length `ntilde`.
    pub epsprime: Vec<i64>,
    pub kappa0: i64,
}

/// Dynkin graph (1-based edges) and symmetrizer; the Cartan matrix is
/// `A_ab = -max(d_a, d_b) / d_a` on edges.
struct Diagram {
    size: usize,
    edges: Vec<(usize, usize)>,
    d: Vec<i64>,
}

impl Diagram {
    fn chain(size: usize, d: Vec<i64>) -> Self {
        let edges = (1..size).map(|i| (i, i + 1)).collect();
        Diagram { size, edges, d }
    }

    fn type_a(n: usize) -> Self {
        Diagram::chain(n, vec![1; n])
    }

    /// Long roots first, the short root at node `n`.
    fn type_b(n: usize) -> Self {
        let mut d = vec![2; n];
        d[n - 1] = 1;
        Diagram::chain(n, d)
    }

    /// Short roots first, the long root at node `n`.
    fn type_c(n: usize) -> Self {
        let mut d = vec![1; n];
        d[n - 1] = 2;
        Diagram::chain(n, d)
    }

    /// Chain `1..n-1` with node `n` attached to `n-2`.
    fn type_d(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 2, n));
        Diagram { size: n, edges, d: vec![1; n] }
    }

    fn type_e(n: usize) -> Self {
        let edges = match n {
            6 => vec![(1, 2), (2, 3), (3, 5), (5, 6), (3, 4)],
            7 => vec![(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)],
            8 => vec![(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)],
            _ => unreachable!("E_n only for n = 6, 7, 8"),
        };
        Diagram { size: n, edges, d: vec![1; n] }
    }

    fn cartan(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.size;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j) in &self.edges {
            let (di, dj) = (self.d[i - 1], self.d[j - 1]);
            let top = di.max(dj);
            if top % di != 0 || top % dj != 0 {
                return Err(Error::Invariant(format!("bond {i}-{j} has incompatible lengths")));
            }
            a[i - 1][j - 1] = -top / di;
            a[j - 1][i - 1] = -top / dj;
        }
        Ok(a)
    }
}

/// Loads and checks the data for an admissible label.
pub fn load_algebra(label: AlgebraLabel) -> Result<AlgebraData> {
    use Family::*;
    label.check_admissible()?;
    let big_n = label.rank;
    // (g0 diagram, g diagram, sigma as 1-based images)
    let (g0, g, sigma): (Diagram, Option<Diagram>, Vec<usize>) = match (label.family, label.twist) {
        (A, 1) => (Diagram::type_a(big_n), None, vec![]),
        (B, 1) => (Diagram::type_b(big_n), None, vec![]),
        (C, 1) => (Diagram::type_c(big_n), None, vec![]),
        (D, 1) => (Diagram::type_d(big_n), None, vec![]),
        (E, 1) => (Diagram::type_e(big_n), None, vec![]),
        (F, 1) => (Diagram::chain(4, vec![2, 2, 1, 1]), None, vec![]),
        (G, 1) => (Diagram::chain(2, vec![3, 1]), None, vec![]),
        (A, 2) if big_n.is_multiple_of(2) => {
            let n = big_n / 2;
            let sigma = (1..=big_n).map(|i| big_n + 1 - i).collect();
            (Diagram::type_b(n), Some(Diagram::type_a(big_n)), sigma)
        }
        (A, 2) => {
            let n = big_n.div_ceil(2);
            let sigma = (1..=big_n).map(|i| big_n + 1 - i).collect();
            (Diagram::type_c(n), Some(Diagram::type_a(big_n)), sigma)
        }
        (D, 2) => {
            let n = big_n - 1;
            let mut sigma: Vec<usize> = (1..=big_n).collect();
            sigma.swap(n - 1, n);
            (Diagram::type_b(n), Some(Diagram::type_d(big_n)), sigma)
        }
        (E, 2) => (Diagram::chain(4, vec![1, 1, 2, 2]), Some(Diagram::type_e(6)), vec![6, 5, 3, 4, 2, 1]),
        (D, 3) => (Diagram::chain(2, vec![1, 3]), Some(Diagram::type_d(4)), vec![3, 2, 4, 1]),
        _ => unreachable!("admissibility checked above"),
    };

    let n = g0.size;
    let cartan_g0 = g0.cartan()?;
    let d = g0.d.clone();
    let (cartan_g, sigma, dprime_full) = match g {
        None => ((cartan_g0.clone()), (0..n).collect::<Vec<_>>(), d.clone()),
        Some(g) => {
            let a = g.cartan()?;
            (a, sigma.iter().map(|s| s - 1).collect(), vec![1; g.size])
        }
    };
    let r = label.twist;
    let big_n = cartan_g.len();
    let epsprime_full: Vec<i64> = (0..big_n).map(|i| if sigma[i] == i { r as i64 } else { 1 }).collect();
    let eps: Vec<i64> = (0..n).map(|i| if cartan_g[i][sigma[i]] < 0 { 2 } else { 1 }).collect();
    let kappa0 = if label.is_a2n_twisted() { 2 } else { 1 };
    let ntilde = if label.is_a2n_twisted() { n + 1 } else { n };

    let alg = AlgebraData {
        label,
        n,
        ntilde,
        cartan_g0,
        cartan_g,
        sigma,
        d,
        dprime: dprime_full[..ntilde].to_vec(),
        eps,
        epsprime: epsprime_full[..ntilde].to_vec(),
        kappa0,
    };
    alg.check_invariants()?;
    Ok(alg)
}

/// Convenience: parse then load.
pub fn algebra(text: &str) -> Result<AlgebraData> {
    load_algebra(parse_label(text)?)
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0, |g, &x| g.gcd(&x))
}

impl AlgebraData {
    pub fn twist(&self) -> usize {
        self.label.twist
    }

    /// `A_ab` of `g0`, 1-based.
    pub fn a(&self, a: usize, b: usize) -> i64 {
        self.cartan_g0[a - 1][b - 1]
    }

    /// `A'_ab` of `g` through the embedding `iota(a) = a`; valid up to `ntilde`.
    pub fn a_prime(&self, a: usize, b: usize) -> i64 {
        self.cartan_g[a - 1][b - 1]
    }

    pub fn d(&self, a: usize) -> i64 {
        self.d[a - 1]
    }

    pub fn dprime(&self, a: usize) -> i64 {
        self.dprime[a - 1]
    }

    pub fn eps(&self, a: usize) -> i64 {
        self.eps[a - 1]
    }

    pub fn epsprime(&self, a: usize) -> i64 {
        self.epsprime[a - 1]
    }

    /// `eps'_ab = max(eps'_a, eps'_b)`, used by the order estimates and the
    /// genericity test on string centers.
    pub fn epsprime_pair(&self, a: usize, b: usize) -> i64 {
        self.epsprime(a).max(self.epsprime(b))
    }

    /// For `b = n + 1` in `A_2n^(2)`, the color whose data it mirrors.
    pub fn mirror_source(&self, b: usize) -> usize {
        if b == self.n + 1 {
            self.n
        } else {
            b
        }
    }

    /// Restricted `A'`: rows `1..=n`, columns `1..=ntilde`.
    pub fn cartan_g_prime(&self) -> Vec<Vec<i64>> {
        (1..=self.n).map(|a| (1..=self.ntilde).map(|b| self.a_prime(a, b)).collect()).collect()
    }

    /// `sigma^s(b)` on 1-based nodes.
    fn sigma_pow(&self, b: usize, s: usize) -> usize {
        (0..s).fold(b - 1, |x, _| self.sigma[x]) + 1
    }

    /// Sum over `s = 1..=r` of `A'_{a sigma^s(b)}`.
    pub fn folded_a_prime(&self, a: usize, b: usize) -> i64 {
        (1..=self.twist()).map(|s| self.a_prime(a, self.sigma_pow(b, s))).sum()
    }

    fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(format!("{}: {msg}", self.label)));
        let n = self.n;
        let big_n = self.cartan_g.len();
        let r = self.twist();

        if self.d.iter().any(|&x| x <= 0) || gcd_all(&self.d) != 1 {
            return fail("d must be coprime positive integers".into());
        }
        let dfull: Vec<i64> = if r == 1 { self.d.clone() } else { vec![1; big_n] };
        if gcd_all(&dfull) != 1 {
            return fail("d' must be coprime".into());
        }
        for a in 1..=n {
            for b in 1..=n {
                if self.d(a) * self.a(a, b) != self.d(b) * self.a(b, a) {
                    return fail(format!("d_a A_ab not symmetric at ({a},{b})"));
                }
            }
        }
        for i in 0..big_n {
            for j in 0..big_n {
                if dfull[i] * self.cartan_g[i][j] != dfull[j] * self.cartan_g[j][i] {
                    return fail(format!("d'_a A'_ab not symmetric at ({},{})", i + 1, j + 1));
                }
            }
        }

        // sigma: automorphism of order dividing r, one orbit representative per g0 node
        let mut seen = vec![false; big_n];
        for &s in &self.sigma {
            if s >= big_n || seen[s] {
                return fail("sigma is not a permutation".into());
            }
            seen[s] = true;
        }
        for i in 0..big_n {
            if self.sigma_pow(i + 1, r) != i + 1 {
                return fail("sigma^r is not the identity".into());
            }
            for j in 0..big_n {
                if self.cartan_g[self.sigma[i]][self.sigma[j]] != self.cartan_g[i][j] {
                    return fail("sigma is not a diagram automorphism".into());
                }
            }
            let reps = (1..=r)
                .map(|s| self.sigma_pow(i + 1, s))
                .filter(|&x| x <= n)
                .collect::<std::collections::BTreeSet<_>>();
            if reps.len() != 1 {
                return fail(format!("orbit of node {} does not meet 1..=n exactly once", i + 1));
            }
        }

        for a in 1..=n {
            if self.kappa0 * self.epsprime(a) * self.dprime(a) != self.eps(a) * self.d(a) {
                return fail(format!("kappa0 eps'_a d'_a != eps_a d_a at a={a}"));
            }
            for b in 1..=n {
                let lhs = self.folded_a_prime(a, b);
                // sum = (eps'_a / eps_a) A_ab, cleared of denominators
                if self.eps(a) * lhs != self.epsprime(a) * self.a(a, b) {
                    return fail(format!("folded A' does not match A at ({a},{b})"));
                }
                if (self.a(a, b) < 0) != (self.a_prime(a, b) < 0) {
                    return fail(format!("embedding does not preserve adjacency at ({a},{b})"));
                }
            }
        }

        if r == 1 {
            if self.dprime != self.d || self.epsprime.iter().any(|&e| e != 1) || self.eps.iter().any(|&e| e != 1) {
                return fail("untwisted data must have d' = d, eps' = eps = 1".into());
            }
        } else if self.dprime.iter().any(|&x| x != 1) {
            return fail("twisted data must have d' = 1".into());
        }
        if (self.kappa0 == 2) != self.label.is_a2n_twisted() {
            return fail("kappa0 = 2 exactly for A_2n^(2)".into());
        }
        for a in 1..=n {
            let expect = if self.a_prime(a, self.sigma[a - 1] + 1) < 0 { 2 } else { 1 };
            if self.eps(a) != expect {
                return fail(format!("eps_{a} inconsistent with A'"));
            }
        }
        if self.ntilde == n + 1 && (self.dprime(n + 1) != self.dprime(n) || self.epsprime(n + 1) != self.epsprime(n)) {
            return fail("mirror color n+1 must copy d' and eps' of color n".into());
        }
        Ok(())
    }

    /// The Q-system kernel `G_{am,bk}`.
    pub fn g_kernel(&self, a: usize, m: i64, b: usize, k: i64) -> i64 {
        let delta = |x: i64, y: i64| i64::from(x == y);
        let (da, db) = (self.d(a), self.d(b));
        if self.twist() > 1 {
            if m != k {
                return 0;
            }
            let num = self.a(b, a);
            debug_assert_eq!(num % self.eps(b), 0);
            -num / self.eps(b)
        } else if db == 2 * da {
            -self.a(b, a) * (delta(m, 2 * k - 1) + 2 * delta(m, 2 * k) + delta(m, 2 * k + 1))
        } else if db == 3 * da {
            -self.a(b, a)
                * (delta(m, 3 * k - 2)
                    + 2 * delta(m, 3 * k - 1)
                    + 3 * delta(m, 3 * k)
                    + 2 * delta(m, 3 * k + 1)
                    + delta(m, 3 * k + 2))
        } else {
            -self.a(a, b) * delta(da * m, db * k)
        }
    }

    /// Largest `d_a`.
    pub fn max_d(&self) -> i64 {
        self.d.iter().copied().max().unwrap_or(1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "ntilde": self.ntilde,
            "cartan_g0": self.cartan_g0,
            "cartan_g_prime": self.cartan_g_prime(),
            "d": self.d,
            "dprime": self.dprime,
            "eps": self.eps,
            "epsprime": self.epsprime,
            "kappa0": self.kappa0,
        })
    }
}

/// One representative label per family, used by the self test and
/// property tests.
pub fn representative_labels() -> Vec<AlgebraLabel> {
    ["A3^1", "B3^1", "C3^1", "D4^1", "E6^1", "F4^1", "G2^1", "A4^2", "A5^2", "D4^2", "E6^2", "D4^3"]
        .iter()
        .map(|s| parse_label(s).expect("static label"))
        .collect()
}

/// A broader sweep over ranks, for table checks.
pub fn table_labels() -> Vec<AlgebraLabel> {
    let mut out = Vec::new();
    let mut push = |f, n, r| out.push(AlgebraLabel::new(f, n, r).expect("admissible"));
    use Family::*;
    for n in 1..=7 {
        push(A, n, 1);
    }
    for n in 3..=7 {
        push(B, n, 1);
    }
    for n in 2..=7 {
        push(C, n, 1);
    }
    for n in 4..=7 {
        push(D, n, 1);
    }
    for n in 6..=8 {
        push(E, n, 1);
    }
    push(F, 4, 1);
    push(G, 2, 1);
    for n in 2..=9 {
        push(A, n, 2);
    }
    for n in 3..=7 {
        push(D, n, 2);
    }
    push(E, 6, 2);
    push(D, 4, 3);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let l = parse_label("A1^1").unwrap();
        assert_eq!((l.family, l.rank, l.twist), (Family::A, 1, 1));
        let l = parse_label("D4^3").unwrap();
        assert_eq!((l.family, l.rank, l.twist), (Family::D, 4, 3));
        assert_eq!(l.to_string(), "D4^3");
    }

    #[test]
    fn parse_rejects() {
        match parse_label("B2^1") {
            Err(Error::Inadmissible { constraint, .. }) => assert!(constraint.contains("n >= 3")),
            other => panic!("{other:?}"),
        }
        for bad in ["", "A", "A1", "A^1", "a1^1", "H2^1", "A1^", "A1^12", "A1^x", "A-1^1"] {
            assert!(matches!(parse_label(bad), Err(Error::Parse(_))), "{bad}");
        }
        for bad in ["A0^1", "E5^1", "E6^3", "G2^2", "F4^2", "D3^1", "A1^2", "D2^2", "B3^2", "A3^4"] {
            assert!(matches!(parse_label(bad), Err(Error::Inadmissible { .. })), "{bad}");
        }
    }

    #[test]
    fn a1_untwisted() {
        let alg = algebra("A1^1").unwrap();
        assert_eq!(alg.n, 1);
        assert_eq!(alg.cartan_g0, vec![vec![2]]);
        assert_eq!((alg.d.clone(), alg.dprime.clone()), (vec![1], vec![1]));
        assert_eq!((alg.eps.clone(), alg.epsprime.clone()), (vec![1], vec![1]));
        assert_eq!(alg.kappa0, 1);
    }

    #[test]
    fn a2_twisted() {
        let alg = algebra("A2^2").unwrap();
        assert_eq!((alg.n, alg.ntilde), (1, 2));
        assert_eq!(alg.cartan_g0, vec![vec![2]]);
        assert_eq!(alg.d, vec![1]);
        assert_eq!(alg.dprime, vec![1, 1]);
        assert_eq!(alg.eps, vec![2]);
        assert_eq!(alg.epsprime, vec![1, 1]);
        assert_eq!(alg.kappa0, 2);
        assert_eq!(alg.cartan_g_prime(), vec![vec![2, -1]]);
    }

    #[test]
    fn d4_triality() {
        let alg = algebra("D4^3").unwrap();
        assert_eq!(alg.n, 2);
        assert_eq!(alg.d, vec![1, 3]);
        assert_eq!(alg.dprime, vec![1, 1]);
        assert_eq!(alg.epsprime, vec![1, 3]);
        assert_eq!(alg.kappa0, 1);
        // G2 with the long root at node 2
        assert_eq!(alg.cartan_g0, vec![vec![2, -3], vec![-1, 2]]);
    }

    #[test]
    fn printed_d_labels() {
        assert_eq!(algebra("B4^1").unwrap().d, vec![2, 2, 2, 1]);
        assert_eq!(algebra("C3^1").unwrap().d, vec![1, 1, 2]);
        assert_eq!(algebra("G2^1").unwrap().d, vec![3, 1]);
        assert_eq!(algebra("F4^1").unwrap().d, vec![2, 2, 1, 1]);
        assert_eq!(algebra("E6^2").unwrap().d, vec![1, 1, 2, 2]);
        assert_eq!(algebra("A6^2").unwrap().d, vec![2, 2, 1]);
        assert_eq!(algebra("A5^2").unwrap().d, vec![1, 1, 2]);
        assert_eq!(algebra("D5^2").unwrap().d, vec![2, 2, 2, 1]);
        assert_eq!(algebra("G2^1").unwrap().cartan_g0, vec![vec![2, -1], vec![-3, 2]]);
    }

    #[test]
    fn all_tables_load() {
        for label in table_labels() {
            let alg = load_algebra(label).unwrap();
            assert_eq!(alg.cartan_g0.len(), alg.n);
        }
    }

    #[test]
    fn kernel_examples() {
        let a1 = algebra("A1^1").unwrap();
        assert_eq!(a1.g_kernel(1, 2, 1, 2), -2);
        let a2 = algebra("A2^2").unwrap();
        assert_eq!(a2.g_kernel(1, 3, 1, 3), -1);
        assert_eq!(a2.g_kernel(1, 3, 1, 2), 0);
        let g2 = algebra("G2^1").unwrap();
        // d_b / d_a = 3 with a = 2, b = 1
        assert_eq!(g2.g_kernel(2, 3, 1, 1), 3);
        assert_eq!(g2.g_kernel(2, 2, 1, 1), 2);
        assert_eq!(g2.g_kernel(2, 5, 1, 1), 1);
        assert_eq!(g2.g_kernel(2, 6, 1, 1), 0);
        // a long, b short: -A_12 delta_{3m, k}
        assert_eq!(g2.g_kernel(1, 1, 2, 3), 1);
        assert_eq!(g2.g_kernel(1, 1, 2, 2), 0);
    }

    #[test]
    fn kernel_simply_laced_is_minus_cartan() {
        for text in ["A3^1", "D4^1", "E6^1"] {
            let alg = algebra(text).unwrap();
            for a in 1..=alg.n {
                for b in 1..=alg.n {
                    for m in 1..=6 {
                        for k in 1..=6 {
                            let expect = if m == k { -alg.a(a, b) } else { 0 };
                            assert_eq!(alg.g_kernel(a, m, b, k), expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dump_keys() {
        let v = algebra("A2^2").unwrap().to_json();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["cartan_g0", "cartan_g_prime", "d", "dprime", "eps", "epsprime", "kappa0", "n", "ntilde"]);
    }
}
