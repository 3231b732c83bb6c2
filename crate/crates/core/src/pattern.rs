//! Finitely supported arrays `(a, m) -> count`, used both for quantum space
//! data `nu` and for string patterns `N`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finitely supported map from `(color a, length m)` to a positive count.
/// Zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseArray {
    entries: BTreeMap<(usize, usize), u64>,
}

impl SparseArray {
    pub fn new() -> Self {
        Self::default()
    }

    /// The unit datum `e_(a,m)`.
    pub fn unit(a: usize, m: usize) -> Self {
        let mut s = Self::new();
        s.add(a, m, 1);
        s
    }

    pub fn from_entries<I: IntoIterator<Item = ((usize, usize), u64)>>(it: I) -> Self {
        let mut s = Self::new();
        for ((a, m), c) in it {
            s.add(a, m, c);
        }
        s
    }

    pub fn get(&self, a: usize, m: usize) -> u64 {
        self.entries.get(&(a, m)).copied().unwrap_or(0)
    }

    /// Signed lookup; non-positive lengths read as zero.
    pub fn at(&self, a: usize, m: i64) -> i64 {
        if m < 1 {
            0
        } else {
            self.get(a, m as usize) as i64
        }
    }

    pub fn set(&mut self, a: usize, m: usize, count: u64) {
        assert!(a >= 1 && m >= 1, "colors and lengths start at 1");
        if count == 0 {
            self.entries.remove(&(a, m));
        } else {
            self.entries.insert((a, m), count);
        }
    }

    pub fn add(&mut self, a: usize, m: usize, count: u64) {
        let c = self.get(a, m) + count;
        self.set(a, m, c);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonzero entries in canonical `(a, m)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// `H'`: positions with a positive count.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.entries.keys().copied().collect()
    }

    /// `sum m * N_m^(a)` over everything.
    pub fn weight(&self) -> u64 {
        self.iter().map(|((_, m), c)| m as u64 * c).sum()
    }

    /// `M_a = sum_m m N_m^(a)`.
    pub fn color_weight(&self, a: usize) -> u64 {
        self.iter().filter(|((b, _), _)| *b == a).map(|((_, m), c)| m as u64 * c).sum()
    }

    /// Number of strings, `sum N_m^(a)`.
    pub fn total_count(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn max_color(&self) -> usize {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn max_length(&self) -> usize {
        self.entries.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Rejects colors beyond `n`.
    pub fn check_colors(&self, n: usize) -> Result<()> {
        match self.max_color() {
            c if c > n => Err(Error::InvalidIndex(format!("color {c} exceeds rank {n}"))),
            _ => Ok(()),
        }
    }

    pub fn sum(&self, other: &SparseArray) -> SparseArray {
        let mut out = self.clone();
        for ((a, m), c) in other.iter() {
            out.add(a, m, c);
        }
        out
    }
}

impl fmt::Display for SparseArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|((a, m), c)| format!("{a},{m}:{c}")).collect();
        f.write_str(&parts.join(";"))
    }
}

impl FromStr for SparseArray {
    type Err = Error;

    /// `a,m:count` triples separated by `;`. The empty string is zero.
    fn from_str(text: &str) -> Result<Self> {
        let mut out = SparseArray::new();
        let mut seen = std::collections::BTreeSet::new();
        for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || Error::Parse(format!("malformed entry {item:?}, expected a,m:count"));
            let (key, count) = item.split_once(':').ok_or_else(bad)?;
            let (a, m) = key.split_once(',').ok_or_else(bad)?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let m: usize = m.trim().parse().map_err(|_| bad())?;
            let count: u64 = count.trim().parse().map_err(|_| bad())?;
            if a == 0 || m == 0 {
                return Err(Error::Parse(format!("entry {item:?}: color and length start at 1")));
            }
            if !seen.insert((a, m)) {
                return Err(Error::Parse(format!("duplicate entry for {a},{m}")));
            }
            out.add(a, m, count);
        }
        Ok(out)
    }
}

/// Partitions of `w` as multiplicity maps `part -> count`, parts in
/// decreasing order of generation.
fn partitions(w: usize) -> Vec<Vec<(usize, u64)>> {
    fn rec(rest: usize, max_part: usize, cur: &mut Vec<(usize, u64)>, out: &mut Vec<Vec<(usize, u64)>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            for count in 1..=(rest / part) as u64 {
                cur.push((part, count));
                rec(rest - part * count as usize, part - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(w, w, &mut Vec::new(), &mut out);
    out
}

/// Enumerates every `N` with `n` colors and `weight(N) <= cap`.
#[derive(Debug, Clone, Copy)]
pub struct PatternEnumerator {
    pub n: usize,
    pub cap: usize,
}

impl PatternEnumerator {
    pub fn new(n: usize, cap: usize) -> Self {
        PatternEnumerator { n, cap }
    }

    pub fn patterns(&self) -> Vec<SparseArray> {
        let parts: Vec<Vec<Vec<(usize, u64)>>> = (0..=self.cap).map(partitions).collect();
        let mut out = Vec::new();
        let mut cur = SparseArray::new();
        self.rec(1, self.cap, &parts, &mut cur, &mut out);
        out
    }

    fn rec(
        &self,
        color: usize,
        budget: usize,
        parts: &[Vec<Vec<(usize, u64)>>],
        cur: &mut SparseArray,
        out: &mut Vec<SparseArray>,
    ) {
        if color > self.n {
            out.push(cur.clone());
            return;
        }
        for w in 0..=budget {
            for p in &parts[w] {
                let mut next = cur.clone();
                for &(m, c) in p {
                    next.add(color, m, c);
                }
                self.rec(color + 1, budget - w, parts, &mut next, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let s: SparseArray = "1,2:1;2,1:3".parse().unwrap();
        assert_eq!(s.get(1, 2), 1);
        assert_eq!(s.get(2, 1), 3);
        assert_eq!(s.weight(), 5);
        assert_eq!(s.color_weight(2), 3);
        assert_eq!(s.to_string(), "1,2:1;2,1:3");
        assert!("".parse::<SparseArray>().unwrap().is_zero());
        assert!("  ".parse::<SparseArray>().unwrap().is_zero());
        assert!("1,1:0".parse::<SparseArray>().unwrap().is_zero());
    }

    #[test]
    fn parse_errors() {
        for bad in ["1,1", "1:4", "0,1:1", "1,0:1", "x,1:1", "1,1:-1", "1,1:1;1,1:2"] {
            assert!(bad.parse::<SparseArray>().is_err(), "{bad}");
        }
    }

    #[test]
    fn partition_counts() {
        let p: Vec<usize> = (0..=8).map(|w| partitions(w).len()).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn enumeration_one_color() {
        // cumulative partition numbers
        let pats = PatternEnumerator::new(1, 6).patterns();
        assert_eq!(pats.len(), 1 + 1 + 2 + 3 + 5 + 7 + 11);
        let set: std::collections::BTreeSet<_> = pats.iter().cloned().collect();
        assert_eq!(set.len(), pats.len());
    }

    #[test]
    fn enumeration_two_colors() {
        // bipartitions: 1, 2, 5, 10, 20
        let pats = PatternEnumerator::new(2, 4).patterns();
        assert_eq!(pats.len(), 38);
        assert!(pats.iter().all(|p| p.weight() <= 4));
    }
}
