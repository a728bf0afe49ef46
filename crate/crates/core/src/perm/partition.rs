use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PermError;

/// An integer partition, kept in nonincreasing order. Rearrangements of the
/// same parts are the same partition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// |λ|
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// ℓ(λ)
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// m_i(λ), the number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// λ ∪ (1^k)
    pub fn pad_ones(&self, k: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend(std::iter::repeat_n(1, k));
        Partition::new(parts)
    }

    /// λ with its parts equal to 1 removed.
    pub fn without_ones(&self) -> Partition {
        Partition::new(self.parts.iter().copied().filter(|&p| p > 1).collect())
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = PermError;

    /// `3,2,1`, optionally parenthesized; the empty string is ∅.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if t.is_empty() {
            return Ok(Partition::empty());
        }
        let parts: Option<Vec<usize>> = t
            .split(',')
            .map(|x| x.trim().parse::<usize>().ok().filter(|&v| v > 0))
            .collect();
        parts
            .map(Partition::new)
            .ok_or_else(|| PermError::Parse(s.to_string()))
    }
}
