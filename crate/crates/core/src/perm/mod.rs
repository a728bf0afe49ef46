//! Finite permutations stored in one-line notation, together with the
//! brute-force oracles (patterns, cycles, stable occurrences, intervals)
//! that every compiled formula is checked against.

mod enumerate;
mod partition;
mod sort;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use enumerate::{enumerate_sn, enumerate_sn_capped, SymmetricGroup, DEFAULT_MAX_N};
pub use partition::Partition;
pub use sort::{bubble_sort, queue_bypass_sort, stack_sort};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("invalid one-line word {word:?}: {reason}")]
    InvalidWord { word: Vec<usize>, reason: String },
    #[error("index {index} out of range for a permutation of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("positions must be strictly increasing: {0:?}")]
    NotIncreasing(Vec<usize>),
    #[error("inflation of a size-{expected} permutation needs {expected} blocks, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("inflation block {0} is empty")]
    EmptyBlock(usize),
    #[error("size {n} exceeds the enumeration cap {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("cannot parse permutation from {0:?}")]
    Parse(String),
}

/// A point of a permutation diagram, `(i, σ(i))`, both coordinates 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub position: usize,
    pub value: usize,
}

impl Point {
    pub fn new(position: usize, value: usize) -> Self {
        Point { position, value }
    }
}

/// A permutation of `1..=n` in one-line notation. The empty permutation is
/// allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    /// Validates that `word` is a rearrangement of `1..=n`.
    pub fn from_one_line(word: Vec<usize>) -> Result<Self, PermError> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v > n {
                return Err(PermError::InvalidWord {
                    reason: format!("value {v} outside 1..={n}"),
                    word,
                });
            }
            if seen[v] {
                return Err(PermError::InvalidWord {
                    reason: format!("value {v} repeated"),
                    word,
                });
            }
            seen[v] = true;
        }
        Ok(Permutation { word })
    }

    /// Caller guarantees validity. Used by internal constructors that build
    /// words by ranking.
    pub(crate) fn from_word_unchecked(word: Vec<usize>) -> Self {
        debug_assert!(Permutation::from_one_line(word.clone()).is_ok());
        Permutation { word }
    }

    /// Rank-normalizes an arbitrary sequence of distinct keys.
    pub fn from_ranks<K: Ord>(keys: &[K]) -> Self {
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut word = vec![0; keys.len()];
        for (rank, &idx) in order.iter().enumerate() {
            word[idx] = rank + 1;
        }
        Permutation { word }
    }

    pub fn empty() -> Self {
        Permutation { word: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n).collect(),
        }
    }

    /// `inc_n = 12…n`.
    pub fn increasing(n: usize) -> Self {
        Self::identity(n)
    }

    /// `δ_n = n…21`.
    pub fn decreasing(n: usize) -> Self {
        Permutation {
            word: (1..=n).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn into_word(self) -> Vec<usize> {
        self.word
    }

    /// `σ(i)` for a 1-based position `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.word[i - 1]
    }

    pub fn point(&self, position: usize) -> Result<Point, PermError> {
        if position == 0 || position > self.len() {
            return Err(PermError::IndexOutOfRange {
                index: position,
                size: self.len(),
            });
        }
        Ok(Point::new(position, self.word[position - 1]))
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.word
            .iter()
            .enumerate()
            .map(|(i, &v)| Point::new(i + 1, v))
    }

    pub fn contains_point(&self, p: Point) -> bool {
        p.position >= 1 && p.position <= self.len() && self.word[p.position - 1] == p.value
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.word.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { word: inv }
    }

    /// Composition as bijections: `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composition needs equal sizes");
        Permutation {
            word: other.word.iter().map(|&j| self.word[j - 1]).collect(),
        }
    }

    /// `γσγ⁻¹`.
    pub fn conjugate_by(&self, gamma: &Permutation) -> Permutation {
        gamma.compose(self).compose(&gamma.inverse())
    }

    /// The pattern formed by the entries at the given strictly increasing
    /// 1-based positions.
    pub fn pattern_of(&self, positions: &[usize]) -> Result<Permutation, PermError> {
        for (idx, &p) in positions.iter().enumerate() {
            if p == 0 || p > self.len() {
                return Err(PermError::IndexOutOfRange {
                    index: p,
                    size: self.len(),
                });
            }
            if idx > 0 && positions[idx - 1] >= p {
                return Err(PermError::NotIncreasing(positions.to_vec()));
            }
        }
        let values: Vec<usize> = positions.iter().map(|&p| self.word[p - 1]).collect();
        Ok(Permutation::from_ranks(&values))
    }

    /// All occurrences of `pattern`, as increasing 1-based position tuples in
    /// lexicographic order.
    pub fn occurrences(&self, pattern: &Permutation) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(pattern.len());
        self.occurrences_rec(pattern, 1, &mut chosen, &mut |occ| {
            out.push(occ.to_vec());
            true
        });
        out
    }

    pub fn contains_pattern(&self, pattern: &Permutation) -> bool {
        let mut found = false;
        let mut chosen = Vec::with_capacity(pattern.len());
        self.occurrences_rec(pattern, 1, &mut chosen, &mut |_| {
            found = true;
            false
        });
        found
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !self.contains_pattern(pattern)
    }

    pub fn avoids_all(&self, basis: &[Permutation]) -> bool {
        basis.iter().all(|b| self.avoids(b))
    }

    // Extends `chosen` one position at a time, checking the relative order of
    // the newest entry against all earlier ones. The visitor returns false to
    // stop the search.
    fn occurrences_rec(
        &self,
        pattern: &Permutation,
        start: usize,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let depth = chosen.len();
        if depth == pattern.len() {
            return visit(chosen);
        }
        if pattern.len() > self.len() {
            return true;
        }
        let last_start = self.len() + 1 - (pattern.len() - depth);
        for p in start..=last_start {
            let v = self.word[p - 1];
            let pv = pattern.word[depth];
            let consistent = chosen.iter().enumerate().all(|(j, &q)| {
                (self.word[q - 1] < v) == (pattern.word[j] < pv)
            });
            if !consistent {
                continue;
            }
            chosen.push(p);
            let keep_going = self.occurrences_rec(pattern, p + 1, chosen, visit);
            chosen.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    /// `π[σ₁, …, σ_k]`: every point `(i, π(i))` replaced by a block holding the
    /// diagram of `σ_i`.
    pub fn inflate(&self, blocks: &[Permutation]) -> Result<Permutation, PermError> {
        if blocks.len() != self.len() {
            return Err(PermError::ArityMismatch {
                expected: self.len(),
                got: blocks.len(),
            });
        }
        if let Some(i) = blocks.iter().position(|b| b.is_empty()) {
            return Err(PermError::EmptyBlock(i + 1));
        }
        // value offset of block i = total size of blocks whose π-value is smaller
        let mut offset_by_value = vec![0; self.len() + 1];
        let inv = self.inverse();
        let mut acc = 0;
        for v in 1..=self.len() {
            offset_by_value[v] = acc;
            acc += blocks[inv.word[v - 1] - 1].len();
        }
        let mut word = Vec::with_capacity(acc);
        for (i, block) in blocks.iter().enumerate() {
            let off = offset_by_value[self.word[i]];
            word.extend(block.word.iter().map(|&v| v + off));
        }
        Ok(Permutation { word })
    }

    /// `α ⊕ β`, i.e. `12[α, β]` (either side may be empty).
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let n = self.len();
        let mut word = self.word.clone();
        word.extend(other.word.iter().map(|&v| v + n));
        Permutation { word }
    }

    /// `α ⊖ β`, i.e. `21[α, β]` (either side may be empty).
    pub fn skew_sum(&self, other: &Permutation) -> Permutation {
        let m = other.len();
        let mut word: Vec<usize> = self.word.iter().map(|&v| v + m).collect();
        word.extend_from_slice(&other.word);
        Permutation { word }
    }

    /// Disjoint cycles of `σ` as a bijection, each starting at its smallest
    /// element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len() + 1];
        let mut cycles = Vec::new();
        for start in 1..=self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.word[i - 1];
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::new(self.cycles().iter().map(Vec::len).collect())
    }

    /// Non-fixed points.
    pub fn support(&self) -> BTreeSet<usize> {
        self.points()
            .filter(|p| p.position != p.value)
            .map(|p| p.position)
            .collect()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.points()
            .filter(|p| p.position == p.value)
            .map(|p| p.position)
            .collect()
    }

    /// All `Σ ⊆ [n]` with `σ(Σ) = Σ` whose pattern is `π`, each as a sorted
    /// index list. Σ is a union of cycles, so only cycle unions of the right
    /// total size are examined.
    pub fn stable_occurrences(&self, pattern: &Permutation) -> Vec<Vec<usize>> {
        let cycles = self.cycles();
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        fn rec(
            sigma: &Permutation,
            pattern: &Permutation,
            cycles: &[Vec<usize>],
            idx: usize,
            size: usize,
            chosen: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if size == pattern.len() {
                let mut set: Vec<usize> =
                    chosen.iter().flat_map(|&c| cycles[c].iter().copied()).collect();
                set.sort_unstable();
                if sigma.pattern_of(&set).expect("valid positions") == *pattern {
                    out.push(set);
                }
                return;
            }
            for c in idx..cycles.len() {
                if size + cycles[c].len() <= pattern.len() {
                    chosen.push(c);
                    rec(sigma, pattern, cycles, c + 1, size + cycles[c].len(), chosen, out);
                    chosen.pop();
                }
            }
        }
        rec(self, pattern, &cycles, 0, 0, &mut chosen, &mut out);
        out.sort();
        out
    }

    /// True iff `positions` (a sequence of 1-based indices) is strictly
    /// increasing, closed under `σ` and has pattern `π`.
    pub fn is_stable_occurrence(&self, positions: &[usize], pattern: &Permutation) -> bool {
        if positions.len() != pattern.len() {
            return false;
        }
        let Ok(p) = self.pattern_of(positions) else {
            return false;
        };
        if p != *pattern {
            return false;
        }
        let set: BTreeSet<usize> = positions.iter().copied().collect();
        positions.iter().all(|&i| set.contains(&self.apply(i)))
    }

    /// Brute-force interval scan: simple iff no block of consecutive
    /// positions of length in `2..n` carries a range of consecutive values.
    /// Sizes up to 2 are simple by convention.
    pub fn is_simple_oracle(&self) -> bool {
        let n = self.len();
        if n <= 2 {
            return true;
        }
        for start in 0..n {
            let mut lo = usize::MAX;
            let mut hi = 0;
            for end in start..n {
                lo = lo.min(self.word[end]);
                hi = hi.max(self.word[end]);
                let len = end - start + 1;
                if len >= 2 && len < n && hi - lo + 1 == len {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_plus_decomposable_oracle(&self) -> bool {
        let mut max = 0;
        (1..self.len()).any(|cut| {
            max = max.max(self.word[cut - 1]);
            max == cut
        })
    }

    pub fn is_minus_decomposable_oracle(&self) -> bool {
        let n = self.len();
        let mut min = usize::MAX;
        (1..n).any(|cut| {
            min = min.min(self.word[cut - 1]);
            min == n - cut + 1
        })
    }

    /// `grow_h`: replaces `σ(h)` by the new maximum `n+1` and appends the old
    /// `σ(h)`. In cycle notation this inserts `n+1` right after `h`.
    pub fn grow(&self, h: usize) -> Result<Permutation, PermError> {
        if h == 0 || h > self.len() {
            return Err(PermError::IndexOutOfRange {
                index: h,
                size: self.len(),
            });
        }
        let mut word = self.word.clone();
        let old = word[h - 1];
        word[h - 1] = self.len() + 1;
        word.push(old);
        Ok(Permutation { word })
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(i, &v)| v == i + 1)
    }
}

impl fmt::Display for Permutation {
    /// Compact digits when every value is a single digit, comma-separated
    /// otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.word {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts `35142` or `10,3,1,…`. The empty string (or `e`) is the empty
    /// permutation.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Permutation::empty());
        }
        let word: Option<Vec<usize>> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse::<usize>().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let word = word.ok_or_else(|| PermError::Parse(s.to_string()))?;
        Permutation::from_one_line(word)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn from_one_line_validates() {
        assert_eq!(Permutation::from_one_line(vec![3, 5, 1, 4, 2]).unwrap(), p("35142"));
        assert!(Permutation::from_one_line(vec![]).unwrap().is_empty());
        assert!(matches!(
            Permutation::from_one_line(vec![1, 1]),
            Err(PermError::InvalidWord { .. })
        ));
        assert!(Permutation::from_one_line(vec![0, 1]).is_err());
        assert!(Permutation::from_one_line(vec![1, 3]).is_err());
    }

    #[test]
    fn text_formats() {
        let long: Permutation = "10,3,1,2,4,5,6,7,8,9".parse().unwrap();
        assert_eq!(long.len(), 10);
        assert_eq!(long.to_string(), "10,3,1,2,4,5,6,7,8,9");
        assert_eq!("3,1,2".parse::<Permutation>().unwrap(), p("312"));
        assert!("3a1".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().unwrap().is_empty());
    }

    #[test]
    fn pattern_of_examples() {
        let s = p("35142");
        assert_eq!(s.pattern_of(&[1, 2, 3]).unwrap(), p("231"));
        assert_eq!(s.pattern_of(&[1, 2, 3, 4, 5]).unwrap(), s);
        // 2413 at positions 2,4 reads values 4,3
        assert_eq!(p("2413").pattern_of(&[2, 4]).unwrap(), p("21"));
        assert!(matches!(
            s.pattern_of(&[1, 6]),
            Err(PermError::IndexOutOfRange { index: 6, .. })
        ));
        assert!(matches!(s.pattern_of(&[2, 1]), Err(PermError::NotIncreasing(_))));
    }

    #[test]
    fn containment_examples() {
        assert!(p("2413").contains_pattern(&p("231")));
        let s = p("35142");
        assert_eq!(s.occurrences(&s), vec![vec![1, 2, 3, 4, 5]]);
        assert!(!p("123456").contains_pattern(&p("21")));
        assert_eq!(p("2413").occurrences(&p("231")), vec![vec![1, 2, 3]]);
        assert!(p("1").contains_pattern(&Permutation::empty()));
        assert!(!p("12").contains_pattern(&p("123")));
    }

    #[test]
    fn inflation_examples() {
        let inc2 = Permutation::increasing(2);
        assert_eq!(p("21").inflate(&[inc2.clone(), p("1")]).unwrap(), p("231"));
        assert_eq!(p("1").inflate(&[p("35142")]).unwrap(), p("35142"));
        assert_eq!(
            p("321").inflate(&[inc2.clone(), p("1"), inc2.clone()]).unwrap(),
            p("45312")
        );
        assert!(matches!(
            p("21").inflate(&[inc2.clone()]),
            Err(PermError::ArityMismatch { expected: 2, got: 1 })
        ));
        assert!(matches!(
            p("21").inflate(&[inc2.clone(), Permutation::empty()]),
            Err(PermError::EmptyBlock(2))
        ));
        assert_eq!(inc2.direct_sum(&Permutation::increasing(2)), Permutation::increasing(4));
        assert_eq!(p("1").skew_sum(&p("1")), p("21"));
    }

    #[test]
    fn cycle_examples() {
        let s = p("35142");
        assert_eq!(s.cycle_type(), Partition::new(vec![2, 2, 1]));
        assert_eq!(s.cycles(), vec![vec![1, 3], vec![2, 5], vec![4]]);
        let id = Permutation::identity(4);
        assert_eq!(id.cycle_type(), Partition::new(vec![1, 1, 1, 1]));
        assert!(id.support().is_empty());
        for n in 2..8 {
            let c = p("21").inflate(&[Permutation::increasing(n - 1), p("1")]).unwrap();
            assert_eq!(c.word()[..n - 1], (2..=n).collect::<Vec<_>>()[..]);
            assert_eq!(c.cycle_type(), Partition::new(vec![n]));
        }
        assert!(Permutation::empty().cycle_type().is_empty());
    }

    #[test]
    fn stable_occurrence_examples() {
        let s = p("4356712");
        assert!(s.stable_occurrences(&p("231")).contains(&vec![1, 4, 6]));
        assert!(p("2413").stable_occurrences(&p("231")).is_empty());
        let t = p("32154");
        let fixed: Vec<Vec<usize>> = t.fixed_points().into_iter().map(|i| vec![i]).collect();
        assert_eq!(t.stable_occurrences(&p("1")), fixed);
        assert_eq!(p("2413").stable_occurrences(&p("2413")), vec![vec![1, 2, 3, 4]]);
        assert!(s.is_stable_occurrence(&[1, 4, 6], &p("231")));
        assert!(!s.is_stable_occurrence(&[4, 1, 6], &p("231")));
    }

    #[test]
    fn simplicity_examples() {
        assert!(p("2413").is_simple_oracle());
        assert!(!p("2134").is_simple_oracle());
        assert!(p("1").is_simple_oracle());
        assert!(p("21").is_simple_oracle());
        assert!(Permutation::empty().is_simple_oracle());
        assert!(!p("123").is_simple_oracle());
        assert!(p("12").is_plus_decomposable_oracle());
        assert!(!p("1").is_plus_decomposable_oracle());
        assert!(p("21").is_minus_decomposable_oracle());
        assert!(p("3412").is_minus_decomposable_oracle());
        assert!(!p("2413").is_minus_decomposable_oracle());
    }

    #[test]
    fn grow_examples() {
        assert_eq!(p("1").grow(1).unwrap(), p("21"));
        let s = p("35142");
        for h in 1..=5 {
            let g = s.grow(h).unwrap();
            assert_eq!(g.len(), 6);
            let before = s.cycles().into_iter().find(|c| c.contains(&h)).unwrap().len();
            let after = g.cycles().into_iter().find(|c| c.contains(&h)).unwrap().len();
            assert_eq!(after, before + 1);
            assert_eq!(g.cycle_type().size(), 6);
            assert_eq!(g.cycle_type().len(), s.cycle_type().len());
        }
        assert!(Permutation::empty().grow(1).is_err());
        assert!(s.grow(6).is_err());
    }

    #[test]
    fn conjugation_preserves_cycle_type() {
        let s = p("35142");
        let g = p("25314");
        assert_eq!(s.conjugate_by(&g).cycle_type(), s.cycle_type());
        assert_eq!(s.compose(&s.inverse()), Permutation::identity(5));
    }
}
