//! Ehrenfeucht–Fraïssé games on permutations in the two-orders signature.
//!
//! A position is the set of pairs marked so far. The game value only depends
//! on that set and the number of rounds left, so the memo table is keyed by
//! the sorted pair list.
//!
//! Three exact reductions keep the search small:
//! - Spoiler never replays a marked point (Duplicator would copy and the
//!   position would not change).
//! - Duplicator answers an unmarked point with an unmarked point in the same
//!   cell, i.e. with the same number of marks to its left and below it.
//!   Every other answer breaks the partial isomorphism at once.
//! - With one round left Duplicator wins iff both sides have the same set of
//!   occupied cells among unmarked points.

use std::collections::HashMap;

use thiserror::Error;

use crate::perm::{Permutation, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EfError {
    #[error("marked tuples have lengths {left} and {right}")]
    TupleLengthMismatch { left: usize, right: usize },
    #[error("{0:?} is not a point of the permutation")]
    ForeignPoint(Point),
    #[error("{rounds} rounds exceeds the cap of {cap}")]
    DepthCapExceeded { rounds: usize, cap: usize },
    #[error("combined size {size} exceeds the cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfLimits {
    pub max_rounds: usize,
    pub max_total_size: usize,
}

impl Default for EfLimits {
    fn default() -> Self {
        EfLimits {
            max_rounds: 6,
            max_total_size: 40,
        }
    }
}

/// Search mode. `Exhaustive` drops every reduction and is meant as a check
/// of `Pruned` on small inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Search {
    Pruned,
    Exhaustive,
}

/// The game on one fixed pair of permutations. Reusing a game across
/// queries reuses its memo table.
#[derive(Debug, Clone)]
pub struct Game {
    left: Vec<u8>,
    right: Vec<u8>,
    search: Search,
    memo: HashMap<(Vec<(u8, u8)>, u8), bool>,
}

impl Game {
    pub fn new(alpha: &Permutation, beta: &Permutation, limits: EfLimits) -> Result<Game, EfError> {
        let size = alpha.len() + beta.len();
        if size > limits.max_total_size || alpha.len() > 255 || beta.len() > 255 {
            return Err(EfError::SizeCapExceeded {
                size,
                cap: limits.max_total_size.min(510),
            });
        }
        let word = |p: &Permutation| p.word().iter().map(|&v| (v - 1) as u8).collect();
        Ok(Game {
            left: word(alpha),
            right: word(beta),
            search: Search::Pruned,
            memo: HashMap::new(),
        })
    }

    pub fn with_search(mut self, search: Search) -> Self {
        self.search = search;
        self.memo.clear();
        self
    }

    /// Whether Duplicator wins `rounds` more rounds from the given marks
    /// (0-based positions, pairwise).
    pub fn duplicator_wins_from(&mut self, marks: &[(u8, u8)], rounds: usize) -> bool {
        if !self.partial_iso(marks) {
            return false;
        }
        let mut key: Vec<(u8, u8)> = marks.to_vec();
        key.sort_unstable();
        key.dedup();
        self.solve(key, rounds as u8)
    }

    fn partial_iso(&self, marks: &[(u8, u8)]) -> bool {
        marks.iter().enumerate().all(|(i, &(a, b))| {
            marks[..i].iter().all(|&(c, d)| {
                (a == c) == (b == d)
                    && (a < c) == (b < d)
                    && (self.left[a as usize] < self.left[c as usize])
                        == (self.right[b as usize] < self.right[d as usize])
            })
        })
    }

    fn extend_ok(&self, marks: &[(u8, u8)], a: u8, b: u8) -> bool {
        marks.iter().all(|&(c, d)| {
            (a == c) == (b == d)
                && (a < c) == (b < d)
                && (self.left[a as usize] < self.left[c as usize])
                    == (self.right[b as usize] < self.right[d as usize])
        })
    }

    // Inserts keeping the key sorted.
    fn with_pair(marks: &[(u8, u8)], pair: (u8, u8)) -> Vec<(u8, u8)> {
        let mut next = marks.to_vec();
        match next.binary_search(&pair) {
            Ok(_) => {}
            Err(at) => next.insert(at, pair),
        }
        next
    }

    fn solve(&mut self, marks: Vec<(u8, u8)>, rounds: u8) -> bool {
        if rounds == 0 {
            return true;
        }
        let key = (marks, rounds);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let marks = &key.0;
        let result = match self.search {
            Search::Pruned => self.solve_pruned(marks, rounds),
            Search::Exhaustive => self.solve_exhaustive(marks, rounds),
        };
        self.memo.insert(key, result);
        result
    }

    fn solve_exhaustive(&mut self, marks: &[(u8, u8)], rounds: u8) -> bool {
        let (nl, nr) = (self.left.len() as u8, self.right.len() as u8);
        for a in 0..nl {
            let answered = (0..nr).any(|b| {
                self.extend_ok(marks, a, b) && self.solve(Self::with_pair(marks, (a, b)), rounds - 1)
            });
            if !answered {
                return false;
            }
        }
        for b in 0..nr {
            let answered = (0..nl).any(|a| {
                self.extend_ok(marks, a, b) && self.solve(Self::with_pair(marks, (a, b)), rounds - 1)
            });
            if !answered {
                return false;
            }
        }
        true
    }

    fn cells(word: &[u8], marked: &[u8]) -> Vec<Option<(u8, u8)>> {
        (0..word.len())
            .map(|p| {
                if marked.contains(&(p as u8)) {
                    return None;
                }
                let left = marked.iter().filter(|&&m| (m as usize) < p).count() as u8;
                let below = marked.iter().filter(|&&m| word[m as usize] < word[p]).count() as u8;
                Some((left, below))
            })
            .collect()
    }

    fn solve_pruned(&mut self, marks: &[(u8, u8)], rounds: u8) -> bool {
        let ml: Vec<u8> = marks.iter().map(|m| m.0).collect();
        let mr: Vec<u8> = marks.iter().map(|m| m.1).collect();
        let cl = Self::cells(&self.left, &ml);
        let cr = Self::cells(&self.right, &mr);
        if rounds == 1 {
            let mut sl: Vec<(u8, u8)> = cl.iter().flatten().copied().collect();
            let mut sr: Vec<(u8, u8)> = cr.iter().flatten().copied().collect();
            sl.sort_unstable();
            sl.dedup();
            sr.sort_unstable();
            sr.dedup();
            return sl == sr;
        }
        // Spoiler in the left structure, then in the right one.
        for (a, cell) in cl.iter().enumerate() {
            let Some(cell) = cell else { continue };
            let answered = (0..cr.len()).any(|b| {
                cr[b] == Some(*cell)
                    && self.solve(Self::with_pair(marks, (a as u8, b as u8)), rounds - 1)
            });
            if !answered {
                return false;
            }
        }
        for (b, cell) in cr.iter().enumerate() {
            let Some(cell) = cell else { continue };
            let answered = (0..cl.len()).any(|a| {
                cl[a] == Some(*cell)
                    && self.solve(Self::with_pair(marks, (a as u8, b as u8)), rounds - 1)
            });
            if !answered {
                return false;
            }
        }
        true
    }
}

fn check_rounds(k: usize, limits: EfLimits) -> Result<(), EfError> {
    if k > limits.max_rounds {
        return Err(EfError::DepthCapExceeded {
            rounds: k,
            cap: limits.max_rounds,
        });
    }
    Ok(())
}

/// `α ∼_k β` with the default limits.
pub fn duplicator_wins(alpha: &Permutation, beta: &Permutation, k: usize) -> Result<bool, EfError> {
    duplicator_wins_with(alpha, beta, k, EfLimits::default())
}

pub fn duplicator_wins_with(
    alpha: &Permutation,
    beta: &Permutation,
    k: usize,
    limits: EfLimits,
) -> Result<bool, EfError> {
    check_rounds(k, limits)?;
    Ok(Game::new(alpha, beta, limits)?.duplicator_wins_from(&[], k))
}

/// `(α, a) ∼_k (β, b)`: the k-round game after the forced opening `a ↦ b`.
pub fn duplicator_wins_marked(
    alpha: &Permutation,
    a: &[Point],
    beta: &Permutation,
    b: &[Point],
    k: usize,
) -> Result<bool, EfError> {
    duplicator_wins_marked_with(alpha, a, beta, b, k, EfLimits::default())
}

pub fn duplicator_wins_marked_with(
    alpha: &Permutation,
    a: &[Point],
    beta: &Permutation,
    b: &[Point],
    k: usize,
    limits: EfLimits,
) -> Result<bool, EfError> {
    if a.len() != b.len() {
        return Err(EfError::TupleLengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    for (perm, pts) in [(alpha, a), (beta, b)] {
        if let Some(p) = pts.iter().find(|p| !perm.contains_point(**p)) {
            return Err(EfError::ForeignPoint(*p));
        }
    }
    check_rounds(k, limits)?;
    let marks: Vec<(u8, u8)> = a
        .iter()
        .zip(b)
        .map(|(p, q)| ((p.position - 1) as u8, (q.position - 1) as u8))
        .collect();
    Ok(Game::new(alpha, beta, limits)?.duplicator_wins_from(&marks, k))
}

/// The least `k ≤ max_k` at which Spoiler wins, or `None` if Duplicator
/// survives every depth up to `max_k`.
pub fn distinguishing_depth(
    alpha: &Permutation,
    beta: &Permutation,
    max_k: usize,
) -> Result<Option<usize>, EfError> {
    distinguishing_depth_with(alpha, beta, max_k, EfLimits::default())
}

pub fn distinguishing_depth_with(
    alpha: &Permutation,
    beta: &Permutation,
    max_k: usize,
    limits: EfLimits,
) -> Result<Option<usize>, EfError> {
    check_rounds(max_k, limits)?;
    let mut game = Game::new(alpha, beta, limits)?;
    for k in 0..=max_k {
        if !game.duplicator_wins_from(&[], k) {
            if k < max_k {
                assert!(
                    !game.duplicator_wins_from(&[], k + 1),
                    "Spoiler lost a win by getting an extra round"
                );
            }
            return Ok(Some(k));
        }
    }
    Ok(None)
}
