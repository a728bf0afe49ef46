//! Cell-count matrices around occurrences, balanced matrices and their cycle
//! decompositions, and expansions of a pattern along a cycle.
//!
//! Matrices are stored with row 0 at the bottom; entry `(i, j)` counts the
//! points in value band `i` and position band `j`. Cycle sequences and cell
//! coordinates in the public API are 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarginalsError {
    #[error("invalid occurrence {occurrence:?}: {reason}")]
    InvalidOccurrence { occurrence: Vec<usize>, reason: String },
    #[error("matrix must be square and nonempty")]
    NotSquare,
    #[error("row and column sums differ at index {0}")]
    NotBalanced(usize),
    #[error("invalid cycle {cycle:?} over [{m}]")]
    InvalidCycle { cycle: Vec<usize>, m: usize },
    #[error("more than {cap} matrices to enumerate")]
    MatrixEnumerationOverflow { cap: usize },
    #[error("expected {expected} inflating permutations, got {got}")]
    ThetaLength { expected: usize, got: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionMatrix {
    /// Bottom row first.
    pub rows: Vec<Vec<usize>>,
}

impl RegionMatrix {
    pub fn zero(m: usize) -> Self {
        RegionMatrix {
            rows: vec![vec![0; m]; m],
        }
    }

    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, MarginalsError> {
        let m = rows.len();
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(MarginalsError::NotSquare);
        }
        Ok(RegionMatrix { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Entry in row `i`, column `j` (0-based, row 0 at the bottom).
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.rows[i][j]
    }

    pub fn total(&self) -> usize {
        self.rows.iter().flatten().sum()
    }

    pub fn off_diagonal_total(&self) -> usize {
        self.total() - (0..self.size()).map(|i| self.rows[i][i]).sum::<usize>()
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.rows[i].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> usize {
        self.rows.iter().map(|r| r[j]).sum()
    }

    /// Same matrix with the diagonal cleared.
    pub fn without_diagonal(&self) -> RegionMatrix {
        let mut out = self.clone();
        for i in 0..self.size() {
            out.rows[i][i] = 0;
        }
        out
    }

    fn add_scaled(&mut self, other: &RegionMatrix, c: usize) {
        for (r, o) in self.rows.iter_mut().zip(&other.rows) {
            for (a, b) in r.iter_mut().zip(o) {
                *a += c * b;
            }
        }
    }
}

impl fmt::Display for RegionMatrix {
    /// Rows top to bottom, the way the diagram reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, row) in self.rows.iter().rev().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A sequence of distinct indices `i₁ … i_r` read as the directed cycle
/// `i₁ → i₂ → … → i_r → i₁`. Stored rotated so that it starts at its minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleSeq(Vec<usize>);

impl CycleSeq {
    pub fn new(seq: Vec<usize>) -> Result<Self, MarginalsError> {
        let m = seq.iter().copied().max().unwrap_or(0);
        Self::over(seq, m)
    }

    /// Validates that the entries are distinct elements of `[m]`.
    pub fn over(seq: Vec<usize>, m: usize) -> Result<Self, MarginalsError> {
        let mut seen = vec![false; m + 1];
        let bad = seq.is_empty()
            || seq.iter().any(|&i| {
                if i == 0 || i > m || seen[i] {
                    return true;
                }
                seen[i] = true;
                false
            });
        if bad {
            return Err(MarginalsError::InvalidCycle { cycle: seq, m });
        }
        let start = (0..seq.len()).min_by_key(|&t| seq[t]).unwrap();
        let mut rotated = seq[start..].to_vec();
        rotated.extend_from_slice(&seq[..start]);
        Ok(CycleSeq(rotated))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.len() == 1
    }

    /// Directed edges `(from, to)`, 1-based, starting with `i₁ → i₂`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let r = self.0.len();
        (0..r).map(move |t| (self.0[t], self.0[(t + 1) % r]))
    }
}

impl fmt::Display for CycleSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Cell counts of `σ ∖ s` around the occurrence at the 1-based, strictly
/// increasing `positions`.
pub fn region_matrix(sigma: &Permutation, positions: &[usize]) -> Result<RegionMatrix, MarginalsError> {
    let invalid = |reason: &str| MarginalsError::InvalidOccurrence {
        occurrence: positions.to_vec(),
        reason: reason.to_string(),
    };
    let n = sigma.len();
    if positions.iter().any(|&p| p == 0 || p > n) {
        return Err(invalid("position out of range"));
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("positions must be strictly increasing"));
    }
    let k = positions.len();
    let mut values: Vec<usize> = positions.iter().map(|&p| sigma.apply(p)).collect();
    values.sort_unstable();
    let mut a = RegionMatrix::zero(k + 1);
    let mut marked = vec![false; n + 1];
    for &p in positions {
        marked[p] = true;
    }
    for pos in (1..=n).filter(|&p| !marked[p]) {
        let col = positions.partition_point(|&q| q < pos);
        let row = values.partition_point(|&v| v < sigma.apply(pos));
        a.rows[row][col] += 1;
    }
    Ok(a)
}

pub fn has_matching_marginals(a: &RegionMatrix) -> bool {
    first_unbalanced(a).is_none()
}

fn first_unbalanced(a: &RegionMatrix) -> Option<usize> {
    (0..a.size()).find(|&i| a.row_sum(i) != a.col_sum(i))
}

/// The adjacency matrix of `i` in an `m × m` matrix: entry `(i_t, i_{t+1})`
/// is 1.
pub fn cycle_matrix(cycle: &CycleSeq, m: usize) -> Result<RegionMatrix, MarginalsError> {
    if cycle.indices().iter().any(|&i| i > m) || m == 0 {
        return Err(MarginalsError::InvalidCycle {
            cycle: cycle.indices().to_vec(),
            m,
        });
    }
    let mut a = RegionMatrix::zero(m);
    for (from, to) in cycle.edges() {
        a.rows[from - 1][to - 1] += 1;
    }
    Ok(a)
}

/// Writes a balanced matrix as a nonnegative combination of cycle matrices.
/// The lexicographically smallest cycle (started at its minimum) present in
/// the remaining multigraph is removed first, as many times as its scarcest
/// edge allows. Loops come out as trivial cycles.
pub fn cycle_decompose(a: &RegionMatrix) -> Result<Vec<(CycleSeq, usize)>, MarginalsError> {
    if let Some(i) = first_unbalanced(a) {
        return Err(MarginalsError::NotBalanced(i));
    }
    let m = a.size();
    let mut rest = a.clone();
    let mut out = Vec::new();
    while let Some(cycle) = smallest_cycle(&rest) {
        let coeff = cycle
            .edges()
            .map(|(u, v)| rest.rows[u - 1][v - 1])
            .min()
            .expect("cycles are nonempty");
        for (u, v) in cycle.edges() {
            rest.rows[u - 1][v - 1] -= coeff;
        }
        out.push((cycle, coeff));
    }
    debug_assert_eq!(rest, RegionMatrix::zero(m));
    Ok(out)
}

fn smallest_cycle(a: &RegionMatrix) -> Option<CycleSeq> {
    let m = a.size();
    // Depth-first in increasing neighbour order, testing the closing edge
    // before any extension, finds the lexicographically least cycle through
    // `start` that stays above it.
    fn dfs(a: &RegionMatrix, start: usize, path: &mut Vec<usize>, on_path: &mut [bool]) -> bool {
        let last = *path.last().unwrap();
        if a.rows[last][start] > 0 {
            return true;
        }
        for next in start + 1..a.size() {
            if !on_path[next] && a.rows[last][next] > 0 {
                path.push(next);
                on_path[next] = true;
                if dfs(a, start, path, on_path) {
                    return true;
                }
                on_path[next] = false;
                path.pop();
            }
        }
        false
    }
    for start in 0..m {
        let mut path = vec![start];
        let mut on_path = vec![false; m];
        on_path[start] = true;
        if dfs(a, start, &mut path, &mut on_path) {
            let seq = path.iter().map(|&i| i + 1).collect();
            return Some(CycleSeq::over(seq, m).expect("path entries are distinct"));
        }
    }
    None
}

/// `Σ c · A_i` over the given terms.
pub fn recompose(terms: &[(CycleSeq, usize)], m: usize) -> Result<RegionMatrix, MarginalsError> {
    let mut a = RegionMatrix::zero(m);
    for (cycle, c) in terms {
        a.add_scaled(&cycle_matrix(cycle, m)?, *c);
    }
    Ok(a)
}

/// Default ceiling on [`enumerate_balanced`].
pub const DEFAULT_MATRIX_CAP: usize = 1_000_000;

/// All `m × m` matrices with zero diagonal, matching marginals and total at
/// most `max_total`, in lexicographic order of their rows (bottom row first).
pub fn enumerate_balanced(m: usize, max_total: usize, cap: usize) -> Result<Vec<RegionMatrix>, MarginalsError> {
    if m == 0 {
        return Err(MarginalsError::NotSquare);
    }
    let cells: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut st = Enum {
        cells,
        cap,
        net: vec![0; m],
        cur: RegionMatrix::zero(m),
        out: Vec::new(),
    };
    st.rec(0, max_total)?;
    Ok(st.out)
}

struct Enum {
    cells: Vec<(usize, usize)>,
    cap: usize,
    /// Row sum minus column sum so far, per index.
    net: Vec<i64>,
    cur: RegionMatrix,
    out: Vec<RegionMatrix>,
}

impl Enum {
    fn rec(&mut self, idx: usize, budget: usize) -> Result<(), MarginalsError> {
        // Each unit of remaining budget can shift the imbalance by at most
        // one on each of two indices.
        let imbalance: i64 = self.net.iter().map(|d| d.abs()).sum();
        if imbalance > 2 * budget as i64 {
            return Ok(());
        }
        if idx == self.cells.len() {
            if imbalance == 0 {
                if self.out.len() == self.cap {
                    return Err(MarginalsError::MatrixEnumerationOverflow { cap: self.cap });
                }
                self.out.push(self.cur.clone());
            }
            return Ok(());
        }
        let (i, j) = self.cells[idx];
        for c in 0..=budget {
            self.cur.rows[i][j] = c;
            self.net[i] += c as i64;
            self.net[j] -= c as i64;
            let r = self.rec(idx + 1, budget - c);
            self.net[i] -= c as i64;
            self.net[j] += c as i64;
            r?;
        }
        self.cur.rows[i][j] = 0;
        Ok(())
    }
}

/// `E(π, i)`: `π` plus one point per edge `a → b` of `i`, placed in row `a`
/// and column `b` of the grid around `π`.
pub fn expansion(pi: &Permutation, cycle: &CycleSeq) -> Result<Permutation, MarginalsError> {
    Ok(expansion_points(pi, cycle)?.0)
}

// The expansion together with the positions (1-based) of the added points.
fn expansion_points(pi: &Permutation, cycle: &CycleSeq) -> Result<(Permutation, Vec<usize>), MarginalsError> {
    let k = pi.len();
    if cycle.indices().iter().any(|&i| i > k + 1) {
        return Err(MarginalsError::InvalidCycle {
            cycle: cycle.indices().to_vec(),
            m: k + 1,
        });
    }
    // Doubled coordinates: marked point j sits at (2j, 2π(j)); the cell in
    // column b and row a is centred at (2b − 1, 2a − 1).
    let mut pts: Vec<(usize, usize, bool)> = (1..=k).map(|j| (2 * j, 2 * pi.apply(j), false)).collect();
    pts.extend(cycle.edges().map(|(a, b)| (2 * b - 1, 2 * a - 1, true)));
    pts.sort_unstable();
    let ys: Vec<usize> = pts.iter().map(|p| p.1).collect();
    let added = pts
        .iter()
        .enumerate()
        .filter(|(_, p)| p.2)
        .map(|(idx, _)| idx + 1)
        .collect();
    Ok((Permutation::from_ranks(&ys), added))
}

/// `E(π, i, Θ)`: the added points of `E(π, i)`, taken left to right, are
/// inflated by `θ₁, …, θ_r`.
pub fn expansion_inflated(
    pi: &Permutation,
    cycle: &CycleSeq,
    theta: &[Permutation],
) -> Result<Permutation, MarginalsError> {
    if theta.len() != cycle.len() {
        return Err(MarginalsError::ThetaLength {
            expected: cycle.len(),
            got: theta.len(),
        });
    }
    let (e, added) = expansion_points(pi, cycle)?;
    let mut blocks = vec![Permutation::identity(1); e.len()];
    for (pos, th) in added.iter().zip(theta) {
        blocks[pos - 1] = th.clone();
    }
    Ok(e.inflate(&blocks)?)
}

/// Positions of the `π`-occurrence inside `E(π, i)`.
pub fn expansion_occurrence(pi: &Permutation, cycle: &CycleSeq) -> Result<Vec<usize>, MarginalsError> {
    let (e, added) = expansion_points(pi, cycle)?;
    Ok((1..=e.len()).filter(|p| !added.contains(p)).collect())
}
