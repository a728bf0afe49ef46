//! Brute-force oracles and random generators shared by the integration tests.
//! Nothing here calls the library's own search routines; permutations are
//! handled as plain words.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use permlogic::logic::{Formula, Var};
use permlogic::Permutation;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

pub fn perm(word: Vec<usize>) -> Permutation {
    Permutation::from_one_line(word).unwrap()
}

/// All permutations of size `n` in lexicographic order, by Heap-free
/// recursion over remaining values.
pub fn all_perms(n: usize) -> Vec<Permutation> {
    fn rec(n: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, used, cur, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut vec![false; n + 1], &mut Vec::new(), &mut out);
    out.into_iter().map(perm).collect()
}

pub fn all_perms_upto(n: usize) -> Vec<Permutation> {
    (0..=n).flat_map(all_perms).collect()
}

/// Increasing index tuples of length `k` from `1..=n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Relative order of `vals` as a 1-based word.
pub fn standardize(vals: &[usize]) -> Vec<usize> {
    vals.iter().map(|v| vals.iter().filter(|w| *w <= v).count()).collect()
}

pub fn is_occurrence(sigma: &Permutation, pi: &Permutation, pos: &[usize]) -> bool {
    let vals: Vec<usize> = pos.iter().map(|&i| sigma.word()[i - 1]).collect();
    standardize(&vals) == pi.word()
}

pub fn occurrences(sigma: &Permutation, pi: &Permutation) -> Vec<Vec<usize>> {
    combinations(sigma.len(), pi.len())
        .into_iter()
        .filter(|c| is_occurrence(sigma, pi, c))
        .collect()
}

pub fn contains(sigma: &Permutation, pi: &Permutation) -> bool {
    combinations(sigma.len(), pi.len()).iter().any(|c| is_occurrence(sigma, pi, c))
}

pub fn avoids_all(sigma: &Permutation, basis: &[Permutation]) -> bool {
    basis.iter().all(|b| !contains(sigma, b))
}

pub fn av(basis: &[Permutation], n: usize) -> Vec<Permutation> {
    all_perms(n).into_iter().filter(|s| avoids_all(s, basis)).collect()
}

// ---- sorting devices, written from their operational descriptions ----

pub fn stack_pass(w: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for &x in w {
        while let Some(&top) = stack.last() {
            if top < x {
                out.push(stack.pop().unwrap());
            } else {
                break;
            }
        }
        stack.push(x);
    }
    while let Some(t) = stack.pop() {
        out.push(t);
    }
    out
}

/// One element buffer: keep the larger of the held element and the next
/// input, emit the smaller.
pub fn bubble_pass(w: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut held: Option<usize> = None;
    for &x in w {
        match held {
            None => held = Some(x),
            Some(h) => {
                out.push(h.min(x));
                held = Some(h.max(x));
            }
        }
    }
    out.extend(held);
    out
}

/// Queue with bypass, per its description: join when larger than the back;
/// bypass when smaller than the front; otherwise release the smaller queued
/// elements and then join (if the queue emptied) or pass through.
pub fn queue_pass(w: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q: std::collections::VecDeque<usize> = Default::default();
    for &x in w {
        if q.back().is_none_or(|&b| x > b) {
            q.push_back(x);
        } else if x < *q.front().unwrap() {
            out.push(x);
        } else {
            while q.front().is_some_and(|&f| f < x) {
                out.push(q.pop_front().unwrap());
            }
            if q.is_empty() {
                q.push_back(x);
            } else {
                out.push(x);
            }
        }
    }
    out.extend(q);
    out
}

pub fn is_sorted(w: &[usize]) -> bool {
    w.windows(2).all(|p| p[0] < p[1])
}

// ---- cycles ----

pub fn cycle_lengths(sigma: &Permutation) -> Vec<usize> {
    let w = sigma.word();
    let mut seen = vec![false; w.len() + 1];
    let mut lens = Vec::new();
    for s in 1..=w.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = w[i - 1];
            len += 1;
        }
        lens.push(len);
    }
    lens.sort_unstable_by(|a, b| b.cmp(a));
    lens
}

fn multiset(parts: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &x in parts {
        *m.entry(x).or_insert(0) += 1;
    }
    m
}

pub fn has_exact_type(sigma: &Permutation, lambda: &[usize]) -> bool {
    multiset(&cycle_lengths(sigma)) == multiset(lambda)
}

/// Type `λ ∪ (1^k)` for some `k ≥ 0`.
pub fn has_padded_type(sigma: &Permutation, lambda: &[usize]) -> bool {
    let mut have = multiset(&cycle_lengths(sigma));
    for (&len, &c) in &multiset(lambda) {
        let e = have.entry(len).or_insert(0);
        if *e < c {
            return false;
        }
        *e -= c;
    }
    have.iter().all(|(&len, &c)| len == 1 || c == 0)
}

pub fn partitions_upto(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for s in 0..=n {
        rec(s, s, &mut Vec::new(), &mut out);
    }
    out
}

/// Stable occurrence by definition: an occurrence whose position set is
/// closed under `σ`.
pub fn is_stable(sigma: &Permutation, pi: &Permutation, pos: &[usize]) -> bool {
    is_occurrence(sigma, pi, pos) && pos.iter().all(|&i| pos.contains(&sigma.word()[i - 1]))
}

pub fn stable_occurrences(sigma: &Permutation, pi: &Permutation) -> Vec<Vec<usize>> {
    occurrences(sigma, pi).into_iter().filter(|o| is_stable(sigma, pi, o)).collect()
}

/// Points strictly inside cell (row, col) around `pos`, counted directly.
pub fn cell_counts(sigma: &Permutation, pos: &[usize]) -> Vec<Vec<usize>> {
    let k = pos.len();
    let w = sigma.word();
    let mut vals: Vec<usize> = pos.iter().map(|&i| w[i - 1]).collect();
    vals.sort_unstable();
    let mut a = vec![vec![0; k + 1]; k + 1];
    for i in 1..=w.len() {
        if pos.contains(&i) {
            continue;
        }
        let col = pos.iter().filter(|&&q| q < i).count();
        let row = vals.iter().filter(|&&v| v < w[i - 1]).count();
        a[row][col] += 1;
    }
    a
}

/// P1–P3 witness search over all subsets of size `|λ|`.
pub fn padded_type_by_witness(sigma: &Permutation, lambda: &[usize]) -> bool {
    let size: usize = lambda.iter().sum();
    let w = sigma.word();
    let n = w.len();
    combinations(n, size).iter().any(|xs| {
        let vals: Vec<usize> = xs.iter().map(|&i| w[i - 1]).collect();
        let pattern = perm(standardize(&vals));
        if !has_exact_type(&pattern, lambda) {
            return false;
        }
        let outside: Vec<usize> = (1..=n).filter(|i| !xs.contains(i)).collect();
        let p2 = outside
            .iter()
            .all(|&a| outside.iter().all(|&b| (a < b) == (w[a - 1] < w[b - 1])));
        let p3 = outside.iter().all(|&y| {
            let by_pos = xs.iter().filter(|&&x| x < y).count();
            let by_val = xs.iter().filter(|&&x| w[x - 1] < w[y - 1]).count();
            by_pos == by_val
        });
        p2 && p3
    })
}

// ---- generalized-pattern oracles ----

/// Region test for mesh shading: the point (pos, val) lies in cell (i, j)
/// of the occurrence with positions `occ` (i by position, j by value).
pub fn in_cell(sigma: &Permutation, occ: &[usize], (i, j): (usize, usize), pos: usize) -> bool {
    let w = sigma.word();
    let mut vals: Vec<usize> = occ.iter().map(|&q| w[q - 1]).collect();
    vals.sort_unstable();
    let k = occ.len();
    let v = w[pos - 1];
    let left_ok = i == 0 || occ[i - 1] < pos;
    let right_ok = i == k || pos < occ[i];
    let low_ok = j == 0 || vals[j - 1] < v;
    let high_ok = j == k || v < vals[j];
    left_ok && right_ok && low_ok && high_ok && !occ.contains(&pos)
}

pub fn mesh_occurrence(sigma: &Permutation, pi: &Permutation, shaded: &BTreeSet<(usize, usize)>, occ: &[usize]) -> bool {
    is_occurrence(sigma, pi, occ)
        && shaded
            .iter()
            .all(|&c| (1..=sigma.len()).all(|q| !in_cell(sigma, occ, c, q)))
}

/// Occurrence of the unbarred pattern at `occ` that does not extend to the
/// full pattern with the barred entries inserted consistently.
pub fn barred_occurrence(sigma: &Permutation, pi: &Permutation, barred: &BTreeSet<usize>, occ: &[usize]) -> bool {
    let k = pi.len();
    let keep: Vec<usize> = (1..=k).filter(|i| !barred.contains(i)).collect();
    let rho_vals: Vec<usize> = keep.iter().map(|&i| pi.word()[i - 1]).collect();
    let rho = perm(standardize(&rho_vals));
    if !is_occurrence(sigma, &rho, occ) {
        return false;
    }
    !combinations(sigma.len(), k).iter().any(|full| {
        is_occurrence(sigma, pi, full) && keep.iter().zip(occ).all(|(&i, &q)| full[i - 1] == q)
    })
}

/// Decorated occurrence: every constrained cell avoids its pattern.
pub fn decorated_occurrence(
    sigma: &Permutation,
    pi: &Permutation,
    constraints: &[((usize, usize), Permutation)],
    occ: &[usize],
) -> bool {
    if !is_occurrence(sigma, pi, occ) {
        return false;
    }
    constraints.iter().all(|(cell, forbidden)| {
        let inside: Vec<usize> = (1..=sigma.len()).filter(|&q| in_cell(sigma, occ, *cell, q)).collect();
        let vals: Vec<usize> = inside.iter().map(|&q| sigma.word()[q - 1]).collect();
        if vals.is_empty() {
            return true;
        }
        !contains(&perm(standardize(&vals)), forbidden)
    })
}

/// Grid class membership: some placement of column and row cuts puts a
/// permutation avoiding each cell's basis into every cell, with `None`
/// cells empty. `cells[c][r]` is column `c` from the left, row `r` from the
/// bottom.
pub fn gridded(sigma: &Permutation, cells: &[Vec<Option<Vec<Permutation>>>]) -> bool {
    let n = sigma.len();
    let w = sigma.word();
    let cols = cells.len();
    let rows = cells[0].len();
    let cut_lists = |parts: usize| -> Vec<Vec<usize>> {
        // nondecreasing cut points in 0..=n, parts-1 of them
        fn rec(parts: usize, lo: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() + 1 == parts {
                out.push(cur.clone());
                return;
            }
            for c in lo..=n {
                cur.push(c);
                rec(parts, c, n, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(parts, 0, n, &mut Vec::new(), &mut out);
        out
    };
    let band = |cuts: &[usize], x: usize| cuts.iter().filter(|&&c| c < x).count();
    for cc in cut_lists(cols) {
        for rc in cut_lists(rows) {
            let ok = (0..cols).all(|c| {
                (0..rows).all(|r| {
                    let vals: Vec<usize> = (1..=n)
                        .filter(|&i| band(&cc, i) == c && band(&rc, w[i - 1]) == r)
                        .map(|i| w[i - 1])
                        .collect();
                    match &cells[c][r] {
                        None => vals.is_empty(),
                        Some(basis) => vals.is_empty() || avoids_all(&perm(standardize(&vals)), basis),
                    }
                })
            });
            if ok {
                return true;
            }
        }
    }
    false
}

// ---- substitution decomposition ----

pub fn has_interval(sigma: &Permutation) -> bool {
    let w = sigma.word();
    let n = w.len();
    (0..n).any(|a| {
        (a + 1..n).any(|b| {
            let len = b - a + 1;
            if len >= n {
                return false;
            }
            let lo = w[a..=b].iter().min().unwrap();
            let hi = w[a..=b].iter().max().unwrap();
            hi - lo + 1 == len
        })
    })
}

pub fn plus_decomposable(sigma: &Permutation) -> bool {
    let w = sigma.word();
    (1..w.len()).any(|cut| w[..cut].iter().all(|&v| v <= cut))
}

pub fn minus_decomposable(sigma: &Permutation) -> bool {
    let w = sigma.word();
    let n = w.len();
    (1..n).any(|cut| w[..cut].iter().all(|&v| v > n - cut))
}

// ---- EF oracle via Hintikka types ----

/// The rank-`k` type of the marked tuple `marks` (0-based positions) in `w`:
/// the atomic diagram of the tuple together with the set of types of its
/// one-point extensions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hintikka {
    Leaf(Vec<(bool, bool, bool)>),
    Node(Vec<(bool, bool, bool)>, BTreeSet<Hintikka>),
}

fn diagram(w: &[usize], marks: &[usize]) -> Vec<(bool, bool, bool)> {
    let mut d = Vec::new();
    for &a in marks {
        for &b in marks {
            d.push((a == b, a < b, w[a] < w[b]));
        }
    }
    d
}

pub fn hintikka(w: &[usize], marks: &mut Vec<usize>, k: usize) -> Hintikka {
    let d = diagram(w, marks);
    if k == 0 {
        return Hintikka::Leaf(d);
    }
    let mut set = BTreeSet::new();
    for q in 0..w.len() {
        marks.push(q);
        set.insert(hintikka(w, marks, k - 1));
        marks.pop();
    }
    Hintikka::Node(d, set)
}

pub fn ef_equivalent_oracle(a: &Permutation, b: &Permutation, k: usize) -> bool {
    hintikka(a.word(), &mut Vec::new(), k) == hintikka(b.word(), &mut Vec::new(), k)
}

// ---- random formulas ----

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lang {
    To,
    Ob,
}

const POOL: [&str; 5] = ["x", "y", "z", "w", "_t7"];

fn atom<R: Rng>(rng: &mut R, lang: Lang, scope: &[Var]) -> Formula {
    let a = scope.choose(rng).unwrap().clone();
    let b = scope.choose(rng).unwrap().clone();
    match (lang, rng.gen_range(0..4)) {
        (_, 0) => Formula::Eq(a, b),
        (Lang::To, 1 | 2) => Formula::LtP(a, b),
        (Lang::To, _) => Formula::LtV(a, b),
        (Lang::Ob, _) => Formula::Rel(a, b),
    }
}

/// A random formula with quantifier depth at most `depth`, over the variables
/// in `scope` plus those it binds. `scope` must be nonempty unless
/// `depth > 0`.
pub fn random_formula<R: Rng>(rng: &mut R, lang: Lang, depth: usize, scope: &mut Vec<Var>, size: usize) -> Formula {
    let must_bind = scope.is_empty();
    let roll = rng.gen_range(0..100);
    if !must_bind && (size == 0 || roll < 25) {
        return atom(rng, lang, scope);
    }
    if depth > 0 && (must_bind || roll < 55) {
        let v = Var::new(*POOL.choose(rng).unwrap());
        scope.push(v.clone());
        let body = random_formula(rng, lang, depth - 1, scope, size.saturating_sub(1));
        scope.pop();
        return if rng.gen_bool(0.5) {
            Formula::exists(v, body)
        } else {
            Formula::forall(v, body)
        };
    }
    if must_bind {
        unreachable!("callers give sentences at least one quantifier level");
    }
    if roll < 65 {
        return random_formula(rng, lang, depth, scope, size.saturating_sub(1)).not();
    }
    let half = size.saturating_sub(1) / 2;
    let l = random_formula(rng, lang, depth, scope, half);
    let r = random_formula(rng, lang, depth, scope, half);
    match rng.gen_range(0..4) {
        0 => l.and(r),
        1 => l.or(r),
        2 => l.implies(r),
        _ => l.iff(r),
    }
}

pub fn random_sentence<R: Rng>(rng: &mut R, lang: Lang, depth: usize, size: usize) -> Formula {
    assert!(depth > 0);
    random_formula(rng, lang, depth, &mut Vec::new(), size)
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut w: Vec<usize> = (1..=n).collect();
    w.shuffle(rng);
    perm(w)
}
