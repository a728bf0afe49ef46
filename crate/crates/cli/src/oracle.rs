//! Brute-force reference computations for the verify suites. Nothing here
//! calls into the library's own algorithms beyond building permutations.

use permlogic::Permutation;

pub fn all_perms(n: usize) -> Vec<Permutation> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if cur.len() == n {
            out.push(Permutation::from_one_line(cur.clone()).expect("built from a bijection"));
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

/// Increasing 1-based index tuples of length `k` from `1..=n`.
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

fn same_shape(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] < a[j]) == (b[i] < b[j])))
}

pub fn contains(sigma: &Permutation, pi: &Permutation) -> bool {
    let w = sigma.word();
    combinations(w.len(), pi.len())
        .iter()
        .any(|c| same_shape(&c.iter().map(|&q| w[q - 1]).collect::<Vec<_>>(), pi.word()))
}

pub fn is_occurrence(sigma: &Permutation, pi: &Permutation, occ: &[usize]) -> bool {
    let w = sigma.word();
    same_shape(&occ.iter().map(|&q| w[q - 1]).collect::<Vec<_>>(), pi.word())
}

pub fn stack_pass(w: &[usize]) -> Vec<usize> {
    let (mut out, mut stack) = (Vec::new(), Vec::<usize>::new());
    for &a in w {
        while stack.last().is_some_and(|&t| t < a) {
            out.push(stack.pop().unwrap());
        }
        stack.push(a);
    }
    out.extend(stack.into_iter().rev());
    out
}

pub fn bubble_pass(w: &[usize]) -> Vec<usize> {
    let mut v = w.to_vec();
    for i in 1..v.len() {
        if v[i - 1] > v[i] {
            v.swap(i - 1, i);
        }
    }
    v
}

/// Queue with bypass: an entry above the queue's tail joins the queue; a
/// smaller one goes straight out once the queue has released everything
/// below it, or joins the emptied queue.
pub fn queue_pass(w: &[usize]) -> Vec<usize> {
    let (mut out, mut queue) = (Vec::new(), std::collections::VecDeque::<usize>::new());
    for &a in w {
        if queue.back().is_none_or(|&b| a > b) {
            queue.push_back(a);
            continue;
        }
        while queue.front().is_some_and(|&h| h < a) {
            out.push(queue.pop_front().unwrap());
        }
        if queue.is_empty() {
            queue.push_back(a);
        } else {
            out.push(a);
        }
    }
    out.extend(queue);
    out
}

pub fn is_sorted(w: &[usize]) -> bool {
    w.windows(2).all(|p| p[0] < p[1])
}

pub fn cycle_lengths(sigma: &Permutation) -> Vec<usize> {
    let w = sigma.word();
    let mut seen = vec![false; w.len()];
    let mut out = Vec::new();
    for s in 0..w.len() {
        let (mut i, mut len) = (s, 0);
        while !seen[i] {
            seen[i] = true;
            i = w[i] - 1;
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Cycle type exactly `lambda` (nonincreasing).
pub fn has_type(sigma: &Permutation, lambda: &[usize]) -> bool {
    cycle_lengths(sigma) == lambda
}

/// Cycle type `lambda` plus any number of fixed points.
pub fn has_padded_type(sigma: &Permutation, lambda: &[usize]) -> bool {
    let mut got: Vec<usize> = cycle_lengths(sigma);
    let mut want = lambda.to_vec();
    got.retain(|&l| l > 1);
    let ones = want.iter().filter(|&&l| l == 1).count();
    want.retain(|&l| l > 1);
    got == want && sigma.word().iter().enumerate().filter(|(i, &v)| i + 1 == v).count() >= ones
}

/// `sigma` maps the occurrence positions onto themselves.
pub fn is_stable(sigma: &Permutation, pi: &Permutation, occ: &[usize]) -> bool {
    is_occurrence(sigma, pi, occ) && occ.iter().all(|&q| occ.contains(&sigma.word()[q - 1]))
}

/// Partitions of every size `0..=n`, parts nonincreasing.
pub fn partitions_upto(n: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for p in (1..=max.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Some block of two to `n - 1` consecutive positions holds consecutive
/// values.
pub fn has_interval(sigma: &Permutation) -> bool {
    let w = sigma.word();
    let n = w.len();
    (2..n).any(|len| {
        (0..=n - len).any(|s| {
            let b = &w[s..s + len];
            b.iter().max().unwrap() - b.iter().min().unwrap() + 1 == len
        })
    })
}

pub fn plus_decomposable(sigma: &Permutation) -> bool {
    let w = sigma.word();
    (1..w.len()).any(|i| w[..i].iter().all(|&a| a <= i))
}

pub fn minus_decomposable(sigma: &Permutation) -> bool {
    let w = sigma.word();
    let n = w.len();
    (1..n).any(|i| w[..i].iter().all(|&a| a > n - i))
}
