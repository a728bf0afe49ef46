use super::{PermError, Permutation};

/// Default enumeration ceiling (9! ≈ 363k words).
pub const DEFAULT_MAX_N: usize = 9;

/// Lexicographic iterator over `S_n`, driven by the classic next-permutation
/// step.
#[derive(Debug, Clone)]
pub struct SymmetricGroup {
    current: Option<Vec<usize>>,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Self {
        SymmetricGroup {
            current: Some((1..=n).collect()),
        }
    }
}

impl Iterator for SymmetricGroup {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let word = self.current.take()?;
        let mut succ = word.clone();
        if next_lex(&mut succ) {
            self.current = Some(succ);
        }
        Some(Permutation::from_word_unchecked(word))
    }
}

fn next_lex(w: &mut [usize]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

pub fn enumerate_sn(n: usize) -> Result<SymmetricGroup, PermError> {
    enumerate_sn_capped(n, DEFAULT_MAX_N)
}

pub fn enumerate_sn_capped(n: usize, cap: usize) -> Result<SymmetricGroup, PermError> {
    if n > cap {
        return Err(PermError::SizeCapExceeded { n, cap });
    }
    Ok(SymmetricGroup::new(n))
}
