//! Operational sorting devices. Each reads the word left to right and
//! returns the output word.

use std::collections::VecDeque;

use super::Permutation;

/// One pass through a stack: before pushing `x`, pop every smaller top.
pub fn stack_sort(sigma: &Permutation) -> Permutation {
    let mut stack: Vec<usize> = Vec::new();
    let mut out = Vec::with_capacity(sigma.len());
    for &x in sigma.word() {
        while let Some(&top) = stack.last() {
            if top < x {
                out.push(top);
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(x);
    }
    while let Some(top) = stack.pop() {
        out.push(top);
    }
    Permutation::from_word_unchecked(out)
}

/// One pass of bubble sort: a one-element buffer that always emits the
/// smaller of its content and the incoming entry.
pub fn bubble_sort(sigma: &Permutation) -> Permutation {
    let mut out = Vec::with_capacity(sigma.len());
    let mut buffer: Option<usize> = None;
    for &x in sigma.word() {
        match buffer {
            None => buffer = Some(x),
            Some(b) if b < x => {
                out.push(b);
                buffer = Some(x);
            }
            Some(_) => out.push(x),
        }
    }
    out.extend(buffer);
    Permutation::from_word_unchecked(out)
}

/// One pass through a queue with a bypass. An entry larger than every queued
/// entry joins the queue; an entry smaller than the front bypasses it;
/// otherwise the queued entries below it are released first.
pub fn queue_bypass_sort(sigma: &Permutation) -> Permutation {
    let mut out = Vec::with_capacity(sigma.len());
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &x in sigma.word() {
        if queue.back().is_none_or(|&last| x > last) {
            queue.push_back(x);
            continue;
        }
        if queue.front().is_some_and(|&first| x < first) {
            out.push(x);
            continue;
        }
        while queue.front().is_some_and(|&first| first < x) {
            out.push(queue.pop_front().unwrap());
        }
        if queue.is_empty() {
            queue.push_back(x);
        } else {
            out.push(x);
        }
    }
    out.extend(queue);
    Permutation::from_word_unchecked(out)
}
