//! Sorting operators as formulas. Each operator rearranges the points of a
//! permutation; its output positional order is defined by a formula in the
//! input's two orders, and replacing `<P` by that formula pulls a sentence
//! back along the operator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{signature_of, substitute_ltp, BinaryTemplate, Formula, LogicError, Signature};
use crate::perm::{bubble_sort, queue_bypass_sort, stack_sort, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("unknown sorting operator {0:?} (expected stack, bubble or queue)")]
    UnknownOp(String),
    #[error("at least one operator is required")]
    NoOps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortOp {
    Stack,
    Bubble,
    Queue,
}

impl SortOp {
    pub const ALL: [SortOp; 3] = [SortOp::Stack, SortOp::Bubble, SortOp::Queue];

    pub fn apply(self, sigma: &Permutation) -> Permutation {
        match self {
            SortOp::Stack => stack_sort(sigma),
            SortOp::Bubble => bubble_sort(sigma),
            SortOp::Queue => queue_bypass_sort(sigma),
        }
    }
}

impl fmt::Display for SortOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SortOp::Stack => "stack",
            SortOp::Bubble => "bubble",
            SortOp::Queue => "queue",
        })
    }
}

impl FromStr for SortOp {
    type Err = SortError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "stack" | "s" => Ok(SortOp::Stack),
            "bubble" | "b" => Ok(SortOp::Bubble),
            "queue" | "q" => Ok(SortOp::Queue),
            other => Err(SortError::UnknownOp(other.to_string())),
        }
    }
}

/// Applies the operators left to right.
pub fn apply_all(ops: &[SortOp], sigma: &Permutation) -> Permutation {
    ops.iter().fold(sigma.clone(), |s, op| op.apply(&s))
}

fn lt_p(a: &str, b: &str) -> Formula {
    Formula::lt_p(a, b)
}
fn lt_v(a: &str, b: &str) -> Formula {
    Formula::lt_v(a, b)
}

/// `x` comes before `y` in the output of `op`, as a formula in `x, y`.
pub fn relation_formula(op: SortOp) -> BinaryTemplate {
    let f = match op {
        SortOp::Stack => stack_relation(),
        SortOp::Bubble => bubble_relation(),
        SortOp::Queue => queue_relation(),
    };
    BinaryTemplate::new(f, "x", "y").expect("fixed templates are well formed")
}

// x leaves the stack before y: either x comes first and is smaller or some
// larger z between them pushes it out, or y comes first, x is larger and
// nothing between them pushes y out before x arrives.
fn stack_relation() -> Formula {
    let pushed_out = Formula::exists("z", lt_p("x", "z").and(lt_p("z", "y")).and(lt_v("x", "z")));
    let forward = lt_p("x", "y").and(lt_v("x", "y").or(pushed_out));
    let blocked = Formula::exists("z", lt_p("y", "z").and(lt_p("z", "x")).and(lt_v("y", "z")));
    let backward = lt_p("y", "x").and(lt_v("x", "y")).and(blocked.not());
    forward.or(backward)
}

fn bubble_relation() -> Formula {
    let forward = lt_p("x", "y").and(Formula::exists(
        "z",
        Formula::le_p("z", "y").and(lt_v("x", "z")),
    ));
    let backward = lt_p("y", "x").and(
        Formula::exists("z", Formula::le_p("z", "x").and(lt_v("y", "z"))).not(),
    );
    forward.or(backward)
}

// Building blocks of the queue relation, inlined at every use.
fn phi12(a: &str, b: &str) -> Formula {
    lt_p(a, b).and(lt_v(a, b))
}
fn phi21(a: &str, b: &str) -> Formula {
    lt_p(a, b).and(lt_v(b, a))
}
/// `a` enters the queue: nothing before it is larger.
fn phi_r(a: &str) -> Formula {
    Formula::exists("z", phi21("z", a)).not()
}
/// `a` has left by the time `b` is read: some `w` with `a ≤P w ≤P b` that
/// does not enter the queue and is at least `a` (either `w = a`, or `w`
/// flushes `a` out when it arrives).
fn phi_out(a: &str, b: &str) -> Formula {
    Formula::exists(
        "z",
        Formula::exists(
            "w",
            phi21("z", "w")
                .and(Formula::le_p(a, "w"))
                .and(Formula::le_p("w", b))
                .and(Formula::le_v(a, "w")),
        ),
    )
}

fn queue_relation() -> Formula {
    queue_relation_from(phi_out)
}

// The second clause only speaks about `x <P y`; without that guard
// `out(x, x)` holds for every non-maximum `x` and the relation is reflexive.
fn queue_relation_from(out: fn(&str, &str) -> Formula) -> Formula {
    phi12("x", "y")
        .or(lt_p("x", "y").and(out("x", "y")))
        .or(phi_r("y").and(out("y", "x").not()).and(phi21("y", "x")))
}

/// `∀x ∀y (x <P y ↔ x <V y)`.
pub fn identity_sentence() -> Formula {
    Formula::forall("x", Formula::forall("y", lt_p("x", "y").iff(lt_v("x", "y"))))
}

/// A sentence whose models are the permutations that `op` maps to models of
/// `phi`.
pub fn compile_preimage(op: SortOp, phi: &Formula) -> Result<Formula, SortError> {
    let found = signature_of(phi)?;
    if found != Signature::TO {
        return Err(LogicError::SignatureMismatch {
            expected: Signature::TO,
            found,
        }
        .into());
    }
    Ok(substitute_ltp(phi, &relation_formula(op))?)
}

/// Sentence for `{σ : ops[last](… ops[0](σ) …) = id}`. The operators are
/// applied left to right, so the preimages are taken right to left.
pub fn compile_sortable(ops: &[SortOp]) -> Result<Formula, SortError> {
    if ops.is_empty() {
        return Err(SortError::NoOps);
    }
    ops.iter()
        .rev()
        .try_fold(identity_sentence(), |acc, &op| compile_preimage(op, &acc))
}

/// Reads the order defined by `op`'s relation on `σ` and returns the
/// induced word, or `None` if the relation is not a strict total order.
pub fn sort_by_relation(op: SortOp, sigma: &Permutation) -> Option<Permutation> {
    let t = relation_formula(op);
    let c = crate::eval::Compiled::new(t.formula()).expect("TO template");
    // parameters are sorted by name: x, y
    let n = sigma.len();
    let mut session = c.session(sigma);
    let mut before = vec![vec![false; n]; n];
    for (i, row) in before.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = session.eval_positions(&[i + 1, j + 1]);
        }
    }
    for i in 0..n {
        if before[i][i] {
            return None;
        }
        for j in 0..n {
            if i != j && before[i][j] == before[j][i] {
                return None;
            }
            for k in 0..n {
                if before[i][j] && before[j][k] && !before[i][k] {
                    return None;
                }
            }
        }
    }
    // rank = number of points before it
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (0..n).filter(|&j| before[j][i]).count());
    let word: Vec<usize> = order.iter().map(|&i| sigma.word()[i]).collect();
    Permutation::from_one_line(word).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::models;
    use crate::logic::qdepth;
    use crate::parser::parse;
    use crate::perm::enumerate_sn;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn relation_shapes() {
        assert_eq!(
            *relation_formula(SortOp::Stack).formula(),
            parse(
                "(x <P y & (x <V y | E z . (x <P z & z <P y & x <V z))) \
                 | (y <P x & x <V y & !(E z . (y <P z & z <P x & y <V z)))"
            )
            .unwrap()
        );
        assert_eq!(
            *relation_formula(SortOp::Bubble).formula(),
            parse(
                "(x <P y & E z . ((z <P y | z = y) & x <V z)) \
                 | (y <P x & !(E z . ((z <P x | z = x) & y <V z)))"
            )
            .unwrap()
        );
        assert_eq!(
            *relation_formula(SortOp::Queue).formula(),
            parse(
                "(x <P y & x <V y) \
                 | (x <P y & E z . E w . ((z <P w & w <V z) & (x <P w | x = w) & (w <P y | w = y) & (x <V w | x = w))) \
                 | (!(E z . (z <P y & y <V z)) \
                    & !(E z . E w . ((z <P w & w <V z) & (y <P w | y = w) & (w <P x | w = x) & (y <V w | y = w))) \
                    & (y <P x & x <V y))"
            )
            .unwrap()
        );
    }

    #[test]
    fn relations_sort_like_the_devices() {
        for n in 0..=5 {
            for s in enumerate_sn(n).unwrap() {
                for op in SortOp::ALL {
                    assert_eq!(sort_by_relation(op, &s), Some(op.apply(&s)), "{op} on {s}");
                }
            }
        }
    }

    #[test]
    fn release_needs_a_larger_element() {
        // Without `a ≤V w`, a smaller element read later would count as
        // flushing `a`; on 21 that puts 2 before 1.
        fn loose_out(a: &str, b: &str) -> Formula {
            Formula::exists(
                "z",
                Formula::exists(
                    "w",
                    phi21("z", "w").and(Formula::le_p(a, "w")).and(Formula::le_p("w", b)),
                ),
            )
        }
        let loose = BinaryTemplate::new(queue_relation_from(loose_out), "x", "y").unwrap();
        let c = crate::eval::Compiled::new(loose.formula()).unwrap();
        let s = p("21");
        assert!(c.eval_positions(&s, &[1, 2]));
        assert_eq!(SortOp::Queue.apply(&s), p("12"));
        assert_eq!(sort_by_relation(SortOp::Queue, &s), Some(p("12")));
    }

    #[test]
    fn identity_sentence_facts() {
        let id = identity_sentence();
        assert_eq!(qdepth(&id), 2);
        assert_eq!(models(&id, 5).unwrap(), vec![p("12345")]);
        assert_eq!(models(&id, 0).unwrap(), vec![Permutation::empty()]);
    }

    #[test]
    fn stack_preimage_at_three() {
        let f = compile_preimage(SortOp::Stack, &identity_sentence()).unwrap();
        let expected: Vec<Permutation> = enumerate_sn(3).unwrap().filter(|s| *s != p("231")).collect();
        assert_eq!(models(&f, 3).unwrap(), expected);
        let taut = parse("A x . x = x").unwrap();
        for op in SortOp::ALL {
            assert_eq!(models(&compile_preimage(op, &taut).unwrap(), 3).unwrap().len(), 6);
        }
    }

    #[test]
    fn sortable_depth_grows_by_one() {
        for k in 1..=3 {
            let f = compile_sortable(&vec![SortOp::Stack; k]).unwrap();
            assert_eq!(qdepth(&f), 2 + k);
        }
        assert_eq!(compile_sortable(&[]), Err(SortError::NoOps));
        assert!(compile_preimage(SortOp::Stack, &parse("A x . x R x").unwrap()).is_err());
    }

    #[test]
    fn op_names() {
        assert_eq!("Stack".parse::<SortOp>().unwrap(), SortOp::Stack);
        assert_eq!("queue".parse::<SortOp>().unwrap(), SortOp::Queue);
        assert!("heap".parse::<SortOp>().is_err());
        assert_eq!(apply_all(&[SortOp::Stack, SortOp::Stack], &p("231")), p("123"));
    }
}
