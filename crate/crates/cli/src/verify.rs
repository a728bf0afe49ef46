use std::time::Instant;

use permlogic::cycles::{
    fixed_point_formula, toob_cycle_type, toob_cycle_type_padded, toto_cycle_type_capped,
    toto_cycle_type_padded_capped, transposition_formula, ObstructionBounds,
};
use permlogic::ef::{duplicator_wins_with, EfLimits};
use permlogic::eval::{models_capped, Compiled};
use permlogic::marginals::{
    cycle_decompose, cycle_matrix, enumerate_balanced, expansion, expansion_occurrence, has_matching_marginals,
    recompose, region_matrix, CycleSeq,
};
use permlogic::patterns::{compile_contains, compile_minus_decomposable, compile_plus_decomposable, compile_simple};
use permlogic::sorting::{compile_sortable, sort_by_relation, SortOp};
use permlogic::{parse, print, Formula, Partition, Permutation};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::oracle;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const SUITES: [&str; 8] = ["sortable", "relations", "patterns", "cycletype", "marginals", "counting", "ef", "parser"];

// Per-suite ceilings on n beyond the configured one.
const PATTERN_N: usize = 7;
const CYCLE_N: usize = 6;
const MARGINAL_N: usize = 6;
const COUNTING_N: usize = 7;

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<Failure>,
}

impl Tally {
    fn check(&mut self, ok: bool, input: impl FnOnce() -> String, expected: impl ToString, got: impl ToString) {
        self.cases += 1;
        if !ok {
            self.failures.push(Failure {
                input: input(),
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    }

    fn absorb(&mut self, cases: usize, failures: Vec<Failure>) {
        self.cases += cases;
        self.failures.extend(failures);
    }

    fn error(&mut self, input: impl Into<String>, e: impl ToString) {
        self.check(false, || input.into(), "no error", e);
    }
}

// Parallel pointwise comparison over S_n with ordered failures.
fn compare_over<F>(n: usize, f: F) -> (usize, Vec<Failure>)
where
    F: Fn(&Permutation) -> Option<Failure> + Sync,
{
    let perms = oracle::all_perms(n);
    let failures = perms.par_iter().filter_map(&f).collect();
    (perms.len(), failures)
}

pub fn run_suite(name: &str, ops: Option<&[SortOp]>, cfg: &Config) -> Result<Vec<Report>, CliError> {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut timed = |suite: String, t: Tally, from: Instant| {
        out.push(Report {
            suite,
            cases: t.cases,
            failures: t.failures,
            elapsed_ms: from.elapsed().as_millis() as u64,
        })
    };
    match name {
        "sortable" => match ops {
            Some(ops) => timed(sortable_name(ops), sortable(ops, cfg)?, start),
            None => {
                for ops in default_op_lists() {
                    let s = Instant::now();
                    timed(sortable_name(&ops), sortable(&ops, cfg)?, s);
                }
            }
        },
        "relations" => timed(name.into(), relations(cfg), start),
        "patterns" => timed(name.into(), patterns(cfg), start),
        "cycletype" => timed(name.into(), cycletype(cfg), start),
        "marginals" => timed(name.into(), marginals(cfg), start),
        "counting" => timed(name.into(), counting(cfg), start),
        "ef" => timed(name.into(), ef(cfg), start),
        "parser" => timed(name.into(), parser(cfg), start),
        "all" => {
            for s in SUITES {
                out.extend(run_suite(s, if s == "sortable" { ops } else { None }, cfg)?);
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite `{other}`; expected one of {} or all",
                SUITES.join(", ")
            )))
        }
    }
    Ok(out)
}

fn default_op_lists() -> Vec<Vec<SortOp>> {
    vec![
        vec![SortOp::Stack],
        vec![SortOp::Stack, SortOp::Stack],
        vec![SortOp::Bubble],
        vec![SortOp::Queue],
    ]
}

fn sortable_name(ops: &[SortOp]) -> String {
    let names: Vec<String> = ops.iter().map(|o| o.to_string()).collect();
    format!("sortable[{}]", names.join(","))
}

fn device(op: SortOp) -> fn(&[usize]) -> Vec<usize> {
    match op {
        SortOp::Stack => oracle::stack_pass,
        SortOp::Bubble => oracle::bubble_pass,
        SortOp::Queue => oracle::queue_pass,
    }
}

fn sortable(ops: &[SortOp], cfg: &Config) -> Result<Tally, CliError> {
    let phi = compile_sortable(ops).map_err(|e| CliError::Usage(e.to_string()))?;
    let c = Compiled::new(&phi).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut t = Tally::default();
    for n in 1..=cfg.max_n {
        let (cases, fails) = compare_over(n, |s| {
            let mut w = s.word().to_vec();
            for &op in ops {
                w = device(op)(&w);
            }
            let want = oracle::is_sorted(&w);
            let got = c.holds(s);
            (want != got).then(|| Failure {
                input: s.to_string(),
                expected: want.to_string(),
                got: got.to_string(),
            })
        });
        t.absorb(cases, fails);
    }
    Ok(t)
}

fn relations(cfg: &Config) -> Tally {
    let mut t = Tally::default();
    for op in SortOp::ALL {
        for n in 0..=cfg.max_n.min(PATTERN_N) {
            let (cases, fails) = compare_over(n, |s| {
                let want = Permutation::from_one_line(device(op)(s.word())).expect("devices permute");
                let got = sort_by_relation(op, s);
                (got.as_ref() != Some(&want)).then(|| Failure {
                    input: format!("{op} {s}"),
                    expected: want.to_string(),
                    got: got.map_or("no total order".into(), |g| g.to_string()),
                })
            });
            t.absorb(cases, fails);
        }
    }
    t
}

fn patterns(cfg: &Config) -> Tally {
    let mut t = Tally::default();
    // label, sentence, oracle, pattern handed to the oracle
    type Case = (String, Formula, fn(&Permutation, &Permutation) -> bool, Permutation);
    let mut sentences: Vec<Case> = Vec::new();
    for k in 1..=3 {
        for pi in oracle::all_perms(k) {
            match compile_contains(&pi) {
                Ok(f) => sentences.push((format!("contains {pi}"), f, oracle::contains, pi)),
                Err(e) => t.error(format!("contains {pi}"), e),
            }
        }
    }
    let nothing = Permutation::empty();
    sentences.push(("simple".into(), compile_simple(), |s, _| !oracle::has_interval(s), nothing.clone()));
    sentences.push(("plus".into(), compile_plus_decomposable(), |s, _| oracle::plus_decomposable(s), nothing.clone()));
    sentences.push(("minus".into(), compile_minus_decomposable(), |s, _| oracle::minus_decomposable(s), nothing));
    for (label, f, want, pi) in &sentences {
        let c = match Compiled::new(f) {
            Ok(c) => c,
            Err(e) => {
                t.error(label.clone(), e);
                continue;
            }
        };
        for n in 0..=cfg.max_n.min(PATTERN_N) {
            let (cases, fails) = compare_over(n, |s| {
                let (w, g) = (want(s, pi), c.holds(s));
                (w != g).then(|| Failure {
                    input: format!("{label} on {s}"),
                    expected: w.to_string(),
                    got: g.to_string(),
                })
            });
            t.absorb(cases, fails);
        }
    }
    t
}

fn cycletype(cfg: &Config) -> Tally {
    let mut t = Tally::default();
    let cap = 6;
    for lam in oracle::partitions_upto(4) {
        let l = Partition::new(lam.clone());
        let built = [
            ("toto", false, toto_cycle_type_capped(&l, cap).map_err(|e| e.to_string())),
            ("toto", true, toto_cycle_type_padded_capped(&l, cap).map_err(|e| e.to_string())),
            ("toob", false, Ok(toob_cycle_type(&l))),
            ("toob", true, Ok(toob_cycle_type_padded(&l))),
        ];
        for (theory, padded, f) in built {
            let label = format!("{theory} {}{lam:?}", if padded { "padded " } else { "" });
            let c = match f.and_then(|f| Compiled::new(&f).map_err(|e| e.to_string())) {
                Ok(c) => c,
                Err(e) => {
                    t.error(label, e);
                    continue;
                }
            };
            for n in 0..=cfg.max_n.min(CYCLE_N) {
                let (cases, fails) = compare_over(n, |s| {
                    let want = if padded { oracle::has_padded_type(s, &lam) } else { oracle::has_type(s, &lam) };
                    let got = c.holds(s);
                    (want != got).then(|| Failure {
                        input: format!("{label} on {s}"),
                        expected: want.to_string(),
                        got: got.to_string(),
                    })
                });
                t.absorb(cases, fails);
            }
        }
    }
    t
}

fn marginals(cfg: &Config) -> Tally {
    let mut t = Tally::default();
    for n in 0..=cfg.max_n.min(MARGINAL_N) {
        for s in oracle::all_perms(n) {
            for k in 1..=3.min(n) {
                for occ in oracle::combinations(n, k) {
                    let vals: Vec<usize> = occ.iter().map(|&q| s.word()[q - 1]).collect();
                    let pi = Permutation::from_ranks(&vals);
                    let want = oracle::is_stable(&s, &pi, &occ);
                    match region_matrix(&s, &occ) {
                        Ok(a) => {
                            let got = has_matching_marginals(&a);
                            t.check(want == got, || format!("{s} at {occ:?}"), want, got);
                        }
                        Err(e) => t.error(format!("{s} at {occ:?}"), e),
                    }
                }
            }
        }
    }
    for m in 1..=3 {
        match enumerate_balanced(m, 4, cfg.matrix_cap) {
            Ok(all) => {
                for a in all {
                    let back = cycle_decompose(&a).and_then(|d| recompose(&d, m));
                    let ok = back.as_ref() == Ok(&a);
                    t.check(ok, || format!("decompose {:?}", a.rows), format!("{:?}", a.rows), format!("{back:?}"));
                }
            }
            Err(e) => t.error(format!("enumerate m = {m}"), e),
        }
    }
    for k in 1..=2 {
        for pi in oracle::all_perms(k) {
            for len in 2..=k + 1 {
                for set in oracle::combinations(k + 1, len) {
                    for order in oracle::all_perms(len) {
                        let seq: Vec<usize> = order.word().iter().map(|&i| set[i - 1]).collect();
                        if seq[0] != set[0] {
                            continue;
                        }
                        let cyc = CycleSeq::new(seq).expect("distinct entries");
                        let label = format!("E({pi},{cyc})");
                        let r = expansion(&pi, &cyc).and_then(|e| {
                            let occ = expansion_occurrence(&pi, &cyc)?;
                            Ok((oracle::is_stable(&e, &pi, &occ), region_matrix(&e, &occ)?, e.len()))
                        });
                        match (r, cycle_matrix(&cyc, k + 1)) {
                            (Ok((stable, a, size)), Ok(want)) => {
                                let ok = stable && a == want && size == k + cyc.len();
                                t.check(ok, || label, "stable occurrence with the cycle matrix", format!("{:?}", a.rows));
                            }
                            (Err(e), _) | (_, Err(e)) => t.error(label, e),
                        }
                    }
                }
            }
        }
    }
    t
}

fn counting(cfg: &Config) -> Tally {
    let mut t = Tally::default();
    let forms = ObstructionBounds::new(3, 1, 1)
        .and_then(|fb| Ok((fb, ObstructionBounds::new(3, 2, 2)?)))
        .map(|(fb, tb)| (fixed_point_formula(&fb), transposition_formula(&tb)));
    let (fixed, trans) = match forms {
        Ok(f) => f,
        Err(e) => {
            t.error("bounds", e);
            return t;
        }
    };
    let (fc, tc) = match (Compiled::new(&fixed), Compiled::new(&trans)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            t.error("compile", e);
            return t;
        }
    };
    let b321: Permutation = "321".parse().expect("literal");
    let b3412: Permutation = "3412".parse().expect("literal");
    for n in 1..=cfg.max_n.min(COUNTING_N) {
        for s in oracle::all_perms(n) {
            if oracle::contains(&s, &b321) {
                continue;
            }
            let w = s.word();
            let mut sess = fc.session(&s);
            for i in 1..=n {
                let (want, got) = (w[i - 1] == i, sess.eval_positions(&[i]));
                t.check(want == got, || format!("fixed point {s} at {i}"), want, got);
            }
            if oracle::contains(&s, &b3412) {
                continue;
            }
            let mut sess = tc.session(&s);
            for i in 1..=n {
                for j in 1..=n {
                    let want = i != j && w[i - 1] == j && w[j - 1] == i;
                    let got = sess.eval_positions(&[i, j]);
                    t.check(want == got, || format!("transposition {s} at ({i},{j})"), want, got);
                }
            }
        }
    }
    t
}

// Linear orders of sizes m and n agree to depth k exactly when m = n or
// both have at least 2^k - 1 points.
fn ef(cfg: &Config) -> Tally {
    let mut t = Tally::default();
    let limits = EfLimits {
        max_rounds: cfg.max_ef_k,
        ..EfLimits::default()
    };
    for k in 0..=cfg.max_ef_k.min(3) {
        let top = (1usize << k) + 2;
        for m in 0..=top {
            for n in 0..=top {
                let threshold = (1usize << k) - 1;
                let want = m == n || (m >= threshold && n >= threshold);
                for (label, a, b) in [
                    ("inc", Permutation::increasing(m), Permutation::increasing(n)),
                    ("dec", Permutation::decreasing(m), Permutation::decreasing(n)),
                ] {
                    match duplicator_wins_with(&a, &b, k, limits) {
                        Ok(got) => t.check(want == got, || format!("{label}_{m} vs {label}_{n}, k = {k}"), want, got),
                        Err(e) => t.error(format!("{label}_{m} vs {label}_{n}, k = {k}"), e),
                    }
                }
            }
        }
    }
    t
}

fn parser(cfg: &Config) -> Tally {
    let mut t = Tally::default();
    let mut formulas: Vec<(String, Formula)> = Vec::new();
    for ops in default_op_lists() {
        if let Ok(f) = compile_sortable(&ops) {
            formulas.push((sortable_name(&ops), f));
        }
    }
    for k in 1..=3 {
        for pi in oracle::all_perms(k) {
            if let Ok(f) = compile_contains(&pi) {
                formulas.push((format!("contains {pi}"), f));
            }
        }
    }
    formulas.push(("simple".into(), compile_simple()));
    formulas.push(("plus".into(), compile_plus_decomposable()));
    formulas.push(("minus".into(), compile_minus_decomposable()));
    for lam in oracle::partitions_upto(3) {
        let l = Partition::new(lam.clone());
        formulas.push((format!("toob {lam:?}"), toob_cycle_type_padded(&l)));
        if let Ok(f) = toto_cycle_type_padded_capped(&l, 6) {
            formulas.push((format!("toto {lam:?}"), f));
        }
    }
    if let Ok(b) = ObstructionBounds::new(3, 2, 2) {
        formulas.push(("fixed point".into(), fixed_point_formula(&b)));
        formulas.push(("transposition".into(), transposition_formula(&b)));
    }
    for (label, f) in formulas {
        let text = print(&f);
        let back = parse(&text);
        let ok = back.as_ref() == Ok(&f);
        t.check(ok, || label, text.clone(), back.map_or_else(|e| e.to_string(), |g| print(&g)));
    }
    // models are enumerated through the parsed text as well
    if let Ok(f) = compile_sortable(&[SortOp::Stack]).map(|f| print(&f)) {
        for n in 1..=cfg.max_n.min(6) {
            let reparsed = parse(&f).map_err(|e| e.to_string());
            let got = reparsed.and_then(|g| models_capped(&g, n, cfg.max_n).map_err(|e| e.to_string()));
            let want: Vec<Permutation> = oracle::all_perms(n)
                .into_iter()
                .filter(|s| !oracle::contains(s, &"231".parse().expect("literal")))
                .collect();
            let ok = got.as_ref() == Ok(&want);
            t.check(ok, || format!("models of reparsed stack sentence, n = {n}"), want.len(), format!("{:?}", got.map(|g| g.len())));
        }
    }
    t
}
