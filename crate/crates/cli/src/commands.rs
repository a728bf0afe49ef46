use std::collections::BTreeSet;

use clap::Subcommand;
use permlogic::cycles::{
    cycle_formula, fixed_point_formula, stable_occurrence_formula, toob_cycle_type, toob_cycle_type_padded,
    toob_has_kcycle, toto_characteristic_sentence, toto_cycle_type, toto_cycle_type_padded, transposition_formula,
    ObstructionBounds,
};
use permlogic::ef::{distinguishing_depth_with, duplicator_wins_marked_with, duplicator_wins_with, EfLimits};
use permlogic::eval::{count_models_capped, models_capped, Assignment};
use permlogic::logic::{free_vars, qdepth, OpenFormula};
use permlogic::marginals::{
    cycle_decompose, expansion, expansion_inflated, expansion_occurrence, has_matching_marginals, region_matrix,
    CycleSeq, RegionMatrix,
};
use permlogic::patterns::{
    compile_avoids, compile_barred, compile_classical, compile_contains, compile_decorated, compile_grid,
    compile_interval, compile_mesh, compile_minus_decomposable, compile_plus_decomposable, compile_simple,
    BarredPattern, Constraint, DecoratedPattern, GridEntry, GridSpec, MeshPattern,
};
use permlogic::sorting::{apply_all, compile_preimage, compile_sortable, SortOp};
use permlogic::{parse, print, Formula, Partition, Permutation, Point, Var};
use serde_json::json;

use crate::verify::{run_suite, Report};
use crate::{usage, CliError, Ctx, Outcome, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub(crate) enum Theory {
    Toto,
    Toob,
}

#[derive(Debug, Subcommand)]
pub(crate) enum CompileKind {
    /// Sentence for "sorted by the operators applied left to right".
    Sortable {
        #[arg(long, value_delimiter = ',', required = true)]
        ops: Vec<String>,
    },
    /// Sentence true of σ exactly when the given sentence holds of op(σ).
    Preimage {
        #[arg(long)]
        op: String,
        #[command(flatten)]
        src: Source,
    },
    /// Containment of a classical pattern (`--open` for the occurrence formula).
    Pattern {
        #[arg(long)]
        pattern: Permutation,
        #[arg(long)]
        open: bool,
    },
    /// Avoidance of every pattern in a comma-separated basis.
    Avoid {
        #[arg(long, value_delimiter = ',', required = true)]
        basis: Vec<Permutation>,
    },
    /// Mesh pattern; shading is JSON `[[col,row],...]`.
    Mesh {
        #[arg(long)]
        pattern: Permutation,
        #[arg(long)]
        shading: String,
    },
    /// Barred pattern; `--barred` lists 1-based positions.
    Barred {
        #[arg(long)]
        pattern: Permutation,
        #[arg(long, value_delimiter = ',', required = true)]
        barred: Vec<usize>,
    },
    /// Decorated pattern; constraints are JSON
    /// `[{"cells":[[col,row]],"forbidden":"21"},...]`.
    Decorated {
        #[arg(long)]
        pattern: Permutation,
        #[arg(long)]
        constraints: String,
    },
    /// Grid class; JSON rows top to bottom, each entry a basis list such as
    /// `["21"]` or `null` for an empty cell.
    Grid {
        #[arg(long)]
        grid: String,
    },
    /// Simple permutations.
    Simple,
    /// Sum-decomposable permutations.
    Plus,
    /// Skew-decomposable permutations.
    Minus,
    /// Permutations with a proper interval.
    Interval,
    /// Cycle type, exactly or padded with fixed points.
    Cycletype {
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long, value_enum, default_value = "toto")]
        theory: Theory,
        #[arg(long)]
        padded: bool,
    },
    /// One-relation sentence for "has a k-cycle".
    Kcycle {
        #[arg(long)]
        k: usize,
    },
    /// Sentence satisfied by exactly one permutation.
    Characteristic {
        #[arg(long)]
        perm: Permutation,
    },
    /// Fixed points inside a class with the given obstruction bounds.
    Fixedpoint {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Transpositions inside a class with the given obstruction bounds.
    Transposition {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Stable occurrences of a pattern with at most `bound` points outside.
    Stable {
        #[arg(long)]
        pattern: Permutation,
        #[arg(long)]
        bound: usize,
    },
    /// Stable k-cycles with at most `bound` points outside.
    Cycle {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        bound: usize,
    },
}

fn read_formula(ctx: &mut Ctx, src: &Source) -> Result<Formula, CliError> {
    let text = match (&src.sentence, &src.file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => {
            std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?
        }
        (None, None) => {
            let mut s = String::new();
            ctx.stdin.read_to_string(&mut s).map_err(usage)?;
            s
        }
    };
    parse(&text).map_err(|e| usage(format!("formula: {e}")))
}

fn positions(list: &str) -> Result<Vec<usize>, CliError> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|t| t.trim().parse().map_err(|_| usage(format!("`{t}` is not a position"))))
        .collect()
}

fn points(sigma: &Permutation, list: &str) -> Result<Vec<Point>, CliError> {
    positions(list)?.into_iter().map(|q| sigma.point(q).map_err(usage)).collect()
}

fn ops(names: &[String]) -> Result<Vec<SortOp>, CliError> {
    names.iter().map(|s| s.parse::<SortOp>().map_err(usage)).collect()
}

fn assignment(sigma: &Permutation, list: &str) -> Result<Assignment, CliError> {
    let mut a = Assignment::new();
    for part in list.split(',').filter(|t| !t.trim().is_empty()) {
        let (name, pos) = part
            .split_once('=')
            .ok_or_else(|| usage(format!("`{part}` is not of the form var=position")))?;
        let q: usize = pos.trim().parse().map_err(|_| usage(format!("`{pos}` is not a position")))?;
        a.insert(Var::new(name.trim()), sigma.point(q).map_err(usage)?);
    }
    Ok(a)
}

pub(crate) fn eval(ctx: &mut Ctx, src: &Source, sigma: &Permutation, assign: Option<&str>) -> Result<Outcome, CliError> {
    let phi = read_formula(ctx, src)?;
    let a = match assign {
        Some(s) => assignment(sigma, s)?,
        None => Assignment::new(),
    };
    let v = permlogic::eval(sigma, &phi, &a).map_err(usage)?;
    Ok(Outcome::answer(v, v.to_string(), json!({ "permutation": sigma, "value": v })))
}

pub(crate) fn models(ctx: &mut Ctx, src: &Source, n: usize, list: bool) -> Result<Outcome, CliError> {
    let phi = read_formula(ctx, src)?;
    let cap = ctx.cfg.max_n;
    if n > cap {
        return Err(usage(format!("n = {n} exceeds max_n = {cap}; raise it with --max-n")));
    }
    if !list {
        let count = count_models_capped(&phi, n, cap).map_err(usage)?;
        return Ok(Outcome::ok(count.to_string(), json!({ "n": n, "count": count })));
    }
    let ms = models_capped(&phi, n, cap).map_err(usage)?;
    let text: Vec<String> = ms.iter().map(|s| s.to_string()).collect();
    Ok(Outcome::ok(
        text.join("\n"),
        json!({ "n": n, "count": ms.len(), "models": text }),
    ))
}

pub(crate) fn ef(
    ctx: &mut Ctx,
    a: &Permutation,
    b: &Permutation,
    k: usize,
    marks: Option<(&str, &str)>,
    max_size: Option<usize>,
) -> Result<Outcome, CliError> {
    let limits = EfLimits {
        max_rounds: ctx.cfg.max_ef_k,
        max_total_size: max_size.unwrap_or(EfLimits::default().max_total_size),
    };
    let (wins, depth) = match marks {
        Some((m1, m2)) => {
            let (pa, pb) = (points(a, m1)?, points(b, m2)?);
            (duplicator_wins_marked_with(a, &pa, b, &pb, k, limits).map_err(usage)?, None)
        }
        None => {
            let w = duplicator_wins_with(a, b, k, limits).map_err(usage)?;
            let d = if w { None } else { distinguishing_depth_with(a, b, k, limits).map_err(usage)? };
            (w, d)
        }
    };
    let text = if wins { "duplicator" } else { "spoiler" };
    Ok(Outcome::answer(
        wins,
        text,
        json!({ "k": k, "duplicator_wins": wins, "distinguishing_depth": depth }),
    ))
}

fn formula_outcome(f: &Formula, designated: Option<&[Var]>) -> Outcome {
    let free: Vec<String> = match designated {
        Some(vs) => vs.iter().map(|v| v.name().to_string()).collect(),
        None => free_vars(f).iter().map(|v| v.name().to_string()).collect(),
    };
    let text = print(f);
    Outcome::ok(
        text.clone(),
        json!({ "formula": text, "free": free, "qdepth": qdepth(f) }),
    )
}

fn open_outcome(o: &OpenFormula, close: bool) -> Outcome {
    if close {
        formula_outcome(&o.close_exists(), Some(&[]))
    } else {
        formula_outcome(&o.formula, Some(&o.vars))
    }
}

fn json_arg<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| usage(format!("{what}: {e}")))
}

fn bounds(k: usize, m: usize, n: usize) -> Result<ObstructionBounds, CliError> {
    ObstructionBounds::new(k, m, n).map_err(usage)
}

pub(crate) fn compile(ctx: &mut Ctx, kind: CompileKind, close: bool) -> Result<Outcome, CliError> {
    use CompileKind as K;
    let cap = ctx.cfg.matrix_cap;
    let f = match kind {
        K::Sortable { ops: names } => compile_sortable(&ops(&names)?).map_err(usage)?,
        K::Preimage { op, src } => {
            let op: SortOp = op.parse().map_err(usage)?;
            let phi = read_formula(ctx, &src)?;
            compile_preimage(op, &phi).map_err(usage)?
        }
        K::Pattern { pattern, open } => {
            if open {
                return Ok(open_outcome(&compile_classical(&pattern).map_err(usage)?, close));
            }
            compile_contains(&pattern).map_err(usage)?
        }
        K::Avoid { basis } => compile_avoids(&basis).map_err(usage)?,
        K::Mesh { pattern, shading } => {
            let cells: Vec<(usize, usize)> = json_arg("shading", &shading)?;
            let mp = MeshPattern {
                pattern,
                shaded: cells.into_iter().collect(),
            };
            return Ok(open_outcome(&compile_mesh(&mp).map_err(usage)?, close));
        }
        K::Barred { pattern, barred } => {
            let bp = BarredPattern {
                pattern,
                barred: barred.into_iter().collect::<BTreeSet<_>>(),
            };
            return Ok(open_outcome(&compile_barred(&bp).map_err(usage)?, close));
        }
        K::Decorated { pattern, constraints } => {
            let cs: Vec<Constraint> = json_arg("constraints", &constraints)?;
            let dp = DecoratedPattern {
                pattern,
                constraints: cs,
            };
            return Ok(open_outcome(&compile_decorated(&dp).map_err(usage)?, close));
        }
        K::Grid { grid } => {
            let rows: Vec<Vec<Option<Vec<Permutation>>>> = json_arg("grid", &grid)?;
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|e| e.map_or(GridEntry::Empty, GridEntry::Av)).collect())
                .collect();
            compile_grid(&GridSpec::new(rows).map_err(usage)?).map_err(usage)?
        }
        K::Simple => compile_simple(),
        K::Plus => compile_plus_decomposable(),
        K::Minus => compile_minus_decomposable(),
        K::Interval => compile_interval(),
        K::Cycletype { lambda, theory, padded } => {
            let lam = Partition::new(positions(&lambda)?);
            match (theory, padded) {
                (Theory::Toob, false) => toob_cycle_type(&lam),
                (Theory::Toob, true) => toob_cycle_type_padded(&lam),
                (Theory::Toto, false) => toto_cycle_type(&lam).map_err(usage)?,
                (Theory::Toto, true) => toto_cycle_type_padded(&lam).map_err(usage)?,
            }
        }
        K::Kcycle { k } => toob_has_kcycle(k).map_err(usage)?,
        K::Characteristic { perm } => toto_characteristic_sentence(&perm),
        K::Fixedpoint { k, m, n } => {
            let f = fixed_point_formula(&bounds(k, m, n)?);
            return Ok(open_outcome(&OpenFormula::new(f, vec![Var::new("x")]), close));
        }
        K::Transposition { k, m, n } => {
            let f = transposition_formula(&bounds(k, m, n)?);
            return Ok(open_outcome(&OpenFormula::new(f, vec![Var::new("x"), Var::new("y")]), close));
        }
        K::Stable { pattern, bound } => {
            return Ok(open_outcome(&stable_occurrence_formula(&pattern, bound, cap).map_err(usage)?, close));
        }
        K::Cycle { k, bound } => return Ok(open_outcome(&cycle_formula(k, bound, cap).map_err(usage)?, close)),
    };
    Ok(formula_outcome(&f, None))
}

pub(crate) fn sort(names: &[String], sigma: &Permutation) -> Result<Outcome, CliError> {
    let ops = ops(names)?;
    let out = apply_all(&ops, sigma);
    let names: Vec<String> = ops.iter().map(|o| o.to_string()).collect();
    Ok(Outcome::ok(
        out.to_string(),
        json!({ "input": sigma, "ops": names, "output": out }),
    ))
}

pub(crate) fn stable(pi: &Permutation, sigma: &Permutation) -> Result<Outcome, CliError> {
    if pi.is_empty() {
        return Err(usage("empty pattern"));
    }
    let occs = sigma.stable_occurrences(pi);
    let text: Vec<String> = occs
        .iter()
        .map(|o| o.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    Ok(Outcome::answer(
        !occs.is_empty(),
        text.join("\n"),
        json!({ "pattern": pi, "permutation": sigma, "occurrences": occs }),
    ))
}

pub(crate) fn region(sigma: &Permutation, at: &str) -> Result<Outcome, CliError> {
    let a = region_matrix(sigma, &positions(at)?).map_err(usage)?;
    let balanced = has_matching_marginals(&a);
    Ok(Outcome::ok(
        format!("{a}\nmatching marginals: {}", if balanced { "yes" } else { "no" }),
        json!({ "rows": a.rows, "matching_marginals": balanced }),
    ))
}

pub(crate) fn decompose(ctx: &mut Ctx, matrix: Option<String>) -> Result<Outcome, CliError> {
    let text = match matrix {
        Some(t) => t,
        None => {
            let mut s = String::new();
            ctx.stdin.read_to_string(&mut s).map_err(usage)?;
            s
        }
    };
    let rows: Vec<Vec<usize>> = json_arg("matrix", &text)?;
    let a = RegionMatrix::from_rows(rows).map_err(usage)?;
    match cycle_decompose(&a) {
        Ok(terms) => {
            let lines: Vec<String> = terms.iter().map(|(c, k)| format!("{k} {c}")).collect();
            let js: Vec<_> = terms
                .iter()
                .map(|(c, k)| json!({ "cycle": c.indices(), "coefficient": k }))
                .collect();
            Ok(Outcome::ok(lines.join("\n"), json!({ "balanced": true, "terms": js })))
        }
        Err(e) => Ok(Outcome::answer(
            false,
            format!("not decomposable: {e}"),
            json!({ "balanced": false, "error": e.to_string() }),
        )),
    }
}

pub(crate) fn expand(pi: &Permutation, cycle: &str, inflate: Option<&str>) -> Result<Outcome, CliError> {
    let cyc = CycleSeq::over(positions(cycle)?, pi.len() + 1).map_err(usage)?;
    match inflate {
        Some(list) => {
            let theta: Vec<Permutation> = list
                .split(',')
                .map(|t| t.trim().parse().map_err(usage))
                .collect::<Result<_, _>>()?;
            let e = expansion_inflated(pi, &cyc, &theta).map_err(usage)?;
            Ok(Outcome::ok(e.to_string(), json!({ "permutation": e, "occurrence": null })))
        }
        None => {
            let e = expansion(pi, &cyc).map_err(usage)?;
            let occ = expansion_occurrence(pi, &cyc).map_err(usage)?;
            Ok(Outcome::ok(e.to_string(), json!({ "permutation": e, "occurrence": occ })))
        }
    }
}

fn report_text(reports: &[Report]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("{}: {} cases, {} failures\n", r.suite, r.cases, r.failures.len()));
        for f in r.failures.iter().take(10) {
            out.push_str(&format!("  {}: expected {}, got {}\n", f.input, f.expected, f.got));
        }
        if r.failures.len() > 10 {
            out.push_str(&format!("  ... {} more\n", r.failures.len() - 10));
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    out.push_str(&format!("{passed} of {} suites passed\n", reports.len()));
    out
}

pub(crate) fn verify(ctx: &mut Ctx, suite: &str, op_list: Option<&str>) -> Result<Outcome, CliError> {
    let ops = match op_list {
        Some(list) => Some(ops(&list.split(',').map(str::to_string).collect::<Vec<_>>())?),
        None => None,
    };
    let mut reports = run_suite(suite, ops.as_deref(), &ctx.cfg)?;
    if !ctx.timing {
        for r in &mut reports {
            r.elapsed_ms = 0;
        }
    }
    let ok = reports.iter().all(Report::passed);
    Ok(Outcome::answer(
        ok,
        report_text(&reports),
        json!({ "schema": 1, "reports": reports }),
    ))
}
