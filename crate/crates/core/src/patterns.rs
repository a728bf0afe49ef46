//! Formulas for classical and generalized pattern occurrences, grid classes
//! and substitution-decomposition properties.
//!
//! Cells are indexed `(i, j)` with `0 ≤ i, j ≤ k`: column `i` lies between
//! the `i`-th and `(i+1)`-th chosen points by position, row `j` between the
//! `j`-th and `(j+1)`-th by value. Comparisons against the imaginary points
//! `0` and `k+1` are left out.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{all_vars, FreshSupply, Formula, OpenFormula, Var};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("the pattern must be nonempty")]
    EmptyPattern,
    #[error("the basis must be nonempty")]
    EmptyBasis,
    #[error("cell ({0}, {1}) is outside the pattern's grid")]
    CellOutOfRange(usize, usize),
    #[error("barred position {0} is outside the pattern")]
    BarOutOfRange(usize),
    #[error("at least one element must stay unbarred")]
    AllBarred,
    #[error("constraints must cover exactly one cell, got {0}")]
    UnsupportedConstraint(usize),
    #[error("grid matrix must be rectangular and nonempty")]
    BadGrid,
    #[error("expected {expected} variable names, got {got}")]
    VarCount { expected: usize, got: usize },
    #[error("variable names must be distinct")]
    DuplicateVar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshPattern {
    pub pattern: Permutation,
    pub shaded: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarredPattern {
    pub pattern: Permutation,
    /// 1-based positions of barred entries.
    pub barred: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub cells: Vec<(usize, usize)>,
    pub forbidden: Permutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedPattern {
    pub pattern: Permutation,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridEntry {
    Empty,
    /// `Av(basis)`; an empty basis allows everything.
    Av(Vec<Permutation>),
}

/// A grid matrix, rows listed top to bottom and columns left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub rows: Vec<Vec<GridEntry>>,
}

impl GridSpec {
    pub fn new(rows: Vec<Vec<GridEntry>>) -> Result<Self, PatternError> {
        if rows.is_empty() || rows[0].is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(PatternError::BadGrid);
        }
        Ok(GridSpec { rows })
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    /// Entry at column `c` (from the left) and row `r` (from the bottom),
    /// both 0-based.
    pub fn at(&self, c: usize, r: usize) -> &GridEntry {
        &self.rows[self.height() - 1 - r][c]
    }
}

/// `x1, …, xk`.
pub fn default_vars(k: usize) -> Vec<Var> {
    (1..=k).map(|i| Var::new(format!("x{i}"))).collect()
}

fn check_vars(vars: &[Var], k: usize) -> Result<(), PatternError> {
    if vars.len() != k {
        return Err(PatternError::VarCount {
            expected: k,
            got: vars.len(),
        });
    }
    let set: BTreeSet<&Var> = vars.iter().collect();
    if set.len() != vars.len() {
        return Err(PatternError::DuplicateVar);
    }
    Ok(())
}

/// `ψ_π(x₁, …, x_k)`: the positional chain and the value chain in the
/// order given by `π⁻¹`. For `|π| = 1` this is `x₁ = x₁`.
pub fn compile_classical(pi: &Permutation) -> Result<OpenFormula, PatternError> {
    compile_classical_with(pi, &default_vars(pi.len()))
}

pub fn compile_classical_with(pi: &Permutation, vars: &[Var]) -> Result<OpenFormula, PatternError> {
    if pi.is_empty() {
        return Err(PatternError::EmptyPattern);
    }
    check_vars(vars, pi.len())?;
    Ok(OpenFormula::new(psi(pi, vars), vars.to_vec()))
}

fn psi(pi: &Permutation, vars: &[Var]) -> Formula {
    let by_value: Vec<Var> = pi.inverse().word().iter().map(|&i| vars[i - 1].clone()).collect();
    match (Formula::chain_p(vars), Formula::chain_v(&by_value)) {
        (Some(p), Some(v)) => p.and(v),
        _ => Formula::truth(vars[0].clone()),
    }
}

pub fn compile_contains(pi: &Permutation) -> Result<Formula, PatternError> {
    Ok(compile_classical(pi)?.close_exists())
}

/// Conjunction of `¬contains(β)` over the basis, in the given order.
pub fn compile_avoids(basis: &[Permutation]) -> Result<Formula, PatternError> {
    let parts: Result<Vec<Formula>, PatternError> =
        basis.iter().map(|b| Ok(compile_contains(b)?.not())).collect();
    Formula::conj(parts?).ok_or(PatternError::EmptyBasis)
}

fn check_cell(k: usize, (i, j): (usize, usize)) -> Result<(), PatternError> {
    if i > k || j > k {
        return Err(PatternError::CellOutOfRange(i, j));
    }
    Ok(())
}

// Bounds placing `t` strictly inside cell (i, j) around `vars`, as a
// (positional, value) pair of chains.
pub(crate) fn cell_bounds(
    vars: &[Var],
    by_value: &[Var],
    (i, j): (usize, usize),
    t: &Var,
) -> (Formula, Formula) {
    let k = vars.len();
    let side = |lower: Option<&Var>, upper: Option<&Var>, lt: fn(Var, Var) -> Formula| {
        let mut parts = Vec::new();
        if let Some(lo) = lower {
            parts.push(lt(lo.clone(), t.clone()));
        }
        if let Some(hi) = upper {
            parts.push(lt(t.clone(), hi.clone()));
        }
        Formula::conj(parts).expect("k ≥ 1 leaves at least one comparison")
    };
    fn pick(list: &[Var], idx: usize) -> Option<&Var> {
        (1..=list.len()).contains(&idx).then(|| &list[idx - 1])
    }
    debug_assert_eq!(by_value.len(), k);
    (
        side(pick(vars, i), pick(vars, i + 1), Formula::LtP),
        side(pick(by_value, j), pick(by_value, j + 1), Formula::LtV),
    )
}

fn supply_for(vars: &[Var]) -> FreshSupply {
    FreshSupply::new(vars.iter().cloned().collect())
}

// Local variable name, unless it clashes with the pattern's own names.
fn local_name(preferred: &str, taken: &[Var], supply: &mut FreshSupply) -> Var {
    let v = Var::new(preferred);
    if taken.contains(&v) {
        supply.fresh()
    } else {
        v
    }
}

/// `ψ_π ∧ ⋀_{(i,j) shaded} ¬∃t (t in cell (i,j))`.
pub fn compile_mesh(mp: &MeshPattern) -> Result<OpenFormula, PatternError> {
    compile_mesh_with(mp, &default_vars(mp.pattern.len()))
}

pub fn compile_mesh_with(mp: &MeshPattern, vars: &[Var]) -> Result<OpenFormula, PatternError> {
    let base = compile_classical_with(&mp.pattern, vars)?;
    let k = mp.pattern.len();
    for &cell in &mp.shaded {
        check_cell(k, cell)?;
    }
    let by_value: Vec<Var> = mp.pattern.inverse().word().iter().map(|&i| vars[i - 1].clone()).collect();
    let mut supply = supply_for(vars);
    let t = local_name("t", vars, &mut supply);
    let mut f = base.formula;
    for &cell in &mp.shaded {
        let (p, v) = cell_bounds(vars, &by_value, cell, &t);
        f = f.and(Formula::exists(t.clone(), p.and(v)).not());
    }
    Ok(OpenFormula::new(f, vars.to_vec()))
}

/// Occurrence of the unbarred part that does not extend to an occurrence of
/// the whole pattern: `ψ_ρ(unbarred) ∧ ¬∃(barred) ψ_π(all, interleaved)`.
pub fn compile_barred(bp: &BarredPattern) -> Result<OpenFormula, PatternError> {
    let k = bp.pattern.len();
    let unbarred = k.saturating_sub(bp.barred.len());
    let barred_names: Vec<Var> = (1..=bp.barred.len()).map(|i| Var::new(format!("t{i}"))).collect();
    compile_barred_with(bp, &default_vars(unbarred), &barred_names)
}

pub fn compile_barred_with(
    bp: &BarredPattern,
    unbarred_vars: &[Var],
    barred_vars: &[Var],
) -> Result<OpenFormula, PatternError> {
    let k = bp.pattern.len();
    if k == 0 {
        return Err(PatternError::EmptyPattern);
    }
    if let Some(&b) = bp.barred.iter().find(|&&b| b == 0 || b > k) {
        return Err(PatternError::BarOutOfRange(b));
    }
    if bp.barred.len() == k {
        return Err(PatternError::AllBarred);
    }
    let positions: Vec<usize> = (1..=k).filter(|i| !bp.barred.contains(i)).collect();
    let rho = bp.pattern.pattern_of(&positions).expect("increasing positions");
    let base = compile_classical_with(&rho, unbarred_vars)?;
    if bp.barred.is_empty() {
        return Ok(base);
    }
    check_vars(barred_vars, bp.barred.len())?;
    let everything: Vec<Var> = unbarred_vars.iter().chain(barred_vars).cloned().collect();
    check_vars(&everything, k)?;
    let (mut ub, mut bb) = (unbarred_vars.iter(), barred_vars.iter());
    let interleaved: Vec<Var> = (1..=k)
        .map(|i| {
            if bp.barred.contains(&i) {
                bb.next().unwrap().clone()
            } else {
                ub.next().unwrap().clone()
            }
        })
        .collect();
    let ext = Formula::exists_all(barred_vars.iter().cloned(), psi(&bp.pattern, &interleaved));
    Ok(OpenFormula::new(base.formula.and(ext.not()), unbarred_vars.to_vec()))
}

/// `ψ_π ∧ ⋀ ¬∃t₁…t_r ((positional bounds) ∧ (value bounds) ∧ ψ_ρ(t))` with one
/// conjunct per single-cell constraint `(cell, ρ)`.
pub fn compile_decorated(dp: &DecoratedPattern) -> Result<OpenFormula, PatternError> {
    compile_decorated_with(dp, &default_vars(dp.pattern.len()))
}

pub fn compile_decorated_with(dp: &DecoratedPattern, vars: &[Var]) -> Result<OpenFormula, PatternError> {
    let base = compile_classical_with(&dp.pattern, vars)?;
    let k = dp.pattern.len();
    for c in &dp.constraints {
        if c.cells.len() != 1 {
            return Err(PatternError::UnsupportedConstraint(c.cells.len()));
        }
        check_cell(k, c.cells[0])?;
        if c.forbidden.is_empty() {
            return Err(PatternError::EmptyPattern);
        }
    }
    let by_value: Vec<Var> = dp.pattern.inverse().word().iter().map(|&i| vars[i - 1].clone()).collect();
    let mut f = base.formula;
    for c in &dp.constraints {
        let rho = &c.forbidden;
        let mut supply = supply_for(vars);
        let ts: Vec<Var> = (1..=rho.len())
            .map(|i| local_name(&format!("t{i}"), vars, &mut supply))
            .collect();
        let (ps, vs): (Vec<Formula>, Vec<Formula>) =
            ts.iter().map(|t| cell_bounds(vars, &by_value, c.cells[0], t)).unzip();
        let bounds = Formula::conj(ps).unwrap().and(Formula::conj(vs).unwrap());
        let body = bounds.and(psi(rho, &ts));
        f = f.and(Formula::exists_all(ts, body).not());
    }
    Ok(OpenFormula::new(f, vars.to_vec()))
}

/// Membership in `Grid(M)`.
///
/// Lines of a gridding cannot be quantified directly, so each one is named
/// by the last point before it (positionally for vertical lines, by value
/// for horizontal ones). That point exists only when the band before the
/// line is nonempty, so the sentence is a disjunction over the nonempty sets
/// of occupied column bands and row bands; each branch grids into the
/// corresponding submatrix with all its bands assumed occupied.
pub fn compile_grid(g: &GridSpec) -> Result<Formula, PatternError> {
    let g = GridSpec::new(g.rows.clone())?;
    let (w, h) = (g.width(), g.height());
    let mut branches = Vec::new();
    for cols in nonempty_subsets(w) {
        for rows in nonempty_subsets(h) {
            branches.push(grid_branch(&g, &cols, &rows));
        }
    }
    Ok(Formula::disj(branches).expect("at least one branch"))
}

fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    // largest subsets first, so the full grid comes first
    let mut out: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    out
}

/// One branch of [`compile_grid`]: the submatrix on the given columns (from
/// the left) and rows (from the bottom).
pub fn grid_branch(g: &GridSpec, cols: &[usize], rows: &[usize]) -> Formula {
    let lv: Vec<Var> = (1..cols.len()).map(|i| Var::new(format!("lv{i}"))).collect();
    let lh: Vec<Var> = (1..rows.len()).map(|i| Var::new(format!("lh{i}"))).collect();
    let mut parts = Vec::new();
    parts.extend(Formula::chain_p(&lv));
    parts.extend(Formula::chain_v(&lh));

    // Bounds of band `b` among `delims`: (delims[b-1] < x, x ≤ delims[b]).
    let band = |delims: &[Var], b: usize, x: &Var, lt: fn(Var, Var) -> Formula, le: fn(Var, Var) -> Formula| {
        let mut parts = Vec::new();
        if b > 0 {
            parts.push(lt(delims[b - 1].clone(), x.clone()));
        }
        if b < delims.len() {
            parts.push(le(x.clone(), delims[b].clone()));
        }
        Formula::conj(parts)
    };
    let le_p = |a: Var, b: Var| Formula::le_p(a, b);
    let le_v = |a: Var, b: Var| Formula::le_v(a, b);
    let bounded = |xs: &[Var], c: usize, r: usize, tail: Option<Formula>| {
        let pos = Formula::conj(xs.iter().filter_map(|x| band(&lv, c, x, Formula::LtP, le_p)));
        let val = Formula::conj(xs.iter().filter_map(|x| band(&lh, r, x, Formula::LtV, le_v)));
        let bounds = match (pos, val) {
            (Some(p), Some(v)) => Some(p.and(v)),
            (p, v) => p.or(v),
        };
        match (bounds, tail) {
            (Some(b), Some(t)) => b.and(t),
            (Some(b), None) => b,
            (None, Some(t)) => t,
            (None, None) => Formula::truth(xs[0].clone()),
        }
    };

    let mut empties = Vec::new();
    for (c, &col) in cols.iter().enumerate() {
        for (r, &row) in rows.iter().enumerate().rev() {
            match g.at(col, row) {
                GridEntry::Av(basis) => {
                    for beta in basis {
                        let xs = default_vars(beta.len());
                        let body = bounded(&xs, c, r, Some(psi(beta, &xs)));
                        parts.push(Formula::exists_all(xs, body).not());
                    }
                }
                GridEntry::Empty => {
                    let xs = default_vars(1);
                    let body = bounded(&xs, c, r, None);
                    empties.push(Formula::exists_all(xs, body).not());
                }
            }
        }
    }
    parts.extend(empties);
    let body = Formula::conj(parts).unwrap_or_else(|| Formula::forall("x1", Formula::truth("x1")));
    Formula::exists_all(lv.into_iter().chain(lh), body)
}

/// `φ_⊕ = ∃lv ∃lh ((∃x lv <P x) ∧ ∀x ((x ≤P lv) ↔ (x ≤V lh)))`.
pub fn compile_plus_decomposable() -> Formula {
    decomposable(Formula::le_v("x", "lh"))
}

/// As `φ_⊕` with the value side replaced by `lh <V x`.
pub fn compile_minus_decomposable() -> Formula {
    decomposable(Formula::lt_v("lh", "x"))
}

fn decomposable(value_side: Formula) -> Formula {
    let guard = Formula::exists("x", Formula::lt_p("lv", "x"));
    let split = Formula::forall("x", Formula::le_p("x", "lv").iff(value_side));
    Formula::exists("lv", Formula::exists("lh", guard.and(split)))
}

/// Existence of an interval of length in `2..n`.
pub fn compile_interval() -> Formula {
    let nontrivial = Formula::lt_p("lv1", "lv2")
        .and(Formula::exists("y", Formula::lt_p("y", "lv1").or(Formula::lt_p("lv2", "y"))));
    let inside_p = Formula::le_p("lv1", "x").and(Formula::le_p("x", "lv2"));
    let inside_v = Formula::le_v("lh1", "x").and(Formula::le_v("x", "lh2"));
    let body = nontrivial.and(Formula::forall("x", inside_p.iff(inside_v)));
    Formula::exists_all(["lv1", "lv2", "lh1", "lh2"], body)
}

pub fn compile_simple() -> Formula {
    compile_interval().not()
}

/// True when no name in `phi` collides with the reserved fresh prefix.
pub fn uses_only_plain_names(phi: &Formula) -> bool {
    all_vars(phi).iter().all(|v| !Var::is_fresh_name(v.name()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::models;
    use crate::parser::parse;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn vars(names: &[&str]) -> Vec<Var> {
        names.iter().map(|&n| Var::new(n)).collect()
    }

    #[test]
    fn classical_shape() {
        let f = compile_classical_with(&p("231"), &vars(&["x", "y", "z"])).unwrap();
        assert_eq!(f.formula, parse("(x <P y <P z) & (z <V x <V y)").unwrap());
        let one = compile_classical(&p("1")).unwrap();
        assert_eq!(one.formula, parse("x1 = x1").unwrap());
        assert_eq!(compile_classical(&Permutation::empty()), Err(PatternError::EmptyPattern));
        assert!(matches!(
            compile_classical_with(&p("12"), &vars(&["x", "x"])),
            Err(PatternError::DuplicateVar)
        ));
    }

    #[test]
    fn containment_models() {
        assert_eq!(models(&compile_contains(&p("231")).unwrap(), 3).unwrap(), vec![p("231")]);
        assert_eq!(models(&compile_contains(&p("12")).unwrap(), 2).unwrap(), vec![p("12")]);
        let av21 = compile_avoids(&[p("21")]).unwrap();
        for n in 0..6 {
            assert_eq!(models(&av21, n).unwrap(), vec![Permutation::identity(n)]);
        }
        assert_eq!(compile_avoids(&[]), Err(PatternError::EmptyBasis));
    }

    #[test]
    fn mesh_shape() {
        let mp = MeshPattern {
            pattern: p("132"),
            shaded: BTreeSet::from([(0, 2), (1, 2), (2, 2)]),
        };
        let f = compile_mesh_with(&mp, &vars(&["x", "y", "z"])).unwrap();
        let expected = parse(
            "(x <P y <P z) & (x <V z <V y) \
             & !(E t . t <P x & z <V t <V y) \
             & !(E t . x <P t <P y & z <V t <V y) \
             & !(E t . y <P t <P z & z <V t <V y)",
        )
        .unwrap();
        assert_eq!(f.formula, expected);
        let plain = MeshPattern {
            pattern: p("132"),
            shaded: BTreeSet::new(),
        };
        assert_eq!(compile_mesh(&plain).unwrap(), compile_classical(&p("132")).unwrap());
        let bad = MeshPattern {
            pattern: p("1"),
            shaded: BTreeSet::from([(2, 0)]),
        };
        assert_eq!(compile_mesh(&bad), Err(PatternError::CellOutOfRange(2, 0)));
    }

    #[test]
    fn barred_shape() {
        let bp = BarredPattern {
            pattern: p("1324"),
            barred: BTreeSet::from([1, 3]),
        };
        let f = compile_barred_with(&bp, &vars(&["x", "y"]), &vars(&["u", "t"])).unwrap();
        let expected = parse("(x <P y & x <V y) & !(E u . E t . (u <P x <P t <P y) & (u <V t <V x <V y))").unwrap();
        assert_eq!(f.formula, expected);
        let none = BarredPattern {
            pattern: p("132"),
            barred: BTreeSet::new(),
        };
        assert_eq!(compile_barred(&none).unwrap(), compile_classical(&p("132")).unwrap());
        let all = BarredPattern {
            pattern: p("12"),
            barred: BTreeSet::from([1, 2]),
        };
        assert_eq!(compile_barred(&all), Err(PatternError::AllBarred));
    }

    #[test]
    fn decorated_shape() {
        let dp = DecoratedPattern {
            pattern: p("21"),
            constraints: vec![Constraint {
                cells: vec![(1, 1)],
                forbidden: p("12"),
            }],
        };
        let f = compile_decorated_with(&dp, &vars(&["x", "y"])).unwrap();
        let expected = parse(
            "(x <P y & y <V x) & !(E t1 . E t2 . ((x <P t1 <P y & x <P t2 <P y) \
             & (y <V t1 <V x & y <V t2 <V x)) & (t1 <P t2 & t1 <V t2))",
        )
        .unwrap();
        assert_eq!(f.formula, expected);
        let multi = DecoratedPattern {
            pattern: p("21"),
            constraints: vec![Constraint {
                cells: vec![(1, 1), (0, 0)],
                forbidden: p("1"),
            }],
        };
        assert_eq!(compile_decorated(&multi), Err(PatternError::UnsupportedConstraint(2)));
    }

    fn two_cell_grid() -> GridSpec {
        GridSpec::new(vec![
            vec![GridEntry::Av(vec![p("123")]), GridEntry::Empty],
            vec![GridEntry::Av(vec![p("21")]), GridEntry::Av(vec![p("12")])],
        ])
        .unwrap()
    }

    #[test]
    fn grid_full_branch_shape() {
        let branch = grid_branch(&two_cell_grid(), &[0, 1], &[0, 1]);
        let expected = parse(
            "E lv1 . E lh1 . \
               !(E x1 . E x2 . E x3 . ((x1 <P lv1 | x1 = lv1) & (x2 <P lv1 | x2 = lv1) & (x3 <P lv1 | x3 = lv1)) \
                  & (lh1 <V x1 & lh1 <V x2 & lh1 <V x3) & (x1 <P x2 <P x3 & x1 <V x2 <V x3)) \
             & !(E x1 . E x2 . ((x1 <P lv1 | x1 = lv1) & (x2 <P lv1 | x2 = lv1)) \
                  & ((x1 <V lh1 | x1 = lh1) & (x2 <V lh1 | x2 = lh1)) & (x1 <P x2 & x2 <V x1)) \
             & !(E x1 . E x2 . (lv1 <P x1 & lv1 <P x2) \
                  & ((x1 <V lh1 | x1 = lh1) & (x2 <V lh1 | x2 = lh1)) & (x1 <P x2 & x1 <V x2)) \
             & !(E x1 . lv1 <P x1 & lh1 <V x1)",
        )
        .unwrap();
        assert_eq!(branch, expected);
        let g = compile_grid(&two_cell_grid()).unwrap();
        // the full branch is the first disjunct
        let mut first = &g;
        while let Formula::Or(a, _) = first {
            first = a;
        }
        assert_eq!(*first, expected);
    }

    #[test]
    fn one_by_one_grid_is_avoidance() {
        let b = vec![p("231"), p("312")];
        let g = GridSpec::new(vec![vec![GridEntry::Av(b.clone())]]).unwrap();
        assert_eq!(compile_grid(&g).unwrap(), compile_avoids(&b).unwrap());
        assert_eq!(GridSpec::new(vec![vec![], vec![]]), Err(PatternError::BadGrid));
    }

    #[test]
    fn decomposition_sentences() {
        let plus = compile_plus_decomposable();
        assert_eq!(
            plus,
            parse("E lv . E lh . ((E x . lv <P x) & (A x . ((x <P lv | x = lv) <-> (x <V lh | x = lh))))").unwrap()
        );
        assert_eq!(models(&plus, 2).unwrap(), vec![p("12")]);
        assert!(models(&plus, 1).unwrap().is_empty());
        assert_eq!(models(&compile_minus_decomposable(), 2).unwrap(), vec![p("21")]);
        let simple = compile_simple();
        assert_eq!(models(&simple, 4).unwrap(), vec![p("2413"), p("3142")]);
        for n in 0..=2 {
            assert_eq!(models(&simple, n).unwrap().len(), (1..=n).product::<usize>());
        }
        assert!(models(&simple, 3).unwrap().is_empty());
    }
}
