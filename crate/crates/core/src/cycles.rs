//! Cycle properties: sentences over the bijection, sentences over the two
//! orders for exact and padded cycle types, and counting formulas that
//! recognise fixed points, transpositions and stable occurrences inside
//! classes with bounded obstructions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{count_exactly_with, FreshSupply, Formula, OpenFormula, Var};
use crate::marginals::{enumerate_balanced, MarginalsError, RegionMatrix};
use crate::patterns::{cell_bounds, compile_classical_with, default_vars};
use crate::perm::{enumerate_sn, Partition, Permutation};

/// Largest `|λ|` the order-theoretic cycle-type compilers accept by default.
pub const DEFAULT_CYCLE_TYPE_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("|λ| = {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("invalid obstruction bounds: {0}")]
    BadBounds(String),
    #[error("cycle length must be at least 1")]
    ZeroLength,
    #[error("the pattern must be nonempty")]
    EmptyPattern,
    #[error(transparent)]
    Marginals(#[from] MarginalsError),
}

/// Parameters of a class that excludes `δ_k` together with either
/// `321[inc_m, 1, inc_n]` (fixed points) or `inc_m ⊖ inc_n` (transpositions).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionBounds {
    pub k: usize,
    pub m: usize,
    pub n: usize,
}

impl ObstructionBounds {
    pub fn new(k: usize, m: usize, n: usize) -> Result<Self, CycleError> {
        if k < 2 {
            return Err(CycleError::BadBounds(format!("k = {k} must be at least 2")));
        }
        if m == 0 || n == 0 {
            return Err(CycleError::BadBounds("m and n must be positive".into()));
        }
        Ok(ObstructionBounds { k, m, n })
    }

    fn larger(&self) -> usize {
        self.m.max(self.n)
    }

    /// `max(0, (M − 1)(k − 3))` with `M = max(m, n)`.
    pub fn fixed_point_bound(&self) -> usize {
        (self.larger() - 1) * self.k.saturating_sub(3)
    }

    /// `2(M − 1)(k − 1)` with `M = max(m, n)`.
    pub fn transposition_bound(&self) -> usize {
        2 * (self.larger() - 1) * (self.k - 1)
    }
}

fn vars_named(k: usize) -> Vec<Var> {
    match k {
        1 => vec![Var::new("x")],
        2 => vec![Var::new("x"), Var::new("y")],
        _ => default_vars(k),
    }
}

fn pairwise_distinct(vars: &[Var]) -> Option<Formula> {
    Formula::conj(
        (0..vars.len())
            .flat_map(|i| (i + 1..vars.len()).map(move |j| (i, j)))
            .map(|(i, j)| Formula::eq(vars[i].clone(), vars[j].clone()).not()),
    )
}

fn r_cycle(vars: &[Var]) -> Formula {
    let r = vars.len();
    Formula::conj((0..r).map(|i| Formula::rel(vars[i].clone(), vars[(i + 1) % r].clone())))
        .expect("cycles are nonempty")
}

fn one_of(y: &Var, vars: &[Var]) -> Option<Formula> {
    Formula::disj(vars.iter().map(|x| Formula::eq(y.clone(), x.clone())))
}

fn with_distinct(vars: &[Var], body: Formula) -> Formula {
    match pairwise_distinct(vars) {
        Some(d) => d.and(body),
        None => body,
    }
}

/// `∃ distinct x₁ … x_k (x₁ R x₂ ∧ … ∧ x_k R x₁)`.
pub fn toob_has_kcycle(k: usize) -> Result<Formula, CycleError> {
    if k == 0 {
        return Err(CycleError::ZeroLength);
    }
    let vars = vars_named(k);
    let body = with_distinct(&vars, r_cycle(&vars));
    Ok(Formula::exists_all(vars, body))
}

fn toob_type(lambda: &Partition, padded: bool) -> Formula {
    let size = lambda.size();
    let vars = default_vars(size);
    let y = Var::new("y");
    let fixed = Formula::rel(y.clone(), y.clone());
    let rest = match (one_of(&y, &vars), padded) {
        (Some(m), true) => m.or(fixed),
        (Some(m), false) => m,
        (None, true) => fixed,
        (None, false) => Formula::eq(y.clone(), y.clone()).not(),
    };
    let every = Formula::forall(y, rest);
    let mut start = 0;
    let cycles = Formula::conj(lambda.parts().iter().map(|&len| {
        let c = r_cycle(&vars[start..start + len]);
        start += len;
        c
    }));
    let body = match cycles {
        Some(c) => with_distinct(&vars, c).and(every),
        None => every,
    };
    Formula::exists_all(vars, body)
}

/// Cycle type exactly `λ`.
pub fn toob_cycle_type(lambda: &Partition) -> Formula {
    toob_type(lambda, false)
}

/// Cycle type `λ ∪ (1^k)` for some `k ≥ 0`.
pub fn toob_cycle_type_padded(lambda: &Partition) -> Formula {
    toob_type(lambda, true)
}

fn psi(pi: &Permutation, vars: &[Var]) -> Formula {
    compile_classical_with(pi, vars).expect("nonempty pattern with matching names").formula
}

/// The sentence whose only model is `σ`.
pub fn toto_characteristic_sentence(sigma: &Permutation) -> Formula {
    let y = Var::new("y");
    if sigma.is_empty() {
        return Formula::exists(y.clone(), Formula::eq(y.clone(), y)).not();
    }
    let vars = default_vars(sigma.len());
    let every = Formula::forall(y.clone(), one_of(&y, &vars).expect("nonempty"));
    let body = psi(sigma, &vars).and(every);
    Formula::exists_all(vars, body)
}

fn check_cap(lambda: &Partition, cap: usize) -> Result<(), CycleError> {
    if lambda.size() > cap {
        return Err(CycleError::SizeCapExceeded {
            size: lambda.size(),
            cap,
        });
    }
    Ok(())
}

fn of_type(lambda: &Partition) -> Vec<Permutation> {
    enumerate_sn(lambda.size())
        .expect("size already capped")
        .filter(|s| s.cycle_type() == *lambda)
        .collect()
}

pub fn toto_cycle_type(lambda: &Partition) -> Result<Formula, CycleError> {
    toto_cycle_type_capped(lambda, DEFAULT_CYCLE_TYPE_CAP)
}

/// Disjunction of the characteristic sentences of all permutations of
/// cycle type `λ`.
pub fn toto_cycle_type_capped(lambda: &Partition, cap: usize) -> Result<Formula, CycleError> {
    check_cap(lambda, cap)?;
    Ok(Formula::disj(of_type(lambda).iter().map(toto_characteristic_sentence)).expect("every partition is realised"))
}

pub fn toto_cycle_type_padded(lambda: &Partition) -> Result<Formula, CycleError> {
    toto_cycle_type_padded_capped(lambda, DEFAULT_CYCLE_TYPE_CAP)
}

/// `∃ x₁ … x_L (P1 ∧ P2 ∧ P3)` with `L = |λ|`:
/// P1, the `x`'s carry a pattern of cycle type `λ`;
/// P2, the two orders agree on the points outside `X`;
/// P3, each point outside `X` has as many `x`'s below it by value as by
/// position, spelled out over all subset pairs of equal size.
pub fn toto_cycle_type_padded_capped(lambda: &Partition, cap: usize) -> Result<Formula, CycleError> {
    check_cap(lambda, cap)?;
    let size = lambda.size();
    let vars = default_vars(size);
    let (y, z) = (Var::new("y"), Var::new("z"));
    let outside = |w: &Var| Formula::conj(vars.iter().map(|x| Formula::eq(w.clone(), x.clone()).not()));
    let agree = Formula::lt_p(y.clone(), z.clone()).iff(Formula::lt_v(y.clone(), z.clone()));
    let p2_body = match (outside(&y), outside(&z)) {
        (Some(oy), Some(oz)) => oy.and(oz).implies(agree),
        _ => agree,
    };
    let p2 = Formula::forall(y.clone(), Formula::forall(z.clone(), p2_body));
    if size == 0 {
        return Ok(p2);
    }
    let p1 = Formula::disj(of_type(lambda).iter().map(|pi| psi(pi, &vars))).expect("every partition is realised");
    let subsets = subsets_by_size(size);
    let mut options = Vec::new();
    for group in &subsets {
        for below_p in group {
            for below_v in group {
                let lits = vars.iter().enumerate().flat_map(|(i, x)| {
                    let p = Formula::lt_p(x.clone(), y.clone());
                    let v = Formula::lt_v(x.clone(), y.clone());
                    [
                        if below_p.contains(&i) { p } else { p.not() },
                        if below_v.contains(&i) { v } else { v.not() },
                    ]
                });
                options.push(Formula::conj(lits).expect("L ≥ 1"));
            }
        }
    }
    let p3_body = outside(&y).expect("L ≥ 1").implies(Formula::disj(options).expect("j = 0 is always present"));
    let p3 = Formula::forall(y, p3_body);
    Ok(Formula::exists_all(vars, p1.and(p2).and(p3)))
}

// Subsets of {0, …, n−1} grouped by size, each group in lexicographic order.
fn subsets_by_size(n: usize) -> Vec<Vec<BTreeSet<usize>>> {
    let mut groups = vec![Vec::new(); n + 1];
    for mask in 0u32..(1 << n) {
        let set: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        groups[set.len()].push(set);
    }
    for g in &mut groups {
        g.sort();
    }
    groups
}

fn counts(parts: &[(usize, Formula)], v: &Var, supply: &mut FreshSupply) -> Formula {
    Formula::conj(parts.iter().map(|(i, body)| count_exactly_with(*i, v, body, supply))).expect("nonempty")
}

/// `⋁_{i ≤ B} (|U| = i ∧ |V| = i)` in the free variable `x`, where `U` holds
/// the points before and above `x` and `V` those after and below it.
pub fn fixed_point_formula(b: &ObstructionBounds) -> Formula {
    let (x, y) = (Var::new("x"), Var::new("y"));
    let u = Formula::lt_p(y.clone(), x.clone()).and(Formula::lt_v(x.clone(), y.clone()));
    let v = Formula::lt_p(x.clone(), y.clone()).and(Formula::lt_v(y.clone(), x.clone()));
    let mut supply = FreshSupply::new([x.clone(), y.clone()].into());
    Formula::disj((0..=b.fixed_point_bound()).map(|i| counts(&[(i, u.clone()), (i, v.clone())], &y, &mut supply)))
        .expect("i = 0 is always present")
}

/// Count profiles `(a₁₂, a₁₃, a₂₁, a₂₃, a₃₁, a₃₂)` over `{0, …, bound}` with
/// matching row and column sums, in lexicographic order.
pub fn transposition_profiles(bound: usize) -> Vec<[usize; 6]> {
    let mut out = Vec::new();
    let mut t = [0usize; 6];
    fn rec(idx: usize, bound: usize, t: &mut [usize; 6], out: &mut Vec<[usize; 6]>) {
        if idx == 6 {
            let [a12, a13, a21, a23, a31, a32] = *t;
            if a21 + a31 == a12 + a13 && a12 + a32 == a21 + a23 && a13 + a23 == a31 + a32 {
                out.push(*t);
            }
            return;
        }
        for c in 0..=bound {
            t[idx] = c;
            rec(idx + 1, bound, t, out);
        }
    }
    rec(0, bound, &mut t, &mut out);
    out
}

// (a, b) an inversion with a first, plus a count profile on the six
// off-diagonal cells of the 3 × 3 grid they cut out.
fn transposition_ordered(a: &Var, b: &Var, profiles: &[[usize; 6]], supply: &mut FreshSupply) -> Formula {
    let t = Var::new("z");
    let (lp, lv) = (Formula::lt_p, Formula::lt_v);
    let col = [
        lp(t.clone(), a.clone()),
        lp(a.clone(), t.clone()).and(lp(t.clone(), b.clone())),
        lp(b.clone(), t.clone()),
    ];
    let row = [
        lv(t.clone(), b.clone()),
        lv(b.clone(), t.clone()).and(lv(t.clone(), a.clone())),
        lv(a.clone(), t.clone()),
    ];
    let cell = |i: usize, j: usize| row[i - 1].clone().and(col[j - 1].clone());
    let cells = [cell(1, 2), cell(1, 3), cell(2, 1), cell(2, 3), cell(3, 1), cell(3, 2)];
    let inversion = lp(a.clone(), b.clone()).and(lv(b.clone(), a.clone()));
    let options = Formula::disj(profiles.iter().map(|prof| {
        let parts: Vec<(usize, Formula)> = prof.iter().copied().zip(cells.iter().cloned()).collect();
        counts(&parts, &t, supply)
    }))
    .expect("the zero profile is always present");
    inversion.and(options)
}

/// `x, y` form a transposition, in either argument order.
pub fn transposition_formula(b: &ObstructionBounds) -> Formula {
    let (x, y) = (Var::new("x"), Var::new("y"));
    let profiles = transposition_profiles(b.transposition_bound());
    let mut supply = FreshSupply::new([x.clone(), y.clone(), Var::new("z")].into());
    let forward = transposition_ordered(&x, &y, &profiles, &mut supply);
    let backward = transposition_ordered(&y, &x, &profiles, &mut supply);
    forward.or(backward)
}

/// `ψ_π ∧ ⋁_A ⋀_{i ≠ j} (cell (i, j) holds exactly a_ij points)`, over the
/// balanced zero-diagonal matrices `A` of total at most `bound`.
pub fn stable_occurrence_formula(pi: &Permutation, bound: usize, cap: usize) -> Result<OpenFormula, CycleError> {
    if pi.is_empty() {
        return Err(CycleError::EmptyPattern);
    }
    let k = pi.len();
    let vars = default_vars(k);
    let matrices = enumerate_balanced(k + 1, bound, cap)?;
    let mut supply = FreshSupply::new(vars.iter().cloned().chain([Var::new("t")]).collect());
    let body = profile_disjunction(pi, &vars, &matrices, &mut supply);
    Ok(OpenFormula::new(psi(pi, &vars).and(body), vars))
}

fn profile_disjunction(pi: &Permutation, vars: &[Var], matrices: &[RegionMatrix], supply: &mut FreshSupply) -> Formula {
    let k = pi.len();
    let t = Var::new("t");
    let by_value: Vec<Var> = pi.inverse().word().iter().map(|&i| vars[i - 1].clone()).collect();
    // cell_bounds takes (column, row)
    let mut cells = Vec::new();
    for row in 0..=k {
        for col in (0..=k).filter(|&c| c != row) {
            let (p, v) = cell_bounds(vars, &by_value, (col, row), &t);
            cells.push(((row, col), v.and(p)));
        }
    }
    Formula::disj(matrices.iter().map(|a| {
        let parts: Vec<(usize, Formula)> = cells.iter().map(|((r, c), f)| (a.get(*r, *c), f.clone())).collect();
        counts(&parts, &t, supply)
    }))
    .expect("the zero matrix is always present")
}

/// `⋁_π (ψ_π ∧ stable profile)` over the `k`-cycles `π` of size `k`.
pub fn cycle_formula(k: usize, bound: usize, cap: usize) -> Result<OpenFormula, CycleError> {
    if k == 0 {
        return Err(CycleError::ZeroLength);
    }
    let lambda = Partition::new(vec![k]);
    let parts: Result<Vec<Formula>, CycleError> = of_type(&lambda)
        .iter()
        .map(|pi| Ok(stable_occurrence_formula(pi, bound, cap)?.formula))
        .collect();
    Ok(OpenFormula::new(Formula::disj(parts?).expect("k-cycles exist"), default_vars(k)))
}

/// Number of non-trivial cycles on `[m]`, each counted once up to rotation.
pub fn nontrivial_cycle_count(m: usize) -> u128 {
    // a cycle starts at its minimum s and continues with an ordered
    // selection of r ≥ 1 elements above s
    let mut total = 0u128;
    for s in 1..=m {
        let above = m - s;
        let mut ways = 1u128;
        for r in 1..=above {
            ways *= (above - r + 1) as u128;
            total += ways;
        }
    }
    total
}

/// `C · (k + 1) · ((m − 1)² + 1)` with `C` the number of non-trivial cycles
/// on `[k + 1]`.
pub fn stable_bound(k: usize, m: usize) -> u128 {
    let c = nontrivial_cycle_count(k + 1);
    let mm = (m.max(1) - 1) as u128;
    c * (k as u128 + 1) * (mm * mm + 1)
}
