//! First-order formulas over the two signatures: two total orders (`<P`,
//! `<V`, `=`) and one bijection (`R`, `=`).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("formula mixes the order symbols with R")]
    MixedSignature,
    #[error("expected a {expected} formula, found {found}")]
    SignatureMismatch { expected: Signature, found: Signature },
    #[error("bad template: {0}")]
    BadTemplate(String),
}

/// Identifier of a first-order variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        debug_assert!(!name.is_empty());
        Var(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Names produced by [`fresh_var`] start with this prefix.
    pub const FRESH_PREFIX: &'static str = "_t";

    pub fn is_fresh_name(name: &str) -> bool {
        name.strip_prefix(Self::FRESH_PREFIX)
            .is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signature {
    /// Two total orders.
    TO,
    /// One bijection.
    OB,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::TO => "TO",
            Signature::OB => "OB",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Var, Var),
    LtP(Var, Var),
    LtV(Var, Var),
    Rel(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

use Formula::*;

fn v(name: impl Into<Var>) -> Var {
    name.into()
}

impl Formula {
    pub fn eq(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        Eq(v(a), v(b))
    }
    pub fn lt_p(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        LtP(v(a), v(b))
    }
    pub fn lt_v(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        LtV(v(a), v(b))
    }
    pub fn rel(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        Rel(v(a), v(b))
    }
    /// `a ≤P b`, spelled `(a <P b | a = b)`.
    pub fn le_p(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        let (a, b) = (v(a), v(b));
        LtP(a.clone(), b.clone()).or(Eq(a, b))
    }
    pub fn le_v(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        let (a, b) = (v(a), v(b));
        LtV(a.clone(), b.clone()).or(Eq(a, b))
    }
    /// `(x = x)`; the AST has no constants.
    pub fn truth(x: impl Into<Var>) -> Self {
        let x = v(x);
        Eq(x.clone(), x)
    }

    // reads better in builder chains than a `!` prefix
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Not(Box::new(self))
    }
    pub fn and(self, other: Formula) -> Self {
        And(Box::new(self), Box::new(other))
    }
    pub fn or(self, other: Formula) -> Self {
        Or(Box::new(self), Box::new(other))
    }
    pub fn implies(self, other: Formula) -> Self {
        Implies(Box::new(self), Box::new(other))
    }
    pub fn iff(self, other: Formula) -> Self {
        Iff(Box::new(self), Box::new(other))
    }
    pub fn exists(x: impl Into<Var>, body: Formula) -> Self {
        Exists(v(x), Box::new(body))
    }
    pub fn forall(x: impl Into<Var>, body: Formula) -> Self {
        Forall(v(x), Box::new(body))
    }

    /// `∃x₁ ∃x₂ … body`, with `x₁` outermost.
    pub fn exists_all<I, V>(vars: I, body: Formula) -> Self
    where
        I: IntoIterator<Item = V>,
        I::IntoIter: DoubleEndedIterator,
        V: Into<Var>,
    {
        vars.into_iter()
            .rev()
            .fold(body, |acc, x| Formula::exists(x, acc))
    }

    pub fn forall_all<I, V>(vars: I, body: Formula) -> Self
    where
        I: IntoIterator<Item = V>,
        I::IntoIter: DoubleEndedIterator,
        V: Into<Var>,
    {
        vars.into_iter()
            .rev()
            .fold(body, |acc, x| Formula::forall(x, acc))
    }

    /// Left-associated conjunction; `None` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Left-associated disjunction; `None` when empty.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// `x₁ <P x₂ ∧ x₂ <P x₃ ∧ …`; `None` for fewer than two variables.
    pub fn chain_p(vars: &[Var]) -> Option<Formula> {
        Formula::conj(vars.windows(2).map(|w| LtP(w[0].clone(), w[1].clone())))
    }

    pub fn chain_v(vars: &[Var]) -> Option<Formula> {
        Formula::conj(vars.windows(2).map(|w| LtV(w[0].clone(), w[1].clone())))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Eq(..) | LtP(..) | LtV(..) | Rel(..))
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(self, Exists(..) | Forall(..))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Eq(..) | LtP(..) | LtV(..) | Rel(..) => 1,
            Not(a) | Exists(_, a) | Forall(_, a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => 1 + a.size() + b.size(),
        }
    }
}

pub fn qdepth(phi: &Formula) -> usize {
    match phi {
        Eq(..) | LtP(..) | LtV(..) | Rel(..) => 0,
        Not(a) => qdepth(a),
        And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => qdepth(a).max(qdepth(b)),
        Exists(_, a) | Forall(_, a) => 1 + qdepth(a),
    }
}

pub fn free_vars(phi: &Formula) -> BTreeSet<Var> {
    fn go(phi: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match phi {
            Eq(a, b) | LtP(a, b) | LtV(a, b) | Rel(a, b) => {
                for x in [a, b] {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
            }
            Not(a) => go(a, bound, out),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            Exists(x, a) | Forall(x, a) => {
                bound.push(x.clone());
                go(a, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(phi, &mut Vec::new(), &mut out);
    out
}

/// Every variable name occurring in `phi`, free or bound.
pub fn all_vars(phi: &Formula) -> BTreeSet<Var> {
    fn go(phi: &Formula, out: &mut BTreeSet<Var>) {
        match phi {
            Eq(a, b) | LtP(a, b) | LtV(a, b) | Rel(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Not(a) => go(a, out),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                go(a, out);
                go(b, out);
            }
            Exists(x, a) | Forall(x, a) => {
                out.insert(x.clone());
                go(a, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(phi, &mut out);
    out
}

pub fn is_sentence(phi: &Formula) -> bool {
    free_vars(phi).is_empty()
}

/// Formulas built only from `=` count as TO.
pub fn signature_of(phi: &Formula) -> Result<Signature, LogicError> {
    fn scan(phi: &Formula, order: &mut bool, rel: &mut bool) {
        match phi {
            Eq(..) => {}
            LtP(..) | LtV(..) => *order = true,
            Rel(..) => *rel = true,
            Not(a) | Exists(_, a) | Forall(_, a) => scan(a, order, rel),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                scan(a, order, rel);
                scan(b, order, rel);
            }
        }
    }
    let (mut order, mut rel) = (false, false);
    scan(phi, &mut order, &mut rel);
    match (order, rel) {
        (true, true) => Err(LogicError::MixedSignature),
        (false, true) => Ok(Signature::OB),
        _ => Ok(Signature::TO),
    }
}

/// The first of `_t0, _t1, …` not in `avoid`.
pub fn fresh_var(avoid: &BTreeSet<Var>) -> Var {
    (0..)
        .map(|i| Var::new(format!("{}{i}", Var::FRESH_PREFIX)))
        .find(|x| !avoid.contains(x))
        .expect("unbounded supply")
}

/// Generates fresh names, remembering each one it hands out.
#[derive(Debug, Clone)]
pub struct FreshSupply {
    avoid: BTreeSet<Var>,
    next: usize,
}

impl FreshSupply {
    pub fn new(avoid: BTreeSet<Var>) -> Self {
        FreshSupply { avoid, next: 0 }
    }

    pub fn avoiding<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut avoid = BTreeSet::new();
        for f in formulas {
            avoid.extend(all_vars(f));
        }
        Self::new(avoid)
    }

    pub fn reserve(&mut self, x: &Var) {
        self.avoid.insert(x.clone());
    }

    pub fn fresh(&mut self) -> Var {
        loop {
            let x = Var::new(format!("{}{}", Var::FRESH_PREFIX, self.next));
            self.next += 1;
            if self.avoid.insert(x.clone()) {
                return x;
            }
        }
    }

    pub fn fresh_many(&mut self, k: usize) -> Vec<Var> {
        (0..k).map(|_| self.fresh()).collect()
    }
}

/// A formula together with an ordered list of designated free variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenFormula {
    pub formula: Formula,
    pub vars: Vec<Var>,
}

impl OpenFormula {
    pub fn new(formula: Formula, vars: Vec<Var>) -> Self {
        OpenFormula { formula, vars }
    }

    /// ∃-closure over the designated variables.
    pub fn close_exists(&self) -> Formula {
        Formula::exists_all(self.vars.iter().cloned(), self.formula.clone())
    }
}

/// A TO formula with exactly two designated variables `(a, b)`, used as the
/// replacement for `a <P b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryTemplate {
    formula: Formula,
    a: Var,
    b: Var,
}

impl BinaryTemplate {
    pub fn new(formula: Formula, a: impl Into<Var>, b: impl Into<Var>) -> Result<Self, LogicError> {
        let (a, b) = (a.into(), b.into());
        if a == b {
            return Err(LogicError::BadTemplate(format!(
                "designated variables must differ, got {a} twice"
            )));
        }
        let found = signature_of(&formula)?;
        if found != Signature::TO {
            return Err(LogicError::SignatureMismatch {
                expected: Signature::TO,
                found,
            });
        }
        let extra: Vec<String> = free_vars(&formula)
            .into_iter()
            .filter(|x| *x != a && *x != b)
            .map(|x| x.to_string())
            .collect();
        if !extra.is_empty() {
            return Err(LogicError::BadTemplate(format!(
                "free variables other than {a}, {b}: {}",
                extra.join(", ")
            )));
        }
        Ok(BinaryTemplate { formula, a, b })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn vars(&self) -> (&Var, &Var) {
        (&self.a, &self.b)
    }

    /// The template with `a := u, b := v` and every bound variable renamed
    /// to a fresh name from `supply`.
    pub fn instantiate(&self, u: &Var, w: &Var, supply: &mut FreshSupply) -> Formula {
        fn go(
            phi: &Formula,
            map: &mut Vec<(Var, Var)>,
            supply: &mut FreshSupply,
        ) -> Formula {
            let look = |x: &Var, map: &Vec<(Var, Var)>| {
                map.iter()
                    .rev()
                    .find(|(from, _)| from == x)
                    .map(|(_, to)| to.clone())
                    .unwrap_or_else(|| x.clone())
            };
            match phi {
                Eq(a, b) => Eq(look(a, map), look(b, map)),
                LtP(a, b) => LtP(look(a, map), look(b, map)),
                LtV(a, b) => LtV(look(a, map), look(b, map)),
                Rel(a, b) => Rel(look(a, map), look(b, map)),
                Not(a) => go(a, map, supply).not(),
                And(a, b) => go(a, map, supply).and(go(b, map, supply)),
                Or(a, b) => go(a, map, supply).or(go(b, map, supply)),
                Implies(a, b) => go(a, map, supply).implies(go(b, map, supply)),
                Iff(a, b) => go(a, map, supply).iff(go(b, map, supply)),
                Exists(x, a) | Forall(x, a) => {
                    let y = supply.fresh();
                    map.push((x.clone(), y.clone()));
                    let body = go(a, map, supply);
                    map.pop();
                    if matches!(phi, Exists(..)) {
                        Formula::exists(y, body)
                    } else {
                        Formula::forall(y, body)
                    }
                }
            }
        }
        let mut map = vec![(self.a.clone(), u.clone()), (self.b.clone(), w.clone())];
        go(&self.formula, &mut map, supply)
    }
}

/// Replaces every `u <P v` in `phi` by the template instantiated at `(u, v)`.
///
/// Fresh names avoid every variable of `phi` and of the template, so no
/// capture can occur.
pub fn substitute_ltp(phi: &Formula, psi: &BinaryTemplate) -> Result<Formula, LogicError> {
    let found = signature_of(phi)?;
    if found != Signature::TO {
        return Err(LogicError::SignatureMismatch {
            expected: Signature::TO,
            found,
        });
    }
    let mut supply = FreshSupply::avoiding([phi, psi.formula()]);
    supply.reserve(&psi.a);
    supply.reserve(&psi.b);
    fn go(phi: &Formula, psi: &BinaryTemplate, supply: &mut FreshSupply) -> Formula {
        match phi {
            LtP(u, w) => psi.instantiate(u, w, supply),
            Eq(..) | LtV(..) | Rel(..) => phi.clone(),
            Not(a) => go(a, psi, supply).not(),
            And(a, b) => go(a, psi, supply).and(go(b, psi, supply)),
            Or(a, b) => go(a, psi, supply).or(go(b, psi, supply)),
            Implies(a, b) => go(a, psi, supply).implies(go(b, psi, supply)),
            Iff(a, b) => go(a, psi, supply).iff(go(b, psi, supply)),
            Exists(x, a) => Formula::exists(x.clone(), go(a, psi, supply)),
            Forall(x, a) => Formula::forall(x.clone(), go(a, psi, supply)),
        }
    }
    Ok(go(phi, psi, &mut supply))
}

/// "Exactly `i` elements `v` satisfy `body`":
/// `∃y₁…y_i (pairwise distinct ∧ ∀v (body ↔ ⋁ v = y_j))`, or `∀v ¬body` when
/// `i = 0`. The `y_j` are fresh.
pub fn count_exactly(i: usize, v: &Var, body: &Formula) -> Formula {
    let mut supply = FreshSupply::avoiding([body]);
    supply.reserve(v);
    count_exactly_with(i, v, body, &mut supply)
}

/// As [`count_exactly`], drawing the witnesses from a caller-owned supply so
/// that several counts inside one formula share a naming scheme.
pub fn count_exactly_with(i: usize, v: &Var, body: &Formula, supply: &mut FreshSupply) -> Formula {
    if i == 0 {
        return Formula::forall(v.clone(), body.clone().not());
    }
    let ys = supply.fresh_many(i);
    let members = Formula::disj(ys.iter().map(|y| Eq(v.clone(), y.clone()))).unwrap();
    let mut core = Formula::forall(v.clone(), body.clone().iff(members));
    let distinct = Formula::conj(
        (0..i).flat_map(|j| (j + 1..i).map(move |l| (j, l)))
            .map(|(j, l)| Eq(ys[j].clone(), ys[l].clone()).not()),
    );
    if let Some(d) = distinct {
        core = d.and(core);
    }
    Formula::exists_all(ys, core)
}

/// Renames free occurrences of variables per `map` (simultaneously). Bound
/// variables are left alone, so callers must pick targets that no quantifier
/// in `phi` binds.
pub fn rename_free(phi: &Formula, map: &[(Var, Var)]) -> Formula {
    fn go(phi: &Formula, map: &[(Var, Var)], bound: &mut Vec<Var>) -> Formula {
        let look = |x: &Var, bound: &Vec<Var>| {
            if bound.contains(x) {
                return x.clone();
            }
            map.iter()
                .find(|(from, _)| from == x)
                .map(|(_, to)| to.clone())
                .unwrap_or_else(|| x.clone())
        };
        match phi {
            Eq(a, b) => Eq(look(a, bound), look(b, bound)),
            LtP(a, b) => LtP(look(a, bound), look(b, bound)),
            LtV(a, b) => LtV(look(a, bound), look(b, bound)),
            Rel(a, b) => Rel(look(a, bound), look(b, bound)),
            Not(a) => go(a, map, bound).not(),
            And(a, b) => go(a, map, bound).and(go(b, map, bound)),
            Or(a, b) => go(a, map, bound).or(go(b, map, bound)),
            Implies(a, b) => go(a, map, bound).implies(go(b, map, bound)),
            Iff(a, b) => go(a, map, bound).iff(go(b, map, bound)),
            Exists(x, a) | Forall(x, a) => {
                bound.push(x.clone());
                let body = go(a, map, bound);
                bound.pop();
                if matches!(phi, Exists(..)) {
                    Formula::exists(x.clone(), body)
                } else {
                    Formula::forall(x.clone(), body)
                }
            }
        }
    }
    go(phi, map, &mut Vec::new())
}
