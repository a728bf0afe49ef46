//! Model checking on permutations.
//!
//! A formula is first lowered to a hash-consed DAG with de Bruijn indices,
//! so that syntactically equal subformulas (which the compilers produce in
//! bulk) share one node. Quantifiers range over points in position order.
//! Shared quantifier nodes may be memoized per permutation, keyed by the
//! points bound to their free variables.

use std::collections::{BTreeMap, HashMap};
use std::hash::{BuildHasherDefault, Hasher};

use rayon::prelude::*;
use thiserror::Error;

use crate::logic::{free_vars, signature_of, Formula, LogicError, Signature, Var};
use crate::perm::{enumerate_sn_capped, PermError, Permutation, Point, DEFAULT_MAX_N};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} is free but not assigned")]
    UnboundVariable(Var),
    #[error("{0} is not a point of the permutation")]
    ForeignPoint(String),
    #[error("expected a {expected} formula, found {found}")]
    SignatureMismatch { expected: Signature, found: Signature },
    #[error("formula has free variables: {0}")]
    NotASentence(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Partial map from variables to points.
pub type Assignment = BTreeMap<Var, Point>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Eq(u32, u32),
    LtP(u32, u32),
    LtV(u32, u32),
    Rel(u32, u32),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Implies(u32, u32),
    Iff(u32, u32),
    Exists(u32),
    Forall(u32),
}

// Memo keys pack the node id into the low 32 bits and one byte per free
// variable above it.
const MAX_KEY_VARS: usize = 12;
const MAX_KEY_POINTS: usize = 256;

/// A formula lowered for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Compiled {
    nodes: Vec<Node>,
    /// De Bruijn indices free in each node, ascending.
    free: Vec<Vec<u32>>,
    memo: Vec<bool>,
    root: u32,
    /// Free variables of the source formula, sorted by name; the first one is
    /// bound outermost.
    params: Vec<Var>,
    signature: Signature,
}

struct Builder {
    nodes: Vec<Node>,
    free: Vec<Vec<u32>>,
    parents: Vec<u32>,
    index: HashMap<Node, u32>,
}

impl Builder {
    fn intern(&mut self, node: Node) -> u32 {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        let free = match node {
            Node::Eq(a, b) | Node::LtP(a, b) | Node::LtV(a, b) | Node::Rel(a, b) => {
                let mut f = vec![a, b];
                f.sort_unstable();
                f.dedup();
                f
            }
            Node::Not(a) => self.free[a as usize].clone(),
            Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) | Node::Iff(a, b) => {
                let mut f = self.free[a as usize].clone();
                f.extend_from_slice(&self.free[b as usize]);
                f.sort_unstable();
                f.dedup();
                f
            }
            Node::Exists(a) | Node::Forall(a) => self.free[a as usize]
                .iter()
                .filter(|&&i| i > 0)
                .map(|&i| i - 1)
                .collect(),
        };
        match node {
            Node::Not(a) | Node::Exists(a) | Node::Forall(a) => self.parents[a as usize] += 1,
            Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) | Node::Iff(a, b) => {
                self.parents[a as usize] += 1;
                self.parents[b as usize] += 1;
            }
            _ => {}
        }
        self.nodes.push(node);
        self.free.push(free);
        self.parents.push(0);
        self.index.insert(node, id);
        id
    }

    fn lower(&mut self, phi: &Formula, scope: &mut Vec<Var>) -> u32 {
        let idx = |x: &Var, scope: &Vec<Var>| {
            let pos = scope
                .iter()
                .rposition(|y| y == x)
                .expect("free variables are bound as parameters");
            (scope.len() - 1 - pos) as u32
        };
        let node = match phi {
            Formula::Eq(a, b) => Node::Eq(idx(a, scope), idx(b, scope)),
            Formula::LtP(a, b) => Node::LtP(idx(a, scope), idx(b, scope)),
            Formula::LtV(a, b) => Node::LtV(idx(a, scope), idx(b, scope)),
            Formula::Rel(a, b) => Node::Rel(idx(a, scope), idx(b, scope)),
            Formula::Not(a) => Node::Not(self.lower(a, scope)),
            Formula::And(a, b) => Node::And(self.lower(a, scope), self.lower(b, scope)),
            Formula::Or(a, b) => Node::Or(self.lower(a, scope), self.lower(b, scope)),
            Formula::Implies(a, b) => Node::Implies(self.lower(a, scope), self.lower(b, scope)),
            Formula::Iff(a, b) => Node::Iff(self.lower(a, scope), self.lower(b, scope)),
            Formula::Exists(x, a) | Formula::Forall(x, a) => {
                scope.push(x.clone());
                let body = self.lower(a, scope);
                scope.pop();
                if matches!(phi, Formula::Exists(..)) {
                    Node::Exists(body)
                } else {
                    Node::Forall(body)
                }
            }
        };
        self.intern(node)
    }
}

impl Compiled {
    pub fn new(phi: &Formula) -> Result<Self, EvalError> {
        let signature = signature_of(phi)?;
        let params: Vec<Var> = free_vars(phi).into_iter().collect();
        let mut b = Builder {
            nodes: Vec::new(),
            free: Vec::new(),
            parents: Vec::new(),
            index: HashMap::new(),
        };
        let mut scope = params.clone();
        let root = b.lower(phi, &mut scope);
        let memo = b
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                matches!(n, Node::Exists(_) | Node::Forall(_))
                    && b.parents[i] >= 2
                    && b.free[i].len() <= MAX_KEY_VARS
            })
            .collect();
        Ok(Compiled {
            nodes: b.nodes,
            free: b.free,
            memo,
            root,
            params,
            signature,
        })
    }

    pub fn params(&self) -> &[Var] {
        &self.params
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Number of distinct DAG nodes.
    pub fn dag_size(&self) -> usize {
        self.nodes.len()
    }

    /// Evaluates with the parameters bound, in [`Compiled::params`] order, to
    /// the given 1-based positions. Positions must be valid.
    pub fn eval_positions(&self, sigma: &Permutation, positions: &[usize]) -> bool {
        self.session(sigma).eval_positions(positions)
    }

    /// An evaluation context for one permutation whose memo table survives
    /// across calls, for evaluating an open formula at many tuples.
    pub fn session<'a>(&'a self, sigma: &'a Permutation) -> Session<'a> {
        let small = sigma.len() < MAX_KEY_POINTS;
        Session {
            c: self,
            sigma,
            word: if small {
                sigma.word().iter().map(|&v| (v - 1) as u8).collect()
            } else {
                Vec::new()
            },
            cache: small.then(FastMap::default),
        }
    }

    /// Evaluates a sentence.
    pub fn holds(&self, sigma: &Permutation) -> bool {
        self.eval_positions(sigma, &[])
    }

    pub fn eval(&self, sigma: &Permutation, a: &Assignment) -> Result<bool, EvalError> {
        let mut positions = Vec::with_capacity(self.params.len());
        for x in &self.params {
            let p = a.get(x).ok_or_else(|| EvalError::UnboundVariable(x.clone()))?;
            if !sigma.contains_point(*p) {
                return Err(EvalError::ForeignPoint(format!(
                    "({}, {})",
                    p.position, p.value
                )));
            }
            positions.push(p.position);
        }
        Ok(self.eval_positions(sigma, &positions))
    }
}

#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(8) ^ b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        }
    }
    fn write_u128(&mut self, k: u128) {
        let mixed = (k as u64) ^ ((k >> 64) as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
        self.0 = (mixed ^ (mixed >> 29)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    }
}

type FastMap = HashMap<u128, bool, BuildHasherDefault<KeyHasher>>;

pub struct Session<'a> {
    c: &'a Compiled,
    sigma: &'a Permutation,
    word: Vec<u8>,
    cache: Option<FastMap>,
}

impl Session<'_> {
    pub fn eval_positions(&mut self, positions: &[usize]) -> bool {
        assert_eq!(positions.len(), self.c.params.len(), "one position per parameter");
        let n = self.sigma.len();
        let mut st = State {
            c: self.c,
            n,
            word: &self.word,
            wide: (n >= MAX_KEY_POINTS).then(|| self.sigma.word()),
            env: positions.iter().map(|&p| (p - 1) as u32).collect(),
            cache: self.cache.as_mut(),
        };
        st.eval(self.c.root)
    }
}

struct State<'a> {
    c: &'a Compiled,
    n: usize,
    /// 0-based values, when every value fits a byte.
    word: &'a [u8],
    wide: Option<&'a [usize]>,
    env: Vec<u32>,
    cache: Option<&'a mut FastMap>,
}

impl State<'_> {
    #[inline]
    fn get(&self, i: u32) -> u32 {
        self.env[self.env.len() - 1 - i as usize]
    }

    #[inline]
    fn value(&self, p: u32) -> u32 {
        match self.wide {
            Some(w) => (w[p as usize] - 1) as u32,
            None => self.word[p as usize] as u32,
        }
    }

    fn eval(&mut self, id: u32) -> bool {
        match self.c.nodes[id as usize] {
            Node::Eq(a, b) => self.get(a) == self.get(b),
            Node::LtP(a, b) => self.get(a) < self.get(b),
            Node::LtV(a, b) => self.value(self.get(a)) < self.value(self.get(b)),
            // i R j ⇔ σ(i) = j
            Node::Rel(a, b) => self.value(self.get(a)) == self.get(b),
            Node::Not(a) => !self.eval(a),
            Node::And(a, b) => self.eval(a) && self.eval(b),
            Node::Or(a, b) => self.eval(a) || self.eval(b),
            Node::Implies(a, b) => !self.eval(a) || self.eval(b),
            Node::Iff(a, b) => self.eval(a) == self.eval(b),
            Node::Exists(body) | Node::Forall(body) => {
                let key = if let (true, Some(cache)) = (self.c.memo[id as usize], self.cache.as_ref()) {
                    let mut k = id as u128;
                    for (slot, &i) in self.c.free[id as usize].iter().enumerate() {
                        k |= (self.get(i) as u128) << (32 + 8 * slot);
                    }
                    if let Some(&hit) = cache.get(&k) {
                        return hit;
                    }
                    Some(k)
                } else {
                    None
                };
                let want = matches!(self.c.nodes[id as usize], Node::Exists(_));
                let mut result = !want;
                for p in 0..self.n as u32 {
                    self.env.push(p);
                    let r = self.eval(body);
                    self.env.pop();
                    if r == want {
                        result = want;
                        break;
                    }
                }
                if let (Some(k), Some(cache)) = (key, self.cache.as_mut()) {
                    cache.insert(k, result);
                }
                result
            }
        }
    }
}

/// `(σ, a) ⊨ φ`, interpreting the formula in its own signature.
pub fn eval(sigma: &Permutation, phi: &Formula, a: &Assignment) -> Result<bool, EvalError> {
    Compiled::new(phi)?.eval(sigma, a)
}

/// As [`eval`], but fails unless the formula belongs to `signature`.
pub fn eval_in(
    sigma: &Permutation,
    phi: &Formula,
    a: &Assignment,
    signature: Signature,
) -> Result<bool, EvalError> {
    let c = Compiled::new(phi)?;
    let found = c.signature();
    // `=`-only formulas make sense in both theories
    let eq_only = found == Signature::TO && !mentions_order(phi);
    if found != signature && !eq_only {
        return Err(EvalError::SignatureMismatch {
            expected: signature,
            found,
        });
    }
    c.eval(sigma, a)
}

fn mentions_order(phi: &Formula) -> bool {
    use Formula::*;
    match phi {
        LtP(..) | LtV(..) => true,
        Eq(..) | Rel(..) => false,
        Not(a) | Exists(_, a) | Forall(_, a) => mentions_order(a),
        And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => mentions_order(a) || mentions_order(b),
    }
}

/// Sentence evaluation; errors if `phi` has free variables.
pub fn holds(sigma: &Permutation, phi: &Formula) -> Result<bool, EvalError> {
    let c = sentence(phi)?;
    Ok(c.holds(sigma))
}

fn sentence(phi: &Formula) -> Result<Compiled, EvalError> {
    let c = Compiled::new(phi)?;
    if !c.params.is_empty() {
        let names: Vec<String> = c.params.iter().map(|x| x.to_string()).collect();
        return Err(EvalError::NotASentence(names.join(", ")));
    }
    Ok(c)
}

/// All models of size `n`, in lexicographic order, with the default cap.
pub fn models(phi: &Formula, n: usize) -> Result<Vec<Permutation>, EvalError> {
    models_capped(phi, n, DEFAULT_MAX_N)
}

pub fn models_capped(phi: &Formula, n: usize, cap: usize) -> Result<Vec<Permutation>, EvalError> {
    let c = sentence(phi)?;
    let all: Vec<Permutation> = enumerate_sn_capped(n, cap)?.collect();
    Ok(all.into_par_iter().filter(|s| c.holds(s)).collect())
}

pub fn count_models(phi: &Formula, n: usize) -> Result<usize, EvalError> {
    count_models_capped(phi, n, DEFAULT_MAX_N)
}

pub fn count_models_capped(phi: &Formula, n: usize, cap: usize) -> Result<usize, EvalError> {
    let c = sentence(phi)?;
    let all: Vec<Permutation> = enumerate_sn_capped(n, cap)?.collect();
    Ok(all.par_iter().filter(|s| c.holds(s)).count())
}

/// Models among an explicit candidate list, order preserved.
pub fn models_among(phi: &Formula, candidates: &[Permutation]) -> Result<Vec<Permutation>, EvalError> {
    let c = sentence(phi)?;
    Ok(candidates
        .par_iter()
        .filter(|s| c.holds(s))
        .cloned()
        .collect())
}

/// Plain tree-walking evaluation without the DAG or the memo table. Kept as
/// a reference for tests.
pub fn eval_naive(sigma: &Permutation, phi: &Formula, a: &Assignment) -> Result<bool, EvalError> {
    fn go(sigma: &Permutation, phi: &Formula, env: &mut Vec<(Var, Point)>) -> Result<bool, EvalError> {
        let look = |x: &Var, env: &Vec<(Var, Point)>| {
            env.iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, p)| *p)
                .ok_or_else(|| EvalError::UnboundVariable(x.clone()))
        };
        use Formula::*;
        Ok(match phi {
            Eq(a, b) => look(a, env)? == look(b, env)?,
            LtP(a, b) => look(a, env)?.position < look(b, env)?.position,
            LtV(a, b) => look(a, env)?.value < look(b, env)?.value,
            Rel(a, b) => look(a, env)?.value == look(b, env)?.position,
            Not(a) => !go(sigma, a, env)?,
            And(a, b) => go(sigma, a, env)? && go(sigma, b, env)?,
            Or(a, b) => go(sigma, a, env)? || go(sigma, b, env)?,
            Implies(a, b) => !go(sigma, a, env)? || go(sigma, b, env)?,
            Iff(a, b) => go(sigma, a, env)? == go(sigma, b, env)?,
            Exists(x, a) | Forall(x, a) => {
                let want = matches!(phi, Exists(..));
                for p in sigma.points() {
                    env.push((x.clone(), p));
                    let r = go(sigma, a, env);
                    env.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                !want
            }
        })
    }
    signature_of(phi)?;
    let mut env: Vec<(Var, Point)> = a.iter().map(|(x, p)| (x.clone(), *p)).collect();
    go(sigma, phi, &mut env)
}
