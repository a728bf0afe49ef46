//! First-order logic over finite permutations.
//!
//! A permutation is read either as two total orders on its points (position
//! and value), or as the graph of one bijection. This crate evaluates
//! formulas in both readings, compiles pattern, sorting and cycle properties
//! into formulas, and decides Ehrenfeucht–Fraïssé equivalence.

pub mod cycles;
pub mod ef;
pub mod eval;
pub mod logic;
pub mod marginals;
pub mod parser;
pub mod patterns;
pub mod perm;
pub mod sorting;

pub use eval::{count_models, eval, holds, models, Assignment, Compiled};
pub use logic::{Formula, Signature, Var};
pub use parser::{parse, print};
pub use perm::{Partition, Permutation, Point};
