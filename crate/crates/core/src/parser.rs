//! ASCII text syntax for formulas.
//!
//! ```text
//! formula := iff
//! iff     := imp ('<->' imp)*
//! imp     := or ('->' or)*
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '!' unary | 'E' var '.' formula | 'A' var '.' formula
//!          | var (relop var)+ | '(' formula ')'
//! relop   := '<P' | '<V' | '=' | 'R'
//! ```
//!
//! A quantifier body extends as far right as possible. Binary operators
//! associate to the left. A chain `x <P y <P z` reads as
//! `(x <P y) & (y <P z)`.

use std::fmt;

use thiserror::Error;

use crate::logic::{signature_of, Formula, LogicError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

impl ParseError {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Exists,
    Forall,
    Dot,
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    LtP,
    LtV,
    Eq,
    Rel,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::Exists => "`E`",
            Tok::Forall => "`A`",
            Tok::Dot => "`.`",
            Tok::Not => "`!`",
            Tok::And => "`&`",
            Tok::Or => "`|`",
            Tok::Imp => "`->`",
            Tok::Iff => "`<->`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LtP => "`<P`",
            Tok::LtV => "`<V`",
            Tok::Eq => "`=`",
            Tok::Rel => "`R`",
            Tok::End => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let rest = |s: &str| chars[i..].iter().take(s.len()).copied().eq(s.chars());
        let (tok, width) = if rest("<->") {
            (Tok::Iff, 3)
        } else if rest("->") {
            (Tok::Imp, 2)
        } else if rest("<P") {
            (Tok::LtP, 2)
        } else if rest("<V") {
            (Tok::LtV, 2)
        } else {
            match c {
                '.' => (Tok::Dot, 1),
                '!' => (Tok::Not, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '=' => (Tok::Eq, 1),
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().collect();
                    let tok = match word.as_str() {
                        "E" => Tok::Exists,
                        "A" => Tok::Forall,
                        "R" => Tok::Rel,
                        _ if word.starts_with('_') && !Var::is_fresh_name(&word) => {
                            return Err(ParseError::at(
                                pos,
                                format!("identifier `{word}` uses the reserved `_` prefix"),
                            ))
                        }
                        _ => Tok::Ident(word),
                    };
                    (tok, j - i)
                }
                other => {
                    return Err(ParseError::at(pos, format!("unexpected character `{other}`")))
                }
            }
        };
        out.push((tok, pos));
        i += width;
        col += width;
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::at(
                self.pos(),
                format!("expected {want}, found {}", self.peek()),
            ))
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Var::new(name))
            }
            other => Err(ParseError::at(
                self.pos(),
                format!("expected a variable, found {other}"),
            )),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            lhs = lhs.iff(self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.or()?;
        while *self.peek() == Tok::Imp {
            self.bump();
            lhs = lhs.implies(self.or()?);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.not())
            }
            q @ (Tok::Exists | Tok::Forall) => {
                self.bump();
                let x = self.var()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if q == Tok::Exists {
                    Formula::exists(x, body)
                } else {
                    Formula::forall(x, body)
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(_) => self.chain(),
            other => Err(ParseError::at(
                self.pos(),
                format!("expected a formula, found {other}"),
            )),
        }
    }

    fn chain(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.var()?;
        let mut atoms = Vec::new();
        loop {
            let op = self.peek().clone();
            if !matches!(op, Tok::LtP | Tok::LtV | Tok::Eq | Tok::Rel) {
                break;
            }
            self.bump();
            let right = self.var()?;
            atoms.push(match op {
                Tok::LtP => Formula::LtP(left, right.clone()),
                Tok::LtV => Formula::LtV(left, right.clone()),
                Tok::Eq => Formula::Eq(left, right.clone()),
                _ => Formula::Rel(left, right.clone()),
            });
            left = right;
        }
        Formula::conj(atoms).ok_or_else(|| {
            ParseError::at(
                self.pos(),
                format!("expected a relation after the variable, found {}", self.peek()),
            )
        })
    }
}

/// Parses one formula and checks that it sticks to a single signature.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(ParseError::at(
            p.pos(),
            format!("unexpected {} after the formula", p.peek()),
        ));
    }
    signature_of(&f)?;
    Ok(f)
}

/// Fully parenthesized rendering that [`parse`] reads back to the same tree.
pub fn print(phi: &Formula) -> String {
    let mut out = String::new();
    write_formula(phi, false, &mut out);
    out
}

// `guard` is set in positions where a bare quantifier would swallow the
// text that follows it.
fn write_formula(phi: &Formula, guard: bool, out: &mut String) {
    use Formula::*;
    match phi {
        Eq(a, b) => write_atom(a, "=", b, out),
        LtP(a, b) => write_atom(a, "<P", b, out),
        LtV(a, b) => write_atom(a, "<V", b, out),
        Rel(a, b) => write_atom(a, "R", b, out),
        Not(a) => {
            out.push('!');
            if a.is_atom() || a.is_quantifier() {
                out.push('(');
                write_formula(a, false, out);
                out.push(')');
            } else {
                write_formula(a, true, out);
            }
        }
        And(a, b) => write_binary(a, " & ", b, out),
        Or(a, b) => write_binary(a, " | ", b, out),
        Implies(a, b) => write_binary(a, " -> ", b, out),
        Iff(a, b) => write_binary(a, " <-> ", b, out),
        Exists(x, a) | Forall(x, a) => {
            if guard {
                out.push('(');
            }
            out.push_str(if matches!(phi, Exists(..)) { "E " } else { "A " });
            out.push_str(x.name());
            out.push_str(" . ");
            write_formula(a, false, out);
            if guard {
                out.push(')');
            }
        }
    }
}

fn write_atom(a: &Var, op: &str, b: &Var, out: &mut String) {
    out.push_str(a.name());
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    out.push_str(b.name());
}

fn write_binary(a: &Formula, op: &str, b: &Formula, out: &mut String) {
    out.push('(');
    write_formula(a, true, out);
    out.push_str(op);
    write_formula(b, false, out);
    out.push(')');
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Formula as F;

    #[test]
    fn parses_examples() {
        let phi1 = parse("E x . E y . (x <P y & y <V x)").unwrap();
        assert_eq!(
            phi1,
            F::exists("x", F::exists("y", F::lt_p("x", "y").and(F::lt_v("y", "x"))))
        );
        assert_eq!(parse("A x . x R x").unwrap(), F::forall("x", F::rel("x", "x")));
        assert_eq!(
            parse("x <P y <P z").unwrap(),
            F::lt_p("x", "y").and(F::lt_p("y", "z"))
        );
    }

    #[test]
    fn precedence() {
        let f = parse("a = b | c = d & e = f -> g = h <-> i = j").unwrap();
        let expected = F::eq("a", "b")
            .or(F::eq("c", "d").and(F::eq("e", "f")))
            .implies(F::eq("g", "h"))
            .iff(F::eq("i", "j"));
        assert_eq!(f, expected);
        assert_eq!(parse("!x = y & y = z").unwrap(), F::eq("x", "y").not().and(F::eq("y", "z")));
        assert_eq!(
            parse("a = a -> b = b -> c = c").unwrap(),
            F::eq("a", "a").implies(F::eq("b", "b")).implies(F::eq("c", "c"))
        );
    }

    #[test]
    fn quantifier_scope_is_maximal() {
        assert_eq!(
            parse("E x . x = x & y = y").unwrap(),
            F::exists("x", F::eq("x", "x").and(F::eq("y", "y")))
        );
        assert_eq!(
            parse("(E x . x = x) & y = y").unwrap(),
            F::exists("x", F::eq("x", "x")).and(F::eq("y", "y"))
        );
    }

    #[test]
    fn errors_have_positions() {
        match parse("E x . (x <P y") {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 14)),
            other => panic!("{other:?}"),
        }
        match parse("x <P y &\n  & z = z") {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("_y = _y"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("x # y"), Err(ParseError::Syntax { .. })));
        assert_eq!(
            parse("x R y & x <P y").unwrap_err(),
            ParseError::Logic(LogicError::MixedSignature)
        );
        assert!(parse("_t3 = _t3").is_ok());
    }

    #[test]
    fn printing() {
        assert_eq!(print(&F::lt_p("x", "y")), "x <P y");
        let phi1 = parse("E x . E y . (x <P y & y <V x)").unwrap();
        assert_eq!(print(&phi1), "E x . E y . (x <P y & y <V x)");
        let f = F::exists("x", F::eq("x", "x")).and(F::eq("y", "y"));
        assert_eq!(print(&f), "((E x . x = x) & y = y)");
        assert_eq!(parse(&print(&f)).unwrap(), f);
        let g = F::forall("x", F::rel("x", "x")).not();
        assert_eq!(print(&g), "!(A x . x R x)");
        assert_eq!(parse(&print(&g)).unwrap(), g);
        let h = F::eq("a", "b").and(F::eq("c", "d")).not();
        assert_eq!(parse(&print(&h)).unwrap(), h);
    }

    #[test]
    fn print_parse_is_idempotent_on_canonical_text() {
        let text = print(&parse("A x . A y . (x <P y <-> x <V y)").unwrap());
        assert_eq!(print(&parse(&text).unwrap()), text);
    }
}
