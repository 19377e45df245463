//! Terms in the language of quasigroups with involution, identities,
//! evaluation on loops, and varieties.
//!
//! Terms print fully parenthesised with `.` for products, `/` and `\` for
//! the divisions and a postfix `*` for the involution. Single letters other
//! than `j` are variables; longer names are written in brackets, `[ab]`.

mod degree;
mod expand;
mod parser;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::doubling::{self, DoublingError, DoublingParams};
use crate::involution::Involution;
use crate::loops::{ElemId, LoopTable};

pub use degree::{degrees, is_homogeneous, homogeneity_scaling_check, DegreeVector, ScalingContext, ScalingReport};
pub use expand::{expand_derivative_identities, push_stars, Component, Expansion};
pub use parser::{parse_identity, parse_term, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    One,
    J,
    Mul(Box<Term>, Box<Term>),
    /// `t1 \ t2`.
    LDiv(Box<Term>, Box<Term>),
    /// `t1 / t2`.
    RDiv(Box<Term>, Box<Term>),
    Star(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn mul(a: Term, b: Term) -> Self {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn ldiv(a: Term, b: Term) -> Self {
        Term::LDiv(Box::new(a), Box::new(b))
    }

    pub fn rdiv(a: Term, b: Term) -> Self {
        Term::RDiv(Box::new(a), Box::new(b))
    }

    pub fn star(a: Term) -> Self {
        Term::Star(Box::new(a))
    }

    /// Variables in order of first occurrence, left to right.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::One | Term::J => {}
            Term::Mul(a, b) | Term::LDiv(a, b) | Term::RDiv(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Star(a) => a.collect_vars(out),
        }
    }

    pub fn contains_j(&self) -> bool {
        match self {
            Term::J => true,
            Term::Var(_) | Term::One => false,
            Term::Mul(a, b) | Term::LDiv(a, b) | Term::RDiv(a, b) => a.contains_j() || b.contains_j(),
            Term::Star(a) => a.contains_j(),
        }
    }

    pub fn contains_star(&self) -> bool {
        match self {
            Term::Star(_) => true,
            Term::Var(_) | Term::One | Term::J => false,
            Term::Mul(a, b) | Term::LDiv(a, b) | Term::RDiv(a, b) => a.contains_star() || b.contains_star(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::One | Term::J => 1,
            Term::Mul(a, b) | Term::LDiv(a, b) | Term::RDiv(a, b) => 1 + a.size() + b.size(),
            Term::Star(a) => 1 + a.size(),
        }
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        let binop = |f: &mut fmt::Formatter<'_>, a: &Term, op: &str, b: &Term| {
            if !top {
                f.write_str("(")?;
            }
            a.fmt_inner(f, false)?;
            f.write_str(op)?;
            b.fmt_inner(f, false)?;
            if !top {
                f.write_str(")")?;
            }
            Ok(())
        };
        match self {
            Term::Var(v) => {
                let mut cs = v.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) if c.is_ascii_alphabetic() && c != 'j' => write!(f, "{v}"),
                    _ => write!(f, "[{v}]"),
                }
            }
            Term::One => f.write_str("1"),
            Term::J => f.write_str("j"),
            Term::Mul(a, b) => binop(f, a, ".", b),
            Term::LDiv(a, b) => binop(f, a, "\\", b),
            Term::RDiv(a, b) => binop(f, a, "/", b),
            Term::Star(a) => {
                a.fmt_inner(f, false)?;
                f.write_str("*")
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f, true)
    }
}

/// An equation between two terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
    /// Variables of both sides, in order of first occurrence.
    pub variables: Vec<String>,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        let mut variables = lhs.variables();
        for v in rhs.variables() {
            if !variables.contains(&v) {
                variables.push(v);
            }
        }
        Self { lhs, rhs, variables }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("j may only be evaluated in a double")]
    JNotAllowed,
    #[error("the term uses * but no involution was given")]
    MissingInvolution,
    #[error(transparent)]
    Params(#[from] DoublingError),
}

/// A term with variables replaced by their positions in a fixed list.
#[derive(Debug, Clone)]
enum Node {
    Var(usize),
    One,
    J,
    Mul(Box<Node>, Box<Node>),
    LDiv(Box<Node>, Box<Node>),
    RDiv(Box<Node>, Box<Node>),
    Star(Box<Node>),
}

fn compile(t: &Term, vars: &[String]) -> Result<Node, TermError> {
    let b = |x: &Term| compile(x, vars).map(Box::new);
    Ok(match t {
        Term::Var(v) => Node::Var(vars.iter().position(|w| w == v).ok_or_else(|| TermError::UnboundVariable(v.clone()))?),
        Term::One => Node::One,
        Term::J => Node::J,
        Term::Mul(x, y) => Node::Mul(b(x)?, b(y)?),
        Term::LDiv(x, y) => Node::LDiv(b(x)?, b(y)?),
        Term::RDiv(x, y) => Node::RDiv(b(x)?, b(y)?),
        Term::Star(x) => Node::Star(b(x)?),
    })
}

/// Loop, optional involution and optional value of `j`.
#[derive(Clone, Copy)]
struct Ctx<'a> {
    l: &'a LoopTable,
    inv: Option<&'a Involution>,
    j: Option<ElemId>,
}

impl Ctx<'_> {
    fn check(&self, t: &Term) -> Result<(), TermError> {
        if t.contains_j() && self.j.is_none() {
            return Err(TermError::JNotAllowed);
        }
        if t.contains_star() && self.inv.is_none() {
            return Err(TermError::MissingInvolution);
        }
        Ok(())
    }

    fn eval(&self, node: &Node, vals: &[ElemId]) -> ElemId {
        match node {
            Node::Var(i) => vals[*i],
            Node::One => 0,
            Node::J => self.j.expect("checked"),
            Node::Mul(a, b) => self.l.mul(self.eval(a, vals), self.eval(b, vals)),
            Node::LDiv(a, b) => self.l.ldiv(self.eval(a, vals), self.eval(b, vals)),
            Node::RDiv(a, b) => self.l.rdiv(self.eval(a, vals), self.eval(b, vals)),
            Node::Star(a) => self.inv.expect("checked").apply(self.eval(a, vals)),
        }
    }
}

/// Evaluates a `j`-free term under an assignment of its variables.
pub fn eval_term(
    l: &LoopTable,
    inv: Option<&Involution>,
    assignment: &[(&str, ElemId)],
    t: &Term,
) -> Result<ElemId, TermError> {
    eval_in(l, inv, None, assignment, t)
}

fn eval_in(
    l: &LoopTable,
    inv: Option<&Involution>,
    j: Option<ElemId>,
    assignment: &[(&str, ElemId)],
    t: &Term,
) -> Result<ElemId, TermError> {
    let ctx = Ctx { l, inv, j };
    ctx.check(t)?;
    let names: Vec<String> = assignment.iter().map(|(v, _)| v.to_string()).collect();
    let vals: Vec<ElemId> = assignment.iter().map(|&(_, x)| x).collect();
    let node = compile(t, &names)?;
    Ok(ctx.eval(&node, &vals))
}

/// Result of an exhaustive identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    /// Values of the variables (in the identity's order) for the first
    /// failing assignment in lexicographic order.
    pub witness: Option<Vec<(String, ElemId)>>,
}

/// Checks an identity over all assignments of its variables.
pub fn check_identity(l: &LoopTable, inv: Option<&Involution>, id: &Identity) -> Result<IdentityCheck, TermError> {
    let ctx = Ctx { l, inv, j: None };
    ctx.check(&id.lhs)?;
    ctx.check(&id.rhs)?;
    let lhs = compile(&id.lhs, &id.variables)?;
    let rhs = compile(&id.rhs, &id.variables)?;
    let n = l.order();
    let k = id.variables.len();
    let fails = |first: ElemId| -> Option<Vec<ElemId>> {
        let mut vals = vec![0; k];
        if k == 0 {
            return (ctx.eval(&lhs, &vals) != ctx.eval(&rhs, &vals)).then_some(vals);
        }
        vals[0] = first;
        loop {
            if ctx.eval(&lhs, &vals) != ctx.eval(&rhs, &vals) {
                return Some(vals);
            }
            let mut i = k;
            loop {
                if i == 1 {
                    return None;
                }
                i -= 1;
                vals[i] += 1;
                if vals[i] < n {
                    break;
                }
                vals[i] = 0;
            }
        }
    };
    let firsts = if k == 0 { 0..1 } else { 0..n };
    let witness = firsts.into_par_iter().find_map_first(fails);
    Ok(IdentityCheck {
        holds: witness.is_none(),
        witness: witness.map(|w| id.variables.iter().cloned().zip(w).collect()),
    })
}

/// A named finite set of identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietySpec {
    pub name: String,
    pub identities: Vec<Identity>,
}

impl VarietySpec {
    /// One identity per line; `#` starts a comment.
    pub fn parse(name: &str, text: &str) -> Result<Self, TermError> {
        let identities = text
            .lines()
            .map(|line| line.split('#').next().unwrap_or("").trim())
            .filter(|line| !line.is_empty())
            .map(|line| parse_identity(line).map_err(TermError::from))
            .collect::<Result<_, _>>()?;
        Ok(Self { name: name.to_string(), identities })
    }

    pub fn from_lines(name: &str, lines: &[&str]) -> Self {
        Self::parse(name, &lines.join("\n")).expect("well-formed identities")
    }
}

/// Whether every identity of the variety holds.
pub fn variety_membership(l: &LoopTable, inv: Option<&Involution>, v: &VarietySpec) -> Result<bool, TermError> {
    for id in &v.identities {
        if !check_identity(l, inv, id)?.holds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `D(L,*,1,1)` lies in the variety.
pub fn derivative_membership(l: &LoopTable, inv: &Involution, v: &VarietySpec) -> Result<bool, TermError> {
    let d = doubling::double(l, inv, DoublingParams { gamma: 0, epsilon: Some(0) })?;
    variety_membership(d.table(), d.star(), v)
}

/// Frequently used varieties.
pub mod named {
    use super::VarietySpec;

    pub fn commutative() -> VarietySpec {
        VarietySpec::from_lines("COMM", &["x.y = y.x"])
    }

    pub fn associative() -> VarietySpec {
        VarietySpec::from_lines("ASSOC", &["(x.y).z = x.(y.z)"])
    }

    pub fn identity_involution() -> VarietySpec {
        VarietySpec::from_lines("IDEN", &["x* = x"])
    }

    pub fn moufang() -> VarietySpec {
        VarietySpec::from_lines("MOUF", &["(z.x).(y.z) = (z.(x.y)).z"])
    }

    pub fn left_alternative() -> VarietySpec {
        VarietySpec::from_lines("LALT", &["(x.x).y = x.(x.y)"])
    }

    pub fn right_alternative() -> VarietySpec {
        VarietySpec::from_lines("RALT", &["(y.x).x = y.(x.x)"])
    }

    /// Every square commutes and associates with everything.
    pub fn squares_central() -> VarietySpec {
        VarietySpec::from_lines(
            "E2",
            &[
                "(x.x).y = y.(x.x)",
                "((x.x).y).z = (x.x).(y.z)",
                "(y.(x.x)).z = y.((x.x).z)",
                "(y.z).(x.x) = y.(z.(x.x))",
            ],
        )
    }

    /// `x*x` commutes and associates with everything.
    pub fn normal() -> VarietySpec {
        VarietySpec::from_lines(
            "NORMAL",
            &[
                "(x*.x).y = y.(x*.x)",
                "((x*.x).y).z = (x*.x).(y.z)",
                "(y.(x*.x)).z = y.((x*.x).z)",
                "(y.z).(x*.x) = y.(z.(x*.x))",
            ],
        )
    }

    pub fn inverse_property() -> VarietySpec {
        VarietySpec::from_lines("IP", &["(1/x).(x.y) = y", "(y.x).(x\\1) = y"])
    }

    pub fn anti_automorphic_inverse() -> VarietySpec {
        VarietySpec::from_lines("AA", &["1/(x.y) = (1/y).(1/x)"])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn printing_is_fully_parenthesised() {
        let t = parse_term("(z.x).(y.z)").unwrap();
        assert_eq!(t.to_string(), "(z.x).(y.z)");
        assert_eq!(parse_term("(x.y)*").unwrap().to_string(), "(x.y)*");
        assert_eq!(parse_term("x\\1").unwrap(), Term::ldiv(Term::var("x"), Term::One));
        assert_eq!(Term::var("ab").to_string(), "[ab]");
        assert_eq!(Term::star(Term::star(Term::var("x"))).to_string(), "x**");
    }

    #[test]
    fn evaluation_on_the_quaternions() {
        let (q2, inv) = catalog::qn(2);
        let (i, j) = (q2.find("e1").unwrap(), q2.find("e2").unwrap());
        let t = parse_term("(x.y)*").unwrap();
        assert_eq!(eval_term(&q2, Some(&inv), &[("x", i), ("y", j)], &t).unwrap(), q2.find("-e1e2").unwrap());
        let r = parse_term("x\\1").unwrap();
        assert_eq!(eval_term(&q2, None, &[("x", i)], &r).unwrap(), q2.find("-e1").unwrap());
        assert_eq!(eval_term(&q2, None, &[("x", i)], &Term::var("x")).unwrap(), i);
        assert_eq!(eval_term(&q2, None, &[], &Term::var("x")).unwrap_err(), TermError::UnboundVariable("x".into()));
        assert_eq!(eval_term(&q2, None, &[], &Term::J).unwrap_err(), TermError::JNotAllowed);
        assert_eq!(eval_term(&q2, Some(&inv), &[("x", i)], &t).unwrap_err(), TermError::UnboundVariable("y".into()));
        assert_eq!(eval_term(&q2, None, &[("x", i), ("y", j)], &t).unwrap_err(), TermError::MissingInvolution);
    }

    #[test]
    fn identity_checks() {
        let (q2, _) = catalog::qn(2);
        let comm = parse_identity("x.y = y.x").unwrap();
        assert_eq!(comm.variables, vec!["x", "y"]);
        let r = check_identity(&q2, None, &comm).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap(), vec![("x".into(), q2.find("e1").unwrap()), ("y".into(), q2.find("e2").unwrap())]);
        assert!(check_identity(&q2, None, &parse_identity("x = x").unwrap()).unwrap().holds);
        assert!(check_identity(&q2, None, &parse_identity("1 = 1").unwrap()).unwrap().holds);
        let (q3, _) = catalog::qn(3);
        assert!(variety_membership(&q3, None, &named::moufang()).unwrap());
    }

    #[test]
    fn derivative_memberships() {
        let (z2, id) = catalog::q0();
        assert!(derivative_membership(&z2, &id, &named::commutative()).unwrap());
        let (q2, inv) = catalog::qn(2);
        assert!(derivative_membership(&q2, &inv, &named::moufang()).unwrap());
        let (q3, inv3) = catalog::qn(3);
        assert!(!derivative_membership(&q3, &inv3, &named::moufang()).unwrap());
    }

    #[test]
    fn variety_files_allow_comments() {
        let v = VarietySpec::parse("V", "# header\nx.y = y.x  # commutative\n\n x* = x\n").unwrap();
        assert_eq!(v.identities.len(), 2);
        assert!(VarietySpec::parse("V", "x.y = ").is_err());
    }
}
