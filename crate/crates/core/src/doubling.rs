//! The Cayley-Dickson double `D(L, *, γ, ε)`.
//!
//! For a loop `L` of order `n` the double has order `2n`. Element `a` of `L`
//! keeps its index, `aj` is stored at `n + a`, and `j` itself is element `n`.
//! Multiplication is
//!
//! ```text
//! a(bj) = (ba)j,   (aj)b = (ab*)j,   (aj)(bj) = γ b*a,
//! ```
//!
//! and when `ε` is given the involution extends by `(aj)* = (εa)j`.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog;
use crate::involution::Involution;
use crate::loops::{ElemId, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DoublingError {
    #[error("gamma ({0}) is not central")]
    GammaNotCentral(ElemId),
    #[error("epsilon ({0}) is not central")]
    EpsilonNotCentral(ElemId),
    #[error("epsilon ({0}) does not square to 1")]
    EpsilonNotOrderTwo(ElemId),
    #[error("epsilon * gamma is not symmetric")]
    EpsilonGammaNotSymmetric,
    #[error("element {0} is out of range")]
    BadElement(ElemId),
    #[error("base loop is not associative")]
    NotAssociative,
    #[error("center order {0} is odd")]
    OddCenter(usize),
    #[error("Q_{0} exceeds the order cap")]
    OrderCap(usize),
    #[error("step {step}: {source}")]
    Step { step: usize, source: Box<DoublingError> },
    #[error("only the last step of an iterated double may omit epsilon")]
    MissingInvolution,
}

/// Parameters `γ` and optional `ε` of a double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DoublingParams {
    pub gamma: ElemId,
    /// Without `ε` the double carries no involution.
    pub epsilon: Option<ElemId>,
}

/// Checks `γ ∈ Z(L)` and, when `ε` is given, `ε ∈ Z(L)`, `ε² = 1` and
/// `(εγ)* = εγ`.
pub fn validate_params(
    l: &LoopTable,
    inv: &Involution,
    gamma: ElemId,
    epsilon: Option<ElemId>,
) -> Result<DoublingParams, DoublingError> {
    let n = l.order();
    for x in std::iter::once(gamma).chain(epsilon) {
        if x >= n {
            return Err(DoublingError::BadElement(x));
        }
    }
    let zmask = l.center_mask();
    if !zmask[gamma] {
        return Err(DoublingError::GammaNotCentral(gamma));
    }
    if let Some(e) = epsilon {
        if !zmask[e] {
            return Err(DoublingError::EpsilonNotCentral(e));
        }
        if l.mul(e, e) != 0 {
            return Err(DoublingError::EpsilonNotOrderTwo(e));
        }
        let eg = l.mul(e, gamma);
        if inv.apply(eg) != eg {
            return Err(DoublingError::EpsilonGammaNotSymmetric);
        }
    }
    Ok(DoublingParams { gamma, epsilon })
}

/// A doubled loop together with its base.
#[derive(Debug, Clone)]
pub struct DoubleResult {
    m: LoopTable,
    star: Option<Involution>,
    base: LoopTable,
    base_star: Involution,
    params: DoublingParams,
}

impl DoubleResult {
    pub fn table(&self) -> &LoopTable {
        &self.m
    }

    pub fn into_loop(self) -> LoopTable {
        self.m
    }

    pub fn star(&self) -> Option<&Involution> {
        self.star.as_ref()
    }

    pub fn base(&self) -> &LoopTable {
        &self.base
    }

    pub fn base_star(&self) -> &Involution {
        &self.base_star
    }

    pub fn params(&self) -> DoublingParams {
        self.params
    }

    /// Order of the base loop.
    pub fn n(&self) -> usize {
        self.base.order()
    }

    /// The element `j`.
    pub fn j(&self) -> ElemId {
        self.base.order()
    }

    /// Image of a base element; the embedding is the identity on indices.
    pub fn embed(&self, a: ElemId) -> ElemId {
        debug_assert!(a < self.n());
        a
    }

    /// The element `aj`.
    pub fn aj(&self, a: ElemId) -> ElemId {
        self.n() + a
    }
}

fn fresh_name(l: &LoopTable) -> String {
    let taken: HashSet<&str> = l.names().iter().map(String::as_str).collect();
    std::iter::once("j".to_string())
        .chain((2..).map(|k| format!("j{k}")))
        .find(|c| !taken.contains(c.as_str()))
        .unwrap()
}

fn double_names(l: &LoopTable, jname: &str) -> Vec<String> {
    let lifted = |a: ElemId| match l.name(a) {
        "1" => jname.to_string(),
        "-1" => format!("-{jname}"),
        s => format!("{s}{jname}"),
    };
    let mut names: Vec<String> = l.names().to_vec();
    names.extend(l.elements().map(lifted));
    let unique: HashSet<&String> = names.iter().collect();
    if unique.len() == names.len() {
        names
    } else {
        let mut names = l.names().to_vec();
        names.extend(l.elements().map(|a| format!("({}){jname}", l.name(a))));
        names
    }
}

/// Builds `D(L, *, γ, ε)` after validating the parameters. The new generator
/// is named `j` (or the first free `j2`, `j3`, ...).
pub fn double(l: &LoopTable, inv: &Involution, params: DoublingParams) -> Result<DoubleResult, DoublingError> {
    let jname = fresh_name(l);
    double_named(l, inv, params, &jname)
}

/// As [`double`], naming the new generator `jname`.
pub fn double_named(
    l: &LoopTable,
    inv: &Involution,
    params: DoublingParams,
    jname: &str,
) -> Result<DoubleResult, DoublingError> {
    let params = validate_params(l, inv, params.gamma, params.epsilon)?;
    let n = l.order();
    let g = params.gamma;
    let s = |x: ElemId| inv.apply(x);
    let mut flat = Vec::with_capacity(4 * n * n);
    for x in 0..2 * n {
        let (a, xj) = (x % n, x >= n);
        for y in 0..2 * n {
            let (b, yj) = (y % n, y >= n);
            let z = match (xj, yj) {
                (false, false) => l.mul(a, b),
                (false, true) => n + l.mul(b, a),
                (true, false) => n + l.mul(a, s(b)),
                (true, true) => l.mul(g, l.mul(s(b), a)),
            };
            flat.push(z as u16);
        }
    }
    let m = LoopTable::from_flat(2 * n, flat, double_names(l, jname)).expect("a double is a loop");
    let star = params.epsilon.map(|e| {
        let perm = (0..2 * n)
            .map(|x| if x < n { s(x) } else { n + l.mul(e, x - n) })
            .collect();
        Involution::from_perm_unchecked(perm)
    });
    debug_assert!(star.as_ref().is_none_or(|st| Involution::new(&m, st.perm().to_vec()).is_ok()));
    Ok(DoubleResult { m, star, base: l.clone(), base_star: inv.clone(), params })
}

/// Iterated doubling, left to right. Every step but the last needs an `ε` so
/// that the next base carries an involution; parameters are element ids of
/// the loop at that step.
pub fn double_iterate(
    l: &LoopTable,
    inv: &Involution,
    gammas: &[ElemId],
    epsilons: &[Option<ElemId>],
) -> Result<Vec<DoubleResult>, DoublingError> {
    assert_eq!(gammas.len(), epsilons.len(), "one epsilon slot per step");
    let mut out: Vec<DoubleResult> = Vec::with_capacity(gammas.len());
    let mut cur = (l.clone(), inv.clone());
    for (step, (&g, &e)) in gammas.iter().zip(epsilons).enumerate() {
        let wrap = |source| DoublingError::Step { step, source: Box::new(source) };
        if e.is_none() && step + 1 < gammas.len() {
            return Err(wrap(DoublingError::MissingInvolution));
        }
        let d = double(&cur.0, &cur.1, DoublingParams { gamma: g, epsilon: e }).map_err(wrap)?;
        if let Some(st) = d.star() {
            cur = (d.table().clone(), st.clone());
        }
        out.push(d);
    }
    Ok(out)
}

/// The chain `Q_1, ..., Q_n`, with `Q_0 = {±1}` and `Q_k = D(Q_{k-1}, *, -1, -1)`.
/// The generators are named `e1, e2, ...`.
pub fn build_qn(n: usize) -> Result<Vec<DoubleResult>, DoublingError> {
    if n > 8 {
        return Err(DoublingError::OrderCap(n));
    }
    let (mut l, mut inv) = catalog::q0();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        // -1 stays at index 1 through every embedding
        let params = DoublingParams { gamma: 1, epsilon: Some(1) };
        let d = double_named(&l, &inv, params, &format!("e{k}"))?;
        l = d.table().clone();
        inv = d.star().cloned().unwrap();
        out.push(d);
    }
    Ok(out)
}

/// Chein's double `M(G, 2) = D(G, inverse, 1, 1)` of a group.
pub fn build_chein(g: &LoopTable) -> Result<DoubleResult, DoublingError> {
    if !g.is_associative() {
        return Err(DoublingError::NotAssociative);
    }
    let inv = Involution::inverse(g).expect("inversion is an involution of a group");
    double(g, &inv, DoublingParams { gamma: 0, epsilon: Some(0) })
}

/// Iterated doubles of `Z_m` with the identity involution, using
/// `γ_i = z^{e_i}` and `ε = z^{m/2}` at every step.
pub fn build_general(m: usize, exponents: &[i64]) -> Result<Vec<DoubleResult>, DoublingError> {
    if m == 0 || m % 2 == 1 {
        return Err(DoublingError::OddCenter(m));
    }
    let z = catalog::cyclic(m);
    let id = Involution::identity(&z).expect("cyclic groups are commutative");
    let gammas: Vec<ElemId> = exponents.iter().map(|&e| e.rem_euclid(m as i64) as usize).collect();
    let epsilons = vec![Some(m / 2); gammas.len()];
    double_iterate(&z, &id, &gammas, &epsilons)
}

/// Which side of a row of the associativity table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Bracketing {
    /// `(xy)z`
    Left,
    /// `x(yz)`
    Right,
}

/// A disagreement between a direct product in the double and the formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TableMismatch {
    /// Row `1..=8`; bit `k` of `row - 1` says whether the `k`-th factor
    /// (from the left, most significant first) carries `j`.
    pub row: u8,
    pub a: ElemId,
    pub b: ElemId,
    pub c: ElemId,
    pub side: Bracketing,
    pub direct: ElemId,
    pub formula: ElemId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleTableReport {
    pub checks: usize,
    pub mismatches: Vec<TableMismatch>,
}

/// Evaluates both bracketings of every triple `(x, y, z)` with
/// `x, y, z ∈ L ∪ Lj` directly in the double and via the closed formulas
/// over `L`.
pub fn verify_triple_table(d: &DoubleResult) -> TripleTableReport {
    let l = &d.base;
    let m = &d.m;
    let n = l.order();
    let g = d.params.gamma;
    let s = |x: ElemId| d.base_star.apply(x);
    let mul = |x: ElemId, y: ElemId| l.mul(x, y);
    let mut mismatches: Vec<TableMismatch> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut out = Vec::new();
            for b in 0..n {
                for c in 0..n {
                    for row in 1..=8u8 {
                        let bits = row - 1;
                        let (xj, yj, zj) = (bits & 4 != 0, bits & 2 != 0, bits & 1 != 0);
                        let x = if xj { n + a } else { a };
                        let y = if yj { n + b } else { b };
                        let z = if zj { n + c } else { c };
                        let left = m.mul(m.mul(x, y), z);
                        let right = m.mul(x, m.mul(y, z));
                        let (fl, fr) = match row {
                            1 => (mul(mul(a, b), c), mul(a, mul(b, c))),
                            2 => (n + mul(c, mul(a, b)), n + mul(mul(c, b), a)),
                            3 => (n + mul(mul(b, a), s(c)), n + mul(mul(b, s(c)), a)),
                            4 => (mul(g, mul(s(c), mul(b, a))), mul(g, mul(a, mul(s(c), b)))),
                            5 => (n + mul(mul(a, s(b)), s(c)), n + mul(a, mul(s(c), s(b)))),
                            6 => (mul(g, mul(s(c), mul(a, s(b)))), mul(g, mul(mul(s(b), s(c)), a))),
                            7 => (mul(g, mul(mul(s(b), a), c)), mul(g, mul(mul(c, s(b)), a))),
                            _ => (n + mul(g, mul(c, mul(s(b), a))), n + mul(s(g), mul(a, mul(s(b), c)))),
                        };
                        for (side, direct, formula) in
                            [(Bracketing::Left, left, fl), (Bracketing::Right, right, fr)]
                        {
                            if direct != formula {
                                out.push(TableMismatch { row, a, b, c, side, direct, formula });
                            }
                        }
                    }
                }
            }
            out.into_iter()
        })
        .collect();
    mismatches.sort();
    TripleTableReport { checks: 16 * n * n * n, mismatches }
}

/// A failed formula instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FormulaMismatch {
    pub formula: &'static str,
    pub args: Vec<ElemId>,
    pub expected: ElemId,
    pub got: ElemId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaReport {
    pub commutator_checks: usize,
    pub associator_checks: usize,
    /// The associator block needs a central-by-abelian base.
    pub associators_skipped: bool,
    /// Every commutator of the double lies in the base.
    pub commutators_in_base: bool,
    /// Every associator of the double lies in the base.
    pub associators_in_base: bool,
    pub mismatches: Vec<FormulaMismatch>,
}

impl FormulaReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.commutators_in_base && self.associators_in_base
    }
}

pub(crate) fn is_central_by_abelian(l: &LoopTable, zmask: &[bool]) -> bool {
    let n = l.order();
    (0..n).into_par_iter().all(|a| {
        (0..n).all(|b| zmask[l.commutator(a, b)] && (0..n).all(|c| zmask[l.associator(a, b, c)]))
    })
}

/// Checks the closed forms of commutators and (for central-by-abelian bases)
/// associators of the double against direct computation.
pub fn verify_double_formulas(d: &DoubleResult) -> FormulaReport {
    let l = &d.base;
    let m = &d.m;
    let n = l.order();
    let g = d.params.gamma;
    let s = |x: ElemId| d.base_star.apply(x);
    let mul = |x: ElemId, y: ElemId| l.mul(x, y);
    let prod = |xs: &[ElemId]| l.product(xs.iter().copied());
    let inv = |x: ElemId| l.inv(x);
    let comm = |x: ElemId, y: ElemId| l.commutator(x, y);
    let assoc = |x: ElemId, y: ElemId, z: ElemId| l.associator(x, y, z);
    let mut mismatches = Vec::new();
    let mut check = |formula: &'static str, args: Vec<ElemId>, expected: ElemId, got: ElemId| {
        if expected != got {
            mismatches.push(FormulaMismatch { formula, args, expected, got });
        }
    };

    for a in 0..n {
        for b in 0..n {
            let k = m.commutator(a, n + b);
            check("[a,bj](ab*) = a*b*", vec![a, b], mul(s(a), s(b)), mul(k % n, mul(a, s(b))));
            let k = m.commutator(n + a, b);
            check("[aj,b](b*a*) = ba*", vec![a, b], mul(b, s(a)), mul(k % n, mul(s(b), s(a))));
            let k = m.commutator(n + a, n + b);
            check("b*a = (a*b)[aj,bj]", vec![a, b], mul(s(b), a), mul(mul(s(a), b), k % n));
            check("[bj,a*] = [a,bj]", vec![a, b], m.commutator(a, n + b), m.commutator(n + b, s(a)));
        }
    }
    let commutator_checks = 4 * n * n;

    let commutators_in_base = (0..2 * n)
        .into_par_iter()
        .all(|x| (0..2 * n).all(|y| m.commutator(x, y) < n));
    let associators_in_base = (0..2 * n)
        .into_par_iter()
        .all(|x| (0..2 * n).all(|y| (0..2 * n).all(|z| m.associator(x, y, z) < n)));

    let zmask = l.center_mask();
    let associators_skipped = !is_central_by_abelian(l, &zmask);
    let mut associator_checks = 0;
    if !associators_skipped {
        let gg = mul(s(g), inv(g));
        let found: Vec<FormulaMismatch> = (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut out = Vec::new();
                for b in 0..n {
                    for c in 0..n {
                        let (sa, sb, sc) = (s(a), s(b), s(c));
                        let rows: [(&'static str, ElemId, ElemId); 8] = [
                            ("[a,b,c]", m.associator(a, b, c), assoc(a, b, c)),
                            (
                                "[a,b,cj] = [a*,b*,c*][b*,a*]",
                                m.associator(a, b, n + c),
                                prod(&[assoc(sa, sb, sc), comm(sb, sa)]),
                            ),
                            (
                                "[a,bj,c] = [c,a*,b*]^-1[a*,c,b*][c,a*]",
                                m.associator(a, n + b, c),
                                prod(&[inv(assoc(c, sa, sb)), assoc(sa, c, sb), comm(c, sa)]),
                            ),
                            (
                                "[a,bj,cj] = [c*,a,b]^-1[a,c*,b][c*,a][b,a]",
                                m.associator(a, n + b, n + c),
                                prod(&[inv(assoc(sc, a, b)), assoc(a, sc, b), comm(sc, a), comm(b, a)]),
                            ),
                            (
                                "[aj,b,c] = [c,b,a*]^-1[c,b]",
                                m.associator(n + a, b, c),
                                prod(&[inv(assoc(c, b, sa)), comm(c, b)]),
                            ),
                            (
                                "[aj,b,cj] = [c*,b*,a]^-1[a,b*][c*,b*]",
                                m.associator(n + a, b, n + c),
                                prod(&[inv(assoc(sc, sb, a)), comm(a, sb), comm(sc, sb)]),
                            ),
                            (
                                "[aj,bj,c] = [b*,a,c][b*,c,a]^-1[b*,c][a,c]",
                                m.associator(n + a, n + b, c),
                                prod(&[assoc(sb, a, c), inv(assoc(sb, c, a)), comm(sb, c), comm(a, c)]),
                            ),
                            (
                                "[aj,bj,cj] = g*g^-1[c*,b,a*]^-1[a*b,c*][a*,b]",
                                m.associator(n + a, n + b, n + c),
                                prod(&[gg, inv(assoc(sc, b, sa)), comm(mul(sa, b), sc), comm(sa, b)]),
                            ),
                        ];
                        for (formula, got, expected) in rows {
                            if got != expected {
                                out.push(FormulaMismatch { formula, args: vec![a, b, c], expected, got });
                            }
                        }
                    }
                }
                out.into_iter()
            })
            .collect();
        mismatches.extend(found);
        associator_checks = 8 * n * n * n;
    }
    mismatches.sort();
    FormulaReport {
        commutator_checks,
        associator_checks,
        associators_skipped,
        commutators_in_base,
        associators_in_base,
        mismatches,
    }
}
