//! Degrees of terms in `j`, `γ` and `ε`, and the scaling law they predict.
//!
//! Evaluating a term in `D(L,*,γ,ε)` with some variables taken from `Lj`
//! gives the value in `D(L,*,1,1)` multiplied by `γ^dγ ε^dε`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{eval_in, Identity, Term, TermError};
use crate::doubling::{self, DoubleResult, DoublingParams};
use crate::involution::Involution;
use crate::loops::{ElemId, LoopTable};

/// `(deg_j, deg_γ, deg_ε)`; the first and last are taken mod 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeVector {
    pub dj: u8,
    pub dgamma: i64,
    pub deps: u8,
}

/// Degrees of `t` when the variables in `marks` range over `Lj`.
pub fn degrees(t: &Term, marks: &BTreeSet<String>) -> DegreeVector {
    let d = |dj, dgamma, deps| DegreeVector { dj, dgamma, deps };
    match t {
        Term::Var(v) if marks.contains(v) => d(1, 0, 0),
        Term::Var(_) | Term::One => d(0, 0, 0),
        Term::J => d(1, 0, 0),
        Term::Mul(a, b) => {
            let (a, b) = (degrees(a, marks), degrees(b, marks));
            d(a.dj ^ b.dj, a.dgamma + b.dgamma + (a.dj * b.dj) as i64, a.deps ^ b.deps)
        }
        Term::RDiv(a, b) => {
            let (a, b) = (degrees(a, marks), degrees(b, marks));
            let g = a.dgamma - b.dgamma - (b.dj * (1 - a.dj)) as i64;
            d(a.dj ^ b.dj, g, a.deps ^ b.deps)
        }
        Term::LDiv(a, b) => {
            let (a, b) = (degrees(a, marks), degrees(b, marks));
            let g = b.dgamma - a.dgamma - (a.dj * (1 - b.dj)) as i64;
            d(a.dj ^ b.dj, g, a.deps ^ b.deps)
        }
        Term::Star(a) => {
            let a = degrees(a, marks);
            d(a.dj, a.dgamma, a.deps ^ a.dj)
        }
    }
}

/// Both sides have the same `γ`- and `ε`-degrees under the marking.
pub fn is_homogeneous(id: &Identity, marks: &BTreeSet<String>) -> bool {
    let (l, r) = (degrees(&id.lhs, marks), degrees(&id.rhs, marks));
    l.dgamma == r.dgamma && l.deps == r.deps
}

/// The doubles `D(L,*,1,1)` and `D(L,*,γ,ε)` on the common carrier.
pub struct ScalingContext {
    plain: DoubleResult,
    scaled: DoubleResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalingReport {
    pub degrees: DegreeVector,
    /// Value in `D(L,*,1,1)`.
    pub plain: ElemId,
    /// Value in `D(L,*,γ,ε)`.
    pub scaled: ElemId,
    /// `plain · γ^dγ ε^dε`, computed in `D(L,*,γ,ε)`.
    pub predicted: ElemId,
    pub holds: bool,
}

impl ScalingContext {
    pub fn new(l: &LoopTable, inv: &Involution, gamma: ElemId, epsilon: ElemId) -> Result<Self, TermError> {
        let plain = doubling::double(l, inv, DoublingParams { gamma: 0, epsilon: Some(0) })?;
        let scaled = doubling::double(l, inv, DoublingParams { gamma, epsilon: Some(epsilon) })?;
        Ok(Self { plain, scaled })
    }

    /// The carrier `L ∪ Lj`, with `aj` at `n + a`.
    pub fn carrier(&self) -> &LoopTable {
        self.scaled.table()
    }

    /// Evaluates `t` in both doubles; variables are assigned carrier elements.
    pub fn check(&self, t: &Term, assignment: &[(&str, ElemId)]) -> Result<ScalingReport, TermError> {
        let n = self.plain.n();
        let marks: BTreeSet<String> = assignment.iter().filter(|(_, x)| *x >= n).map(|(v, _)| v.to_string()).collect();
        let degrees = degrees(t, &marks);
        let j = Some(self.plain.j());
        let plain = eval_in(self.plain.table(), self.plain.star(), j, assignment, t)?;
        let scaled = eval_in(self.scaled.table(), self.scaled.star(), j, assignment, t)?;
        let base = self.scaled.base();
        let params = self.scaled.params();
        let factor = base.mul(
            base.pow(params.gamma, degrees.dgamma),
            base.pow(params.epsilon.unwrap_or(0), degrees.deps as i64),
        );
        let predicted = self.scaled.table().mul(plain, factor);
        Ok(ScalingReport { degrees, plain, scaled, predicted, holds: predicted == scaled })
    }
}

/// One-off form of [`ScalingContext::check`].
pub fn homogeneity_scaling_check(
    l: &LoopTable,
    inv: &Involution,
    gamma: ElemId,
    epsilon: ElemId,
    t: &Term,
    assignment: &[(&str, ElemId)],
) -> Result<ScalingReport, TermError> {
    ScalingContext::new(l, inv, gamma, epsilon)?.check(t, assignment)
}
