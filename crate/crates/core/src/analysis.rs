//! Property predicates, the Moufang criterion for doubles, diassociativity,
//! octonion loops, locally Moufang elements and j-partners.
//!
//! Every predicate quantifies exhaustively and reports the first
//! counterexample in lexicographic order of the quantified variables.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::doubling::{self, DoublingError, DoublingParams};
use crate::f2::{self, ElementaryQuotient};
use crate::involution::Involution;
use crate::loops::{ElemId, LoopTable, SubloopHandle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("loop is not central-by-abelian with central squares")]
    NotInZAE2,
    #[error("gamma ({0}) is not a symmetric central element")]
    GammaNotSymmetricCentral(ElemId),
    #[error("dimension {0} is below 3")]
    DimTooSmall(u32),
    #[error("j lies in the span of U modulo the center")]
    JInU,
    #[error(transparent)]
    Doubling(#[from] DoublingError),
}

fn first_pair(n: usize, mut bad: impl FnMut(ElemId, ElemId) -> bool) -> Option<Vec<ElemId>> {
    (0..n).find_map(|a| (0..n).find(|&b| bad(a, b)).map(|b| vec![a, b]))
}

fn first_triple(
    xs: &[ElemId],
    mut bad: impl FnMut(ElemId, ElemId, ElemId) -> bool,
) -> Option<Vec<ElemId>> {
    for &a in xs {
        for &b in xs {
            for &c in xs {
                if bad(a, b, c) {
                    return Some(vec![a, b, c]);
                }
            }
        }
    }
    None
}

/// Witness `(x, y, z)` against `(zx)(yz) = (z(xy))z` with all variables in
/// `members`.
pub fn moufang_witness_on(l: &LoopTable, members: &[ElemId]) -> Option<Vec<ElemId>> {
    first_triple(members, |x, y, z| {
        l.mul(l.mul(z, x), l.mul(y, z)) != l.mul(l.mul(z, l.mul(x, y)), z)
    })
}

pub fn is_moufang(l: &LoopTable) -> bool {
    let all: Vec<ElemId> = l.elements().collect();
    moufang_witness_on(l, &all).is_none()
}

fn associative_on(l: &LoopTable, members: &[ElemId]) -> bool {
    first_triple(members, |a, b, c| l.associator(a, b, c) != 0).is_none()
}

/// Property flags of a loop; `witnesses` holds a counterexample for every
/// flag that is false.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub commutative: bool,
    pub associative: bool,
    pub flexible: bool,
    pub left_alternative: bool,
    pub right_alternative: bool,
    pub alternative: bool,
    pub moufang: bool,
    pub power_associative: bool,
    pub diassociative: bool,
    pub central_by_abelian: bool,
    pub exp2: bool,
    pub inverse_property: bool,
    pub weak_inverse: bool,
    pub anti_automorphic_inverse: bool,
    pub well_defined_inverse: bool,
    pub anti_commutative: bool,
    /// Present only when an involution is supplied.
    pub anti_symmetric: Option<bool>,
    pub witnesses: BTreeMap<&'static str, Vec<ElemId>>,
}

/// Decides every flag exhaustively; diassociativity by generating each
/// two-generator subloop.
pub fn property_report(l: &LoopTable, inv: Option<&Involution>) -> PropertyReport {
    let n = l.order();
    let all: Vec<ElemId> = l.elements().collect();
    let zmask = l.center_mask();
    let mut w: BTreeMap<&'static str, Vec<ElemId>> = BTreeMap::new();
    let mut record = |name: &'static str, found: Option<Vec<ElemId>>| -> bool {
        match found {
            Some(v) => {
                w.insert(name, v);
                false
            }
            None => true,
        }
    };
    let lam = |x: ElemId| l.rdiv(0, x);
    let rho = |x: ElemId| l.ldiv(x, 0);

    let commutative = record("commutative", first_pair(n, |a, b| l.mul(a, b) != l.mul(b, a)));
    let associative = record("associative", l.first_nonassociative().map(|(a, b, c)| vec![a, b, c]));
    let flexible = record(
        "flexible",
        first_pair(n, |x, y| l.mul(l.mul(x, y), x) != l.mul(x, l.mul(y, x))),
    );
    let left_alternative = record(
        "left_alternative",
        first_pair(n, |x, y| l.mul(l.mul(x, x), y) != l.mul(x, l.mul(x, y))),
    );
    let right_alternative = record(
        "right_alternative",
        first_pair(n, |x, y| l.mul(l.mul(y, x), x) != l.mul(y, l.mul(x, x))),
    );
    let alternative = left_alternative && right_alternative;
    let moufang = record("moufang", moufang_witness_on(l, &all));
    let power_associative = record(
        "power_associative",
        (0..n)
            .find(|&x| !associative_on(l, l.generate_subloop(&[x], None).members()))
            .map(|x| vec![x]),
    );
    let diassociative = record("diassociative", diassociative_witness(l));
    let central_by_abelian = record(
        "central_by_abelian",
        first_pair(n, |a, b| !zmask[l.commutator(a, b)])
            .or_else(|| first_triple(&all, |a, b, c| !zmask[l.associator(a, b, c)])),
    );
    let exp2 = record("exp2", (0..n).find(|&x| !zmask[l.mul(x, x)]).map(|x| vec![x]));
    let inverse_property = record(
        "inverse_property",
        first_pair(n, |x, y| l.mul(lam(x), l.mul(x, y)) != y || l.mul(l.mul(x, y), rho(y)) != x),
    );
    let weak_inverse = record(
        "weak_inverse",
        first_pair(n, |x, y| l.mul(x, l.mul(y, rho(l.mul(x, y)))) != 0),
    );
    let anti_automorphic_inverse = record(
        "anti_automorphic_inverse",
        first_pair(n, |x, y| lam(l.mul(x, y)) != l.mul(lam(y), lam(x))),
    );
    let well_defined_inverse = record(
        "well_defined_inverse",
        (0..n).find(|&x| lam(x) != rho(x)).map(|x| vec![x]),
    );
    let anti_commutative = record(
        "anti_commutative",
        first_pair(n, |a, b| {
            !zmask[a] && !zmask[b] && !zmask[l.mul(a, b)] && l.commutator(a, b) == 0
        }),
    );
    let anti_symmetric = inv.map(|s| {
        record(
            "anti_symmetric",
            (0..n).find(|&a| !zmask[a] && s.apply(a) == a).map(|a| vec![a]),
        )
    });
    PropertyReport {
        commutative,
        associative,
        flexible,
        left_alternative,
        right_alternative,
        alternative,
        moufang,
        power_associative,
        diassociative,
        central_by_abelian,
        exp2,
        inverse_property,
        weak_inverse,
        anti_automorphic_inverse,
        well_defined_inverse,
        anti_commutative,
        anti_symmetric,
        witnesses: w,
    }
}

/// First pair `(a, b)` whose generated subloop is not associative.
pub fn diassociative_witness(l: &LoopTable) -> Option<Vec<ElemId>> {
    let n = l.order();
    let mut good: HashSet<Vec<ElemId>> = HashSet::new();
    for a in 0..n {
        for b in 0..n {
            let sub = l.generate_subloop(&[a, b], None);
            if good.contains(sub.members()) {
                continue;
            }
            if !associative_on(l, sub.members()) {
                return Some(vec![a, b]);
            }
            good.insert(sub.members().to_vec());
        }
    }
    None
}

pub fn is_diassociative(l: &LoopTable) -> bool {
    diassociative_witness(l).is_none()
}

/// Whether the loop is central-by-abelian with every square central.
pub fn in_za_e2(l: &LoopTable) -> bool {
    let zmask = l.center_mask();
    (0..l.order()).all(|x| zmask[l.mul(x, x)]) && doubling::is_central_by_abelian(l, &zmask)
}

/// Outcome of the finite-basis diassociativity test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiasResult {
    pub holds: bool,
    /// `[x, y, u, v, w, [u,v,w]]` for the first nontrivial associator.
    pub witness: Option<Vec<ElemId>>,
}

/// Diassociativity for loops in ZA ∩ E2: for each pair `(x, y)` only the 64
/// associators with entries in `{1, x, y, xy}` need checking.
pub fn diassociative_fast(l: &LoopTable) -> Result<DiasResult, AnalysisError> {
    if !in_za_e2(l) {
        return Err(AnalysisError::NotInZAE2);
    }
    let n = l.order();
    for x in 0..n {
        for y in 0..n {
            let s = [0, x, y, l.mul(x, y)];
            for &u in &s {
                for &v in &s {
                    for &w in &s {
                        let k = l.associator(u, v, w);
                        if k != 0 {
                            return Ok(DiasResult { holds: false, witness: Some(vec![x, y, u, v, w, k]) });
                        }
                    }
                }
            }
        }
    }
    Ok(DiasResult { holds: true, witness: None })
}

/// A condition of the Moufang criterion with its first counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub holds: bool,
    pub witness: Option<Vec<ElemId>>,
}

impl Condition {
    fn from(witness: Option<Vec<ElemId>>) -> Self {
        Self { holds: witness.is_none(), witness }
    }
}

/// The five conditions for `D(L, *, γ)` to be Moufang, compared with a
/// direct check of the double.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoufangDoubleReport {
    /// `L` is Moufang.
    pub moufang: Condition,
    /// `[a, cc*] = 1`.
    pub norm_commutes: Condition,
    /// `[c, c*] = 1`.
    pub star_commutes: Condition,
    /// `[a, c, c*] = 1`.
    pub star_associates: Condition,
    /// `(cc*)c` lies in the nucleus.
    pub cube_nuclear: Condition,
    pub predicted: bool,
    pub actual: bool,
}

pub fn moufang_double_report(
    l: &LoopTable,
    inv: &Involution,
    gamma: ElemId,
) -> Result<MoufangDoubleReport, AnalysisError> {
    let n = l.order();
    let zmask = l.center_mask();
    if gamma >= n || !zmask[gamma] || inv.apply(gamma) != gamma {
        return Err(AnalysisError::GammaNotSymmetricCentral(gamma));
    }
    let s = |x: ElemId| inv.apply(x);
    let all: Vec<ElemId> = l.elements().collect();
    let moufang = Condition::from(moufang_witness_on(l, &all));
    let norm_commutes = Condition::from(first_pair(n, |a, c| l.commutator(a, l.mul(c, s(c))) != 0));
    let star_commutes = Condition::from((0..n).find(|&c| l.commutator(c, s(c)) != 0).map(|c| vec![c]));
    let star_associates = Condition::from(first_pair(n, |a, c| l.associator(a, c, s(c)) != 0));
    let cube_nuclear = Condition::from(
        (0..n)
            .find(|&c| !l.in_nucleus(l.mul(l.mul(c, s(c)), c)))
            .map(|c| vec![c]),
    );
    let predicted = moufang.holds
        && norm_commutes.holds
        && star_commutes.holds
        && star_associates.holds
        && cube_nuclear.holds;
    let d = doubling::double(l, inv, DoublingParams { gamma, epsilon: None })?;
    let actual = is_moufang(d.table());
    Ok(MoufangDoubleReport {
        moufang,
        norm_commutes,
        star_commutes,
        star_associates,
        cube_nuclear,
        predicted,
        actual,
    })
}

/// Elements `x` such that every subloop containing `x` whose image in
/// `M/Z(M)` is 3-dimensional is Moufang.
///
/// Such a subloop `S` is Moufang iff `S·Z(M)` is, so it suffices to test the
/// full preimages of the 3-dimensional subspaces of `M/Z(M)`.
pub fn locally_moufang_elements(m: &LoopTable) -> Result<Vec<ElemId>, AnalysisError> {
    if !in_za_e2(m) {
        return Err(AnalysisError::NotInZAE2);
    }
    let eq = ElementaryQuotient::new(m).map_err(|_| AnalysisError::NotInZAE2)?;
    if eq.dim < 3 {
        return Err(AnalysisError::DimTooSmall(eq.dim));
    }
    // bad[v]: some non-Moufang 3-space contains the vector v
    let mut bad = vec![false; 1 << eq.dim];
    for basis in f2::subspaces(eq.dim, 3) {
        let space = f2::span(&basis);
        if space.iter().all(|&v| bad[v as usize]) {
            continue;
        }
        let pre = eq.preimage(&space);
        if moufang_witness_on(m, pre.members()).is_some() {
            for v in space {
                bad[v as usize] = true;
            }
        }
    }
    Ok(m.elements().filter(|&x| !bad[eq.coords[x] as usize]).collect())
}

/// A j-partner of a subloop, as the full preimage of its image subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JPartner {
    pub subloop: SubloopHandle,
    /// Whether the partner lies inside the base loop.
    pub in_base: bool,
}

/// All j-partners of `u` in `M/Z(M)`: the subspaces `U' ≠ U` avoiding `j`
/// with `⟨U', j⟩ = ⟨U, j⟩`. Writing `U = ⟨u_1, ..., u_k⟩`, the partner
/// `⟨u_1, ..., u_{k-1}, u_k j⟩` comes first.
pub fn j_partners(
    m: &LoopTable,
    base: &SubloopHandle,
    u: &SubloopHandle,
    j: ElemId,
) -> Result<Vec<JPartner>, AnalysisError> {
    let eq = ElementaryQuotient::new(m).map_err(|_| AnalysisError::NotInZAE2)?;
    let ub = f2::reduce_basis(u.members().iter().map(|&x| eq.coords[x]));
    let cj = eq.coords[j];
    if cj == 0 || f2::span(&ub).contains(&cj) {
        return Err(AnalysisError::JInU);
    }
    let k = ub.len() as u32;
    let masks = std::iter::once(1u32 << k >> 1).chain((1..1u32 << k).filter(|&f| f != 1 << k >> 1));
    let mut out = Vec::new();
    for f in masks {
        if k == 0 {
            break;
        }
        let basis: Vec<u32> = ub
            .iter()
            .enumerate()
            .map(|(i, &b)| if f >> i & 1 == 1 { b ^ cj } else { b })
            .collect();
        let subloop = eq.preimage(&f2::span(&basis));
        let in_base = subloop.members().iter().all(|&x| base.contains(x));
        out.push(JPartner { subloop, in_base });
    }
    Ok(out)
}

/// Result of the octonion-loop test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OctonionReport {
    pub is_octonion: bool,
    pub dim: Option<u32>,
    /// The common associator of all bases, when it is constant.
    pub alpha: Option<ElemId>,
}

/// A 3-dimensional loop in ZA ∩ E2 satisfying the Moufang identity.
pub fn octonion_check(o: &LoopTable) -> OctonionReport {
    let Ok(eq) = ElementaryQuotient::new(o) else {
        return OctonionReport { is_octonion: false, dim: None, alpha: None };
    };
    let za = in_za_e2(o);
    let dim = za.then_some(eq.dim);
    if !za || eq.dim != 3 {
        return OctonionReport { is_octonion: false, dim, alpha: None };
    }
    let n = o.order();
    let mut alpha: Option<Option<ElemId>> = None;
    'outer: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if f2::rank([eq.coords[x], eq.coords[y], eq.coords[z]]) != 3 {
                    continue;
                }
                let k = o.associator(x, y, z);
                match alpha {
                    None => alpha = Some(Some(k)),
                    Some(Some(a)) if a != k => {
                        alpha = Some(None);
                        break 'outer;
                    }
                    _ => {}
                }
            }
        }
    }
    OctonionReport { is_octonion: is_moufang(o), dim, alpha: alpha.flatten() }
}

/// The refutation of the claim that `⟨xj, yj, zj⟩` is a nonassociative
/// octonion loop whenever `⟨x, y, z⟩ ≤ Q_{n-1}` is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KirshReport {
    /// `x, y, z, j` as elements of the double.
    pub x: ElemId,
    pub y: ElemId,
    pub z: ElemId,
    pub j: ElemId,
    /// Octonion test of `⟨x, y, z⟩`.
    pub base_octonion: OctonionReport,
    /// `(xz, yz, zj)`.
    pub triple: [ElemId; 3],
    /// The triple lies in `⟨xj, yj, zj⟩` and is a basis of it modulo the center.
    pub triple_is_basis: bool,
    /// `[xz, yz, zj]` computed in the double.
    pub associator: ElemId,
    /// The same associator from `[a,b,cj] = [a*,b*,c*][b*,a*]` in the base.
    pub associator_by_formula: ElemId,
    /// Octonion test of `⟨xj, yj, zj⟩`.
    pub partner_octonion: OctonionReport,
    /// `⟨x,y,z⟩` is a nonassociative octonion loop and yet `[xz,yz,zj] = 1`.
    pub refuted: bool,
}

/// Searches the generators of the base of `q4` for `x, y, z` spanning a
/// nonassociative octonion loop, and evaluates `[xz, yz, zj]`.
pub fn kirsh_refutation(q4: &doubling::DoubleResult) -> KirshReport {
    let base = q4.base();
    let m = q4.table();
    let j = q4.j();
    let s = |x: ElemId| q4.base_star().apply(x);
    let gens: Vec<ElemId> = ["e1", "e2", "e3"].iter().filter_map(|g| base.find(g)).collect();
    let candidates: Vec<[ElemId; 3]> = if gens.len() == 3 {
        vec![[gens[0], gens[1], gens[2]]]
    } else {
        let n = base.order();
        (0..n)
            .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| [x, y, z])))
            .collect()
    };
    for [x, y, z] in candidates {
        let sub = base.generate_subloop(&[x, y, z], None);
        let oct = octonion_check(&base.restrict(&sub));
        let minus_one = oct.alpha.map(|a| sub.members()[a]);
        if !oct.is_octonion || minus_one.is_none_or(|a| a == 0) {
            continue;
        }
        let base_octonion = OctonionReport { alpha: minus_one, ..oct };
        let (xz, yz, zj) = (base.mul(x, z), base.mul(y, z), m.mul(z, j));
        let associator = m.associator(xz, yz, zj);
        let (a, b, c) = (xz, yz, z);
        let associator_by_formula = base.product([base.associator(s(a), s(b), s(c)), base.commutator(s(b), s(a))]);
        let partner = m.generate_subloop(&[m.mul(x, j), m.mul(y, j), m.mul(z, j)], None);
        let triple_is_basis = [xz, yz, zj].iter().all(|&t| partner.contains(t))
            && m.generate_subloop(&[xz, yz, zj], None) == partner;
        let partner_octonion = {
            let r = octonion_check(&m.restrict(&partner));
            OctonionReport { alpha: r.alpha.map(|a| partner.members()[a]), ..r }
        };
        let refuted = associator == 0 && triple_is_basis;
        return KirshReport {
            x,
            y,
            z,
            j,
            base_octonion,
            triple: [xz, yz, zj],
            triple_is_basis,
            associator,
            associator_by_formula,
            partner_octonion,
            refuted,
        };
    }
    panic!("no nonassociative octonion subloop in the base; the loop tables are wrong");
}
