//! Automorphism groups by backtracking over generator images.
//!
//! Elements are first split into classes by isomorphism invariants (orders,
//! centrality, commutator and associator counts, behaviour under the
//! involution) refined by one-dimensional colour refinement. A partial map
//! defined on a generator prefix is closed under products (and the
//! involution), failing as soon as two derivations disagree.

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::doubling::DoubleResult;
use crate::f2::ElementaryQuotient;
use crate::involution::Involution;
use crate::loops::{ElemId, LoopTable, SubloopHandle};

pub const MAX_ORDER: usize = 256;
/// Searches producing more automorphisms than this are abandoned.
pub const MAX_AUTOMORPHISMS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("loop order {0} exceeds {MAX_ORDER}")]
    OrderCapExceeded(usize),
    #[error("more than {MAX_AUTOMORPHISMS} automorphisms")]
    TooManyAutomorphisms,
    #[error("this flavor needs an involution")]
    MissingInvolution,
    #[error("element {0} out of range")]
    BadElement(ElemId),
    #[error("L/Z(L) is not an elementary abelian 2-group")]
    QuotientNotElementaryAbelian,
}

/// Which automorphisms to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flavor {
    /// `Aut(L)`.
    Plain,
    /// `Aut(L,*)`: automorphisms commuting with the involution.
    Star,
    /// `Aut(L,*,ε)`: those of `Aut(L,*)` fixing the given element.
    StarFixing(ElemId),
}

pub type Perm = Vec<ElemId>;

/// An automorphism group, every element stored as the permutation of
/// element ids it induces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutGroup {
    /// Sorted lexicographically; the identity comes first.
    pub elements: Vec<Perm>,
    pub generators: Vec<Perm>,
    pub order: usize,
    pub flavor: Flavor,
}

/// `(p ∘ q)(x) = p(q(x))`.
pub fn compose(p: &[ElemId], q: &[ElemId]) -> Perm {
    q.iter().map(|&x| p[x]).collect()
}

pub fn inverse(p: &[ElemId]) -> Perm {
    let mut out = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        out[y] = x;
    }
    out
}

impl AutGroup {
    pub fn index_of(&self, p: &[ElemId]) -> Option<usize> {
        self.elements.binary_search_by(|e| e.as_slice().cmp(p)).ok()
    }

    pub fn contains(&self, p: &[ElemId]) -> bool {
        self.index_of(p).is_some()
    }

    /// Whether every element maps `s` onto itself.
    pub fn stabilizes(&self, s: &SubloopHandle) -> bool {
        self.elements.iter().all(|p| s.members().iter().all(|&x| s.contains(p[x])))
    }

    /// Elements fixing every member of `s`.
    pub fn pointwise_stabilizer(&self, s: &SubloopHandle) -> Vec<&Perm> {
        self.elements.iter().filter(|p| s.members().iter().all(|&x| p[x] == x)).collect()
    }

    /// Elements commuting with all of the group.
    pub fn center(&self) -> Vec<&Perm> {
        self.elements
            .iter()
            .filter(|p| self.generators.iter().all(|g| compose(p, g) == compose(g, p)))
            .collect()
    }
}

/// Aut-invariant colour of each element, refined to a stable partition.
pub fn element_classes(l: &LoopTable, star: Option<&Involution>, fixed: Option<ElemId>) -> Vec<u32> {
    invariants(l, star, fixed).0
}

type PairInvariant = [u32; 3];

/// Element colours together with the pair invariant: for `(x, y)`, how many
/// `z` give a trivial associator in each slot pattern.
fn invariants(l: &LoopTable, star: Option<&Involution>, fixed: Option<ElemId>) -> (Vec<u32>, Vec<PairInvariant>) {
    let n = l.order();
    let zmask = l.center_mask();
    let base: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut key = vec![
                l.element_order(x).map_or(0, |k| k as u64),
                zmask[x] as u64,
                l.in_nucleus(x) as u64,
                (0..n).filter(|&y| l.commutator(x, y) == 0).count() as u64,
            ];
            let (mut a0, mut a1, mut a2) = (0u64, 0u64, 0u64);
            for y in 0..n {
                for z in 0..n {
                    a0 += (l.associator(x, y, z) == 0) as u64;
                    a1 += (l.associator(y, x, z) == 0) as u64;
                    a2 += (l.associator(y, z, x) == 0) as u64;
                }
            }
            key.extend([a0, a1, a2]);
            if let Some(s) = star {
                let sx = s.apply(x);
                key.extend([
                    (sx == x) as u64,
                    zmask[l.mul(sx, x)] as u64,
                    (l.mul(sx, x) == l.mul(x, sx)) as u64,
                    (l.mul(sx, x) == 0) as u64,
                ]);
            }
            key.push((fixed == Some(x)) as u64);
            key
        })
        .collect();
    let pair: Vec<PairInvariant> = (0..n * n)
        .into_par_iter()
        .map(|xy| {
            let (x, y) = (xy / n, xy % n);
            let mut c = [0u32; 3];
            for z in 0..n {
                c[0] += (l.associator(x, y, z) == 0) as u32;
                c[1] += (l.associator(x, z, y) == 0) as u32;
                c[2] += (l.associator(z, x, y) == 0) as u32;
            }
            c
        })
        .collect();
    let mut color = rank_keys(&base);
    let mut classes = count_classes(&color);
    loop {
        let keys: Vec<(u32, Vec<(u32, u32, u32, [u32; 3], [u32; 3])>)> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut v: Vec<_> = (0..n)
                    .map(|y| (color[y], color[l.mul(x, y)], color[l.mul(y, x)], pair[x * n + y], pair[y * n + x]))
                    .collect();
                v.sort_unstable();
                (color[x], v)
            })
            .collect();
        let next = rank_keys(&keys);
        let c = count_classes(&next);
        color = next;
        if c == classes {
            return (color, pair);
        }
        classes = c;
    }
}

fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let ids: BTreeMap<&K, u32> = {
        let mut sorted: Vec<&K> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        sorted.into_iter().enumerate().map(|(i, k)| (k, i as u32)).collect()
    };
    keys.iter().map(|k| ids[k]).collect()
}

fn count_classes(color: &[u32]) -> usize {
    color.iter().collect::<HashSet<_>>().len()
}

/// A generating sequence chosen greedily: next comes an element outside the
/// current subloop from the smallest colour class, preferring larger growth.
fn choose_generators(l: &LoopTable, color: &[u32], star: Option<&Involution>) -> Vec<ElemId> {
    let n = l.order();
    let mut size = BTreeMap::<u32, usize>::new();
    for &c in color {
        *size.entry(c).or_default() += 1;
    }
    let mut gens = Vec::new();
    let mut sub = l.generate_subloop(&gens, star);
    while sub.len() < n {
        let best_size = (0..n).filter(|&x| !sub.contains(x)).map(|x| size[&color[x]]).min().unwrap();
        let mut best: Option<(usize, ElemId, SubloopHandle)> = None;
        for x in (0..n).filter(|&x| !sub.contains(x) && size[&color[x]] == best_size) {
            let mut g = gens.clone();
            g.push(x);
            let s = l.generate_subloop(&g, star);
            if best.as_ref().is_none_or(|(len, _, _)| s.len() > *len) {
                best = Some((s.len(), x, s));
            }
        }
        let (_, x, s) = best.unwrap();
        gens.push(x);
        sub = s;
    }
    gens
}

const NONE: ElemId = ElemId::MAX;

struct Search<'a> {
    l: &'a LoopTable,
    star: Option<&'a Involution>,
    color: Vec<u32>,
    pair: Vec<PairInvariant>,
    gens: Vec<ElemId>,
    cands: Vec<Vec<ElemId>>,
    found: AtomicUsize,
    abort: AtomicBool,
}

#[derive(Clone)]
struct State {
    map: Vec<ElemId>,
    used: Vec<bool>,
    defined: Vec<ElemId>,
    done: usize,
}

impl State {
    fn new(n: usize) -> Self {
        let mut map = vec![NONE; n];
        let mut used = vec![false; n];
        map[0] = 0;
        used[0] = true;
        Self { map, used, defined: vec![0], done: 0 }
    }

    fn define(&mut self, s: &Search, x: ElemId, v: ElemId) -> bool {
        if self.map[x] != NONE {
            return self.map[x] == v;
        }
        if self.used[v] || s.color[v] != s.color[x] {
            return false;
        }
        let n = self.map.len();
        if !self.defined.iter().all(|&d| {
            let fd = self.map[d];
            s.pair[x * n + d] == s.pair[v * n + fd] && s.pair[d * n + x] == s.pair[fd * n + v]
        }) {
            return false;
        }
        self.map[x] = v;
        self.used[v] = true;
        self.defined.push(x);
        true
    }

    fn close(&mut self, s: &Search) -> bool {
        while self.done < self.defined.len() {
            let p = self.done;
            let x = self.defined[p];
            self.done += 1;
            if let Some(st) = s.star {
                if !self.define(s, st.apply(x), st.apply(self.map[x])) {
                    return false;
                }
            }
            for i in 0..=p {
                let y = self.defined[i];
                let (fx, fy) = (self.map[x], self.map[y]);
                if !self.define(s, s.l.mul(x, y), s.l.mul(fx, fy))
                    || !self.define(s, s.l.mul(y, x), s.l.mul(fy, fx))
                {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, len: usize) {
        for &x in &self.defined[len..] {
            self.used[self.map[x]] = false;
            self.map[x] = NONE;
        }
        self.defined.truncate(len);
        self.done = len;
    }
}

impl Search<'_> {
    fn extend(&self, st: &mut State, level: usize, out: &mut Vec<Perm>) {
        if self.abort.load(Ordering::Relaxed) {
            return;
        }
        if level == self.gens.len() {
            debug_assert_eq!(st.defined.len(), self.l.order());
            out.push(st.map.clone());
            if self.found.fetch_add(1, Ordering::Relaxed) >= MAX_AUTOMORPHISMS {
                self.abort.store(true, Ordering::Relaxed);
            }
            return;
        }
        let g = self.gens[level];
        if st.map[g] != NONE {
            self.extend(st, level + 1, out);
            return;
        }
        let len = st.defined.len();
        for &v in &self.cands[level] {
            if st.used[v] {
                continue;
            }
            if st.define(self, g, v) && st.close(self) {
                self.extend(st, level + 1, out);
            }
            st.undo(len);
        }
    }
}

/// Computes `Aut(L)`, `Aut(L,*)` or `Aut(L,*,ε)` exactly.
pub fn automorphism_group(l: &LoopTable, inv: Option<&Involution>, flavor: Flavor) -> Result<AutGroup, AutError> {
    let n = l.order();
    if n > MAX_ORDER {
        return Err(AutError::OrderCapExceeded(n));
    }
    let (star, fixed) = match flavor {
        Flavor::Plain => (None, None),
        Flavor::Star => (Some(inv.ok_or(AutError::MissingInvolution)?), None),
        Flavor::StarFixing(e) => {
            if e >= n {
                return Err(AutError::BadElement(e));
            }
            (Some(inv.ok_or(AutError::MissingInvolution)?), Some(e))
        }
    };
    let (color, pair) = invariants(l, star, fixed);
    let gens = choose_generators(l, &color, star);
    let cands = gens
        .iter()
        .map(|&g| (0..n).filter(|&v| color[v] == color[g]).collect())
        .collect();
    let search = Search {
        l,
        star,
        color,
        pair,
        gens,
        cands,
        found: AtomicUsize::new(0),
        abort: AtomicBool::new(false),
    };
    let mut elements: Vec<Perm> = if search.gens.is_empty() {
        vec![(0..n).collect()]
    } else {
        let first = search.gens[0];
        search.cands[0]
            .par_iter()
            .flat_map_iter(|&v| {
                let mut st = State::new(n);
                let mut out = Vec::new();
                if st.define(&search, first, v) && st.close(&search) {
                    search.extend(&mut st, 1, &mut out);
                }
                out
            })
            .collect()
    };
    if search.abort.load(Ordering::Relaxed) {
        return Err(AutError::TooManyAutomorphisms);
    }
    elements.sort_unstable();
    let generators = group_generators(&elements);
    Ok(AutGroup { order: elements.len(), elements, generators, flavor })
}

/// Greedy generating set: scan the sorted elements, keeping each one not
/// already generated.
fn group_generators(elements: &[Perm]) -> Vec<Perm> {
    let target = elements.len();
    let mut gens: Vec<Perm> = Vec::new();
    let mut closure: HashSet<Perm> = HashSet::new();
    if let Some(id) = elements.first() {
        closure.insert(id.clone());
    }
    for e in elements {
        if closure.len() == target {
            break;
        }
        if closure.contains(e) {
            continue;
        }
        gens.push(e.clone());
        let mut frontier: Vec<Perm> = closure.iter().cloned().collect();
        while let Some(p) = frontier.pop() {
            for g in &gens {
                let q = compose(g, &p);
                if closure.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
    }
    gens
}

/// Whether every automorphism of the given flavor maps `s` onto itself.
pub fn is_characteristic(
    m: &LoopTable,
    inv: Option<&Involution>,
    s: &SubloopHandle,
    flavor: Flavor,
) -> Result<bool, AutError> {
    Ok(automorphism_group(m, inv, flavor)?.stabilizes(s))
}

/// Induced action of automorphisms on `M/Z(M) ≅ F2^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearAction {
    pub dim: u32,
    /// For each automorphism (same index as in the group) the images of the
    /// basis vectors, i.e. the matrix columns.
    pub matrices: Vec<Vec<u32>>,
    pub faithful: bool,
    pub image_order: usize,
}

impl LinearAction {
    pub fn apply(matrix: &[u32], v: u32) -> u32 {
        matrix
            .iter()
            .enumerate()
            .filter(|(i, _)| v >> i & 1 == 1)
            .fold(0, |acc, (_, &c)| acc ^ c)
    }

    /// Indices of automorphisms acting trivially.
    pub fn kernel(&self) -> Vec<usize> {
        let id: Vec<u32> = (0..self.dim).map(|i| 1 << i).collect();
        (0..self.matrices.len()).filter(|&i| self.matrices[i] == id).collect()
    }
}

pub fn induced_linear_action(m: &LoopTable, aut: &AutGroup) -> Result<LinearAction, AutError> {
    let eq = ElementaryQuotient::new(m).map_err(|_| AutError::QuotientNotElementaryAbelian)?;
    let matrices: Vec<Vec<u32>> = aut
        .elements
        .iter()
        .map(|p| eq.basis.iter().map(|&b| eq.coords[p[b]]).collect())
        .collect();
    let image_order = matrices.iter().collect::<HashSet<_>>().len();
    let mut la = LinearAction { dim: eq.dim, matrices, faithful: false, image_order };
    la.faithful = la.kernel().len() == 1;
    Ok(la)
}

/// Automorphisms of the double mapping the base loop onto itself and the
/// coset `Z(L)j` onto itself.
pub fn aut_preserving(m: &DoubleResult, flavor: Flavor) -> Result<AutGroup, AutError> {
    let g = automorphism_group(m.table(), m.star(), flavor)?;
    Ok(restrict_to_preserving(m, g))
}

fn restrict_to_preserving(m: &DoubleResult, mut g: AutGroup) -> AutGroup {
    let n = m.n();
    let zl = m.base().center_mask();
    g.elements
        .retain(|p| (0..n).all(|a| p[a] < n) && p[m.j()] >= n && zl[p[m.j()] - n]);
    g.order = g.elements.len();
    g.generators = group_generators(&g.elements);
    g
}

/// Comparison of `Aut(M; L, Zj)` with the pairs `(σ, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCorrespondence {
    /// `|Aut(M; L, Zj)|`.
    pub preserving: usize,
    /// Pairs `(σ, p)` with `σ ∈ Aut(L,*)`, `p ∈ Z(L)`, `σ(γ)γ⁻¹ = p*p`.
    pub pairs: usize,
    /// The same two counts for the star flavors, when `M` has an involution:
    /// `Aut(M,*; L, Zj)` against pairs with additionally `σ(ε) = ε`.
    pub star_preserving: Option<usize>,
    pub star_pairs: Option<usize>,
    pub violations: Vec<String>,
}

impl PairCorrespondence {
    pub fn is_bijective(&self) -> bool {
        self.violations.is_empty() && self.preserving == self.pairs && self.star_preserving == self.star_pairs
    }
}

/// Checks that `σ ↦ (σ|_L, σ(j)j⁻¹)` is a bijection onto the admissible
/// pairs, and that each pair extends by `aj ↦ (p σ(a))j`.
pub fn pair_correspondence_check(m: &DoubleResult) -> Result<PairCorrespondence, AutError> {
    let l = m.base();
    let s = m.base_star();
    let n = l.order();
    let gamma = m.params().gamma;
    let zl: Vec<ElemId> = l.center();
    let aut_l = automorphism_group(l, Some(s), Flavor::Star)?;
    let admissible = |sigma: &Perm, p: ElemId| l.rdiv(sigma[gamma], gamma) == l.mul(s.apply(p), p);
    let pairs: Vec<(Perm, ElemId)> = aut_l
        .elements
        .iter()
        .flat_map(|sg| zl.iter().filter(|&&p| admissible(sg, p)).map(move |&p| (sg.clone(), p)))
        .collect();

    let mut violations = Vec::new();
    let check_side = |preserving: &AutGroup, pairs: &[&(Perm, ElemId)], violations: &mut Vec<String>| {
        let mut images: HashSet<(Perm, ElemId)> = HashSet::new();
        for p in &preserving.elements {
            let pair = (p[..n].to_vec(), p[m.j()] - n);
            if !pairs.iter().any(|q| q.0 == pair.0 && q.1 == pair.1) {
                violations.push(format!("restriction of {:?} is not an admissible pair", p));
            }
            if !images.insert(pair) {
                violations.push(format!("two automorphisms restrict to the same pair: {:?}", p));
            }
        }
        for (sg, p) in pairs {
            let ext: Perm = (0..n).map(|a| sg[a]).chain((0..n).map(|a| n + l.mul(*p, sg[a]))).collect();
            if !preserving.contains(&ext) {
                violations.push(format!("pair ({:?}, {p}) does not extend to an automorphism", sg));
            }
        }
    };

    let plain = automorphism_group(m.table(), None, Flavor::Plain)?;
    let preserving = restrict_to_preserving(m, plain);
    let all: Vec<&(Perm, ElemId)> = pairs.iter().collect();
    check_side(&preserving, &all, &mut violations);

    let (mut star_preserving, mut star_pairs) = (None, None);
    if let (Some(ms), Some(eps)) = (m.star(), m.params().epsilon) {
        let g = automorphism_group(m.table(), Some(ms), Flavor::Star)?;
        let sp = restrict_to_preserving(m, g);
        let fixing: Vec<&(Perm, ElemId)> = pairs.iter().filter(|(sg, _)| sg[eps] == eps).collect();
        check_side(&sp, &fixing, &mut violations);
        star_preserving = Some(sp.order);
        star_pairs = Some(fixing.len());
    }
    Ok(PairCorrespondence {
        preserving: preserving.order,
        pairs: pairs.len(),
        star_preserving,
        star_pairs,
        violations,
    })
}
