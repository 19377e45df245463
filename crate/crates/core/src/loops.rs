//! Finite loops stored as dense Cayley tables.
//!
//! Elements are identified by their index in `0..order`, and index 0 is always
//! the identity. Left and right division tables are built once at validation
//! time so that `a \ b` and `b / a` are table lookups.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::involution::Involution;

/// Index of an element of a [`LoopTable`]. Index 0 is the identity.
pub type ElemId = usize;

/// Largest order a table may have (indices are stored as `u16`).
pub const MAX_ORDER: usize = u16::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("empty table")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("expected {expected} names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("order {0} exceeds the supported maximum")]
    TooLarge(usize),
    #[error("entry {value} at ({row}, {col}) is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("identity must be element 0")]
    IdentityNotAtZero,
    #[error("row {0} is not a permutation")]
    NotAPermutationRow(usize),
    #[error("column {0} is not a permutation")]
    NotAPermutationCol(usize),
    #[error("element {0} is out of range")]
    BadElement(ElemId),
    #[error("subloop is not normal: witness x = {x}, y = {y}, n = {n}")]
    NotNormal { x: ElemId, y: ElemId, n: ElemId },
}

/// Which operand is divided out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `a \ b`, the solution `x` of `a x = b`.
    Left,
    /// `b / a`, the solution `x` of `x a = b`.
    Right,
}

/// Left and right inverses of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inverses {
    /// `a^λ` with `a^λ a = 1`.
    pub left: ElemId,
    /// `a^ρ` with `a a^ρ = 1`.
    pub right: ElemId,
    pub invertible: bool,
}

/// A certified finite loop.
#[derive(Clone, PartialEq, Eq)]
pub struct LoopTable {
    order: usize,
    table: Vec<u16>,
    // ldiv[a * n + b] = a \ b, rdiv[a * n + b] = a / b
    ldiv: Vec<u16>,
    rdiv: Vec<u16>,
    names: Vec<String>,
}

impl fmt::Debug for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LoopTable")
            .field("order", &self.order)
            .field("names", &self.names)
            .finish_non_exhaustive()
    }
}

impl LoopTable {
    /// Validates a raw Cayley table. Identity must already sit at index 0.
    pub fn new(raw: Vec<Vec<usize>>, names: Vec<String>) -> Result<Self, LoopError> {
        let n = raw.len();
        if n == 0 {
            return Err(LoopError::Empty);
        }
        if n > MAX_ORDER {
            return Err(LoopError::TooLarge(n));
        }
        if names.len() != n {
            return Err(LoopError::NameCount { expected: n, got: names.len() });
        }
        let mut table = Vec::with_capacity(n * n);
        for (r, row) in raw.iter().enumerate() {
            if row.len() != n {
                return Err(LoopError::NotSquare { row: r, len: row.len(), order: n });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(LoopError::OutOfRange { row: r, col: c, value: v });
                }
                table.push(v as u16);
            }
        }
        Self::from_flat(n, table, names)
    }

    /// Builds from a row-major flat table; used by constructions that already
    /// know the order.
    pub(crate) fn from_flat(n: usize, table: Vec<u16>, names: Vec<String>) -> Result<Self, LoopError> {
        debug_assert_eq!(table.len(), n * n);
        for x in 0..n {
            if table[x] as usize != x || table[x * n] as usize != x {
                return Err(LoopError::IdentityNotAtZero);
            }
        }
        let mut ldiv = vec![u16::MAX; n * n];
        let mut rdiv = vec![u16::MAX; n * n];
        for a in 0..n {
            for x in 0..n {
                let b = table[a * n + x] as usize;
                if ldiv[a * n + b] != u16::MAX {
                    return Err(LoopError::NotAPermutationRow(a));
                }
                ldiv[a * n + b] = x as u16;
            }
        }
        for a in 0..n {
            for x in 0..n {
                let b = table[x * n + a] as usize;
                if rdiv[b * n + a] != u16::MAX {
                    return Err(LoopError::NotAPermutationCol(a));
                }
                rdiv[b * n + a] = x as u16;
            }
        }
        Ok(Self { order: n, table, ldiv, rdiv, names })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: ElemId) -> &str {
        &self.names[a]
    }

    /// Looks an element up by its display name.
    pub fn find(&self, name: &str) -> Option<ElemId> {
        self.names.iter().position(|s| s == name)
    }

    pub fn elements(&self) -> std::ops::Range<ElemId> {
        0..self.order
    }

    /// The table as nested rows.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(|r| r.iter().map(|&v| v as usize).collect())
            .collect()
    }

    #[inline]
    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.table[a * self.order + b] as usize
    }

    /// `a \ b`.
    #[inline]
    pub fn ldiv(&self, a: ElemId, b: ElemId) -> ElemId {
        self.ldiv[a * self.order + b] as usize
    }

    /// `a / b`.
    #[inline]
    pub fn rdiv(&self, a: ElemId, b: ElemId) -> ElemId {
        self.rdiv[a * self.order + b] as usize
    }

    /// `Left` gives `a \ b`; `Right` gives `b / a`.
    pub fn divide(&self, a: ElemId, b: ElemId, side: Side) -> ElemId {
        match side {
            Side::Left => self.ldiv(a, b),
            Side::Right => self.rdiv(b, a),
        }
    }

    pub fn inverses(&self, a: ElemId) -> Inverses {
        let left = self.rdiv(0, a);
        let right = self.ldiv(a, 0);
        Inverses { left, right, invertible: left == right }
    }

    /// Two-sided inverse; panics in debug builds if `a` is not invertible.
    /// Intended for nuclear (in particular central) elements.
    pub fn inv(&self, a: ElemId) -> ElemId {
        let r = self.ldiv(a, 0);
        debug_assert_eq!(r, self.rdiv(0, a), "element {a} has distinct one-sided inverses");
        r
    }

    /// The unique `k` with `ab = (ba)k`.
    #[inline]
    pub fn commutator(&self, a: ElemId, b: ElemId) -> ElemId {
        self.ldiv(self.mul(b, a), self.mul(a, b))
    }

    /// The unique `k` with `(ab)c = (a(bc))k`.
    #[inline]
    pub fn associator(&self, a: ElemId, b: ElemId, c: ElemId) -> ElemId {
        self.ldiv(self.mul(a, self.mul(b, c)), self.mul(self.mul(a, b), c))
    }

    /// Product of a list, multiplied left to right. Meant for central factors,
    /// where bracketing is irrelevant.
    pub fn product<I: IntoIterator<Item = ElemId>>(&self, xs: I) -> ElemId {
        xs.into_iter().fold(0, |acc, x| self.mul(acc, x))
    }

    /// `x^k` for a nuclear `x`, with negative exponents through the inverse.
    pub fn pow(&self, x: ElemId, k: i64) -> ElemId {
        let base = if k < 0 { self.inv(x) } else { x };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn is_commutative(&self) -> bool {
        self.elements().all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_associative(&self) -> bool {
        self.first_nonassociative().is_none()
    }

    /// Lexicographically first `(a, b, c)` with nontrivial associator.
    pub fn first_nonassociative(&self) -> Option<(ElemId, ElemId, ElemId)> {
        let n = self.order;
        for a in 1..n {
            for b in 1..n {
                let ab = self.mul(a, b);
                for c in 1..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Elements commuting with everything.
    pub fn commutant(&self) -> Vec<ElemId> {
        self.elements()
            .filter(|&a| self.elements().all(|x| self.mul(a, x) == self.mul(x, a)))
            .collect()
    }

    /// The nucleus, by a single scan of all triples.
    pub fn nuclei(&self) -> Nuclei {
        let n = self.order;
        let mut left = vec![true; n];
        let mut mid = vec![true; n];
        let mut right = vec![true; n];
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        left[a] = false;
                        mid[b] = false;
                        right[c] = false;
                    }
                }
            }
        }
        let collect = |v: &[bool]| (0..n).filter(|&i| v[i]).collect::<Vec<_>>();
        Nuclei { left: collect(&left), middle: collect(&mid), right: collect(&right) }
    }

    /// Whether `a` associates with all pairs in every slot.
    pub fn in_nucleus(&self, a: ElemId) -> bool {
        let n = self.order;
        for x in 0..n {
            for y in 0..n {
                let (ax, xa, xy) = (self.mul(a, x), self.mul(x, a), self.mul(x, y));
                if self.mul(ax, y) != self.mul(a, xy)
                    || self.mul(xa, y) != self.mul(x, self.mul(a, y))
                    || self.mul(xy, a) != self.mul(x, self.mul(y, a))
                {
                    return false;
                }
            }
        }
        true
    }

    /// The center, computed as the nuclear part of the commutant.
    pub fn center(&self) -> Vec<ElemId> {
        self.commutant().into_iter().filter(|&a| self.in_nucleus(a)).collect()
    }

    /// Membership mask of the center.
    pub fn center_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        for z in self.center() {
            mask[z] = true;
        }
        mask
    }

    /// Smallest subloop containing `gens`, closed also under `inv` if given.
    pub fn generate_subloop(&self, gens: &[ElemId], inv: Option<&Involution>) -> SubloopHandle {
        let n = self.order;
        let mut mask = vec![false; n];
        let mut members = Vec::new();
        let push = |x: ElemId, mask: &mut Vec<bool>, members: &mut Vec<ElemId>| {
            if !mask[x] {
                mask[x] = true;
                members.push(x);
            }
        };
        push(0, &mut mask, &mut members);
        for &g in gens {
            push(g, &mut mask, &mut members);
        }
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            if let Some(s) = inv {
                push(s.apply(x), &mut mask, &mut members);
            }
            let mut k = 0;
            while k <= i {
                let y = members[k];
                for z in [
                    self.mul(x, y),
                    self.mul(y, x),
                    self.ldiv(x, y),
                    self.ldiv(y, x),
                    self.rdiv(x, y),
                    self.rdiv(y, x),
                ] {
                    push(z, &mut mask, &mut members);
                }
                k += 1;
            }
            i += 1;
        }
        members.sort_unstable();
        SubloopHandle { members, mask }
    }

    /// Quotient by a normal subloop. Normality is checked through the
    /// congruence definition; cosets are numbered by their least element.
    pub fn normal_quotient(&self, sub: &SubloopHandle) -> Result<LoopTable, LoopError> {
        let n = self.order;
        if sub.mask.len() != n || !sub.contains(0) {
            return Err(LoopError::BadElement(0));
        }
        let nmem = &sub.members;
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if class[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for &m in nmem {
                let xm = self.mul(x, m);
                if class[xm] != usize::MAX && class[xm] != c {
                    return Err(LoopError::NotNormal { x, y: 0, n: m });
                }
                class[xm] = c;
            }
        }
        // xN = Nx
        for x in 0..n {
            for &m in nmem {
                if class[self.mul(m, x)] != class[x] {
                    return Err(LoopError::NotNormal { x, y: 0, n: m });
                }
            }
        }
        // (xm)y and x(ym) lie in (xy)N
        for x in 0..n {
            for y in 0..n {
                let c = class[self.mul(x, y)];
                for &m in nmem {
                    if class[self.mul(self.mul(x, m), y)] != c || class[self.mul(x, self.mul(y, m))] != c {
                        return Err(LoopError::NotNormal { x, y, n: m });
                    }
                }
            }
        }
        let q = reps.len();
        let mut flat = Vec::with_capacity(q * q);
        for &r in &reps {
            for &s in &reps {
                flat.push(class[self.mul(r, s)] as u16);
            }
        }
        let names = reps.iter().map(|&r| self.names[r].clone()).collect();
        LoopTable::from_flat(q, flat, names)
    }

    /// Coset index of every element for a normal subloop, with the quotient.
    pub fn quotient_map(&self, sub: &SubloopHandle) -> Result<(LoopTable, Vec<usize>), LoopError> {
        let quotient = self.normal_quotient(sub)?;
        let mut class = vec![usize::MAX; self.order];
        let mut next = 0;
        for x in 0..self.order {
            if class[x] == usize::MAX {
                for &m in &sub.members {
                    class[self.mul(x, m)] = next;
                }
                next += 1;
            }
        }
        Ok((quotient, class))
    }

    /// Classical structure sets by brute force.
    pub fn structure_sets(&self) -> StructureReport {
        let n = self.order;
        let nuc = self.nuclei();
        let commutant = self.commutant();
        let nucleus = intersect(&intersect(&nuc.left, &nuc.middle), &nuc.right);
        let center = intersect(&commutant, &nucleus);
        let mut zmask = vec![false; n];
        for &z in &center {
            zmask[z] = true;
        }

        let mut gens = Vec::new();
        let mut seen = vec![false; n];
        let mut central_by_abelian = true;
        let note = |k: ElemId, gens: &mut Vec<ElemId>, seen: &mut Vec<bool>| {
            if !seen[k] {
                seen[k] = true;
                gens.push(k);
            }
        };
        for a in 0..n {
            for b in 0..n {
                let k = self.commutator(a, b);
                central_by_abelian &= zmask[k];
                note(k, &mut gens, &mut seen);
                for c in 0..n {
                    let k = self.associator(a, b, c);
                    central_by_abelian &= zmask[k];
                    note(k, &mut gens, &mut seen);
                }
            }
        }
        let derived = self.generate_subloop(&gens, None);
        let exp2 = (0..n).all(|x| zmask[self.mul(x, x)]);
        let dim = if central_by_abelian && exp2 {
            let q = n / center.len();
            debug_assert!(q.is_power_of_two());
            Some(q.trailing_zeros())
        } else {
            None
        };
        StructureReport {
            nuc_left: nuc.left,
            nuc_mid: nuc.middle,
            nuc_right: nuc.right,
            nucleus,
            commutant,
            center,
            derived,
            dim,
        }
    }

    /// Left powers `x, x·x, (x·x)·x, ...` until the identity recurs; returns
    /// the length of that cycle, or `None` if the sequence never hits 1.
    pub fn element_order(&self, x: ElemId) -> Option<usize> {
        let mut p = x;
        for k in 1..=self.order {
            if p == 0 {
                return Some(k);
            }
            p = self.mul(p, x);
        }
        None
    }

    /// Extracts a subloop as a loop of its own; element `i` of the result is
    /// `sub.members()[i]`.
    pub fn restrict(&self, sub: &SubloopHandle) -> LoopTable {
        let m = sub.members.len();
        let mut index = vec![usize::MAX; self.order];
        for (i, &x) in sub.members.iter().enumerate() {
            index[x] = i;
        }
        let mut flat = Vec::with_capacity(m * m);
        for &x in &sub.members {
            for &y in &sub.members {
                flat.push(index[self.mul(x, y)] as u16);
            }
        }
        let names = sub.members.iter().map(|&x| self.names[x].clone()).collect();
        LoopTable::from_flat(m, flat, names).expect("a subloop is a loop")
    }
}

/// The three one-sided nuclei.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nuclei {
    pub left: Vec<ElemId>,
    pub middle: Vec<ElemId>,
    pub right: Vec<ElemId>,
}

/// A subloop given by its sorted member list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubloopHandle {
    members: Vec<ElemId>,
    mask: Vec<bool>,
}

impl SubloopHandle {
    /// Wraps a member set without checking closure.
    pub fn from_members(order: usize, members: impl IntoIterator<Item = ElemId>) -> Self {
        let mut mask = vec![false; order];
        for x in members {
            mask[x] = true;
        }
        let members = (0..order).filter(|&x| mask[x]).collect();
        Self { members, mask }
    }

    pub fn members(&self) -> &[ElemId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: ElemId) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    /// Checks closure under multiplication and both divisions.
    pub fn is_closed(&self, l: &LoopTable) -> bool {
        self.contains(0)
            && self.members.iter().all(|&x| {
                self.members.iter().all(|&y| {
                    self.contains(l.mul(x, y)) && self.contains(l.ldiv(x, y)) && self.contains(l.rdiv(x, y))
                })
            })
    }
}

/// Nuclei, commutant, center, derived subloop and dimension of a loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub nuc_left: Vec<ElemId>,
    pub nuc_mid: Vec<ElemId>,
    pub nuc_right: Vec<ElemId>,
    pub nucleus: Vec<ElemId>,
    pub commutant: Vec<ElemId>,
    pub center: Vec<ElemId>,
    /// Subloop generated by all commutators and associators.
    pub derived: SubloopHandle,
    /// Rank of `L/Z(L)` over F2, when that quotient is an elementary abelian
    /// 2-group; `None` otherwise.
    pub dim: Option<u32>,
}

pub(crate) fn intersect(a: &[ElemId], b: &[ElemId]) -> Vec<ElemId> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}
