//! Linear algebra over F2 for loops whose quotient by the center is an
//! elementary abelian 2-group.

use thiserror::Error;

use crate::loops::{ElemId, LoopTable, SubloopHandle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("L/Z(L) is not an elementary abelian 2-group")]
pub struct NotElementary;

/// Coordinates of every element of `L` in `L/Z(L) ≅ F2^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryQuotient {
    pub center: SubloopHandle,
    pub dim: u32,
    /// Bit vector of the class of each element.
    pub coords: Vec<u32>,
    /// Representatives of the basis vectors `1 << k`.
    pub basis: Vec<ElemId>,
}

impl ElementaryQuotient {
    pub fn new(l: &LoopTable) -> Result<Self, NotElementary> {
        let center = SubloopHandle::from_members(l.order(), l.center());
        Self::with_center(l, center)
    }

    /// Uses a precomputed center.
    pub fn with_center(l: &LoopTable, center: SubloopHandle) -> Result<Self, NotElementary> {
        let (q, class) = l.quotient_map(&center).map_err(|_| NotElementary)?;
        let m = q.order();
        if !m.is_power_of_two() || m > 1 << 30 {
            return Err(NotElementary);
        }
        let mut qcoord: Vec<Option<u32>> = vec![None; m];
        qcoord[0] = Some(0);
        let mut spanned = vec![0usize];
        let mut basis = Vec::new();
        for c in 0..m {
            if qcoord[c].is_some() {
                continue;
            }
            let k = basis.len() as u32;
            let mut added = Vec::with_capacity(spanned.len());
            for &s in &spanned {
                let t = q.mul(s, c);
                if qcoord[t].is_some() {
                    return Err(NotElementary);
                }
                qcoord[t] = Some(qcoord[s].unwrap() | 1 << k);
                added.push(t);
            }
            spanned.extend(added);
            basis.push(c);
        }
        let qcoord: Vec<u32> = qcoord.into_iter().map(Option::unwrap).collect();
        for a in 0..m {
            for b in 0..m {
                if qcoord[q.mul(a, b)] != qcoord[a] ^ qcoord[b] {
                    return Err(NotElementary);
                }
            }
        }
        let coords: Vec<u32> = class.iter().map(|&c| qcoord[c]).collect();
        let basis = basis
            .iter()
            .map(|&c| (0..l.order()).find(|&x| class[x] == c).unwrap())
            .collect();
        Ok(Self { center, dim: m.trailing_zeros(), coords, basis })
    }

    /// All elements whose class lies in the span of `vectors`.
    pub fn preimage(&self, space: &[u32]) -> SubloopHandle {
        let mut mark = vec![false; 1 << self.dim];
        for &v in space {
            mark[v as usize] = true;
        }
        let n = self.coords.len();
        SubloopHandle::from_members(n, (0..n).filter(|&x| mark[self.coords[x] as usize]))
    }

    /// Dimension of the image of a set of elements.
    pub fn image_dim(&self, xs: &[ElemId]) -> u32 {
        rank(xs.iter().map(|&x| self.coords[x]))
    }
}

/// Rank of a family of bit vectors.
pub fn rank(vectors: impl IntoIterator<Item = u32>) -> u32 {
    reduce_basis(vectors).len() as u32
}

/// An echelon basis of the span: each vector has a distinct lowest set bit
/// not present in the others.
pub fn reduce_basis(vectors: impl IntoIterator<Item = u32>) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            let low = b & b.wrapping_neg();
            if v & low != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            let low = v & v.wrapping_neg();
            for b in basis.iter_mut() {
                if *b & low != 0 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.sort_unstable();
    basis
}

/// All `2^k` vectors of the span of `basis`, in the order of the subset
/// masks.
pub fn span(basis: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32];
    for &b in basis {
        let extra: Vec<u32> = out.iter().map(|&v| v ^ b).collect();
        out.extend(extra);
    }
    out
}

/// Every `k`-dimensional subspace of `F2^d`, each given by its reduced row
/// echelon basis. The order is deterministic.
pub fn subspaces(d: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if k > d {
        return out;
    }
    let mut pivots = Vec::with_capacity(k as usize);
    choose_pivots(d, k, 0, &mut pivots, &mut out);
    out
}

fn choose_pivots(d: u32, k: u32, start: u32, pivots: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pivots.len() as u32 == k {
        fill_rows(d, pivots, out);
        return;
    }
    for p in start..d {
        pivots.push(p);
        choose_pivots(d, k, p + 1, pivots, out);
        pivots.pop();
    }
}

// Row i has its pivot at bit pivots[i] and free entries at higher non-pivot bits.
fn fill_rows(d: u32, pivots: &[u32], out: &mut Vec<Vec<u32>>) {
    let free: Vec<Vec<u32>> = pivots
        .iter()
        .map(|&p| (p + 1..d).filter(|b| !pivots.contains(b)).collect())
        .collect();
    let total: u32 = free.iter().map(|f| f.len() as u32).sum();
    for mask in 0u64..1u64 << total {
        let mut bit = 0;
        let rows = pivots
            .iter()
            .zip(&free)
            .map(|(&p, f)| {
                let mut row = 1u32 << p;
                for &b in f {
                    if mask >> bit & 1 == 1 {
                        row |= 1 << b;
                    }
                    bit += 1;
                }
                row
            })
            .collect();
        out.push(rows);
    }
}
