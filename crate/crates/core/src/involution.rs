//! Involutions (anti-automorphisms of order at most two) and their
//! classification into central, super-central and normal involutions.

use serde::Serialize;
use thiserror::Error;

use crate::loops::{ElemId, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("involution has {got} entries, loop has order {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("not a permutation: {0} is hit twice or out of range")]
    NotAPermutation(ElemId),
    #[error("involution moves the identity")]
    MovesIdentity,
    #[error("not of order two at {0}")]
    NotOrderTwo(ElemId),
    #[error("not an anti-homomorphism: (ab)* != b*a* for a = {0}, b = {1}")]
    NotAntiHom(ElemId, ElemId),
}

/// A certified involution, stored as the image of every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    perm: Vec<ElemId>,
}

impl Involution {
    pub fn new(l: &LoopTable, perm: Vec<ElemId>) -> Result<Self, InvolutionError> {
        let n = l.order();
        if perm.len() != n {
            return Err(InvolutionError::WrongLength { expected: n, got: perm.len() });
        }
        let mut hit = vec![false; n];
        for &p in &perm {
            if p >= n || hit[p] {
                return Err(InvolutionError::NotAPermutation(p));
            }
            hit[p] = true;
        }
        if perm[0] != 0 {
            return Err(InvolutionError::MovesIdentity);
        }
        if let Some(a) = (0..n).find(|&a| perm[perm[a]] != a) {
            return Err(InvolutionError::NotOrderTwo(a));
        }
        for a in 0..n {
            for b in 0..n {
                if perm[l.mul(a, b)] != l.mul(perm[b], perm[a]) {
                    return Err(InvolutionError::NotAntiHom(a, b));
                }
            }
        }
        Ok(Self { perm })
    }

    /// The identity map; valid exactly when the loop is commutative.
    pub fn identity(l: &LoopTable) -> Result<Self, InvolutionError> {
        Self::new(l, l.elements().collect())
    }

    /// The inverse map; valid for loops with the anti-automorphic inverse
    /// property and well-defined inverses (groups in particular).
    pub fn inverse(l: &LoopTable) -> Result<Self, InvolutionError> {
        Self::new(l, l.elements().map(|a| l.ldiv(a, 0)).collect())
    }

    pub(crate) fn from_perm_unchecked(perm: Vec<ElemId>) -> Self {
        Self { perm }
    }

    #[inline]
    pub fn apply(&self, a: ElemId) -> ElemId {
        self.perm[a]
    }

    pub fn perm(&self) -> &[ElemId] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn classify(&self, l: &LoopTable) -> InvolutionReport {
        classify_involution(l, self)
    }
}

/// Classification of an involution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionReport {
    pub is_identity: bool,
    pub is_central: bool,
    pub is_super_central: bool,
    pub is_normal: bool,
    pub is_anti_symmetric: bool,
    /// `mu(a) = a* / a`, present iff the involution is central.
    pub mu: Option<Vec<ElemId>>,
    /// `nu(x) = x* x`, present iff the involution is normal.
    pub nu: Option<Vec<ElemId>>,
    pub symmetric_center: Vec<ElemId>,
}

pub fn classify_involution(l: &LoopTable, inv: &Involution) -> InvolutionReport {
    let zmask = l.center_mask();
    classify_with_center(l, inv, &zmask)
}

pub(crate) fn classify_with_center(l: &LoopTable, inv: &Involution, zmask: &[bool]) -> InvolutionReport {
    let n = l.order();
    let mu: Vec<ElemId> = (0..n).map(|a| l.rdiv(inv.apply(a), a)).collect();
    let is_central = mu.iter().all(|&m| zmask[m]);
    let nu: Vec<ElemId> = (0..n).map(|x| l.mul(inv.apply(x), x)).collect();
    let is_normal = nu.iter().all(|&v| zmask[v]);
    let is_super_central = is_central && mu.iter().all(|&m| l.mul(m, m) == 0);
    let is_anti_symmetric = (0..n).all(|a| zmask[a] || inv.apply(a) != a);
    InvolutionReport {
        is_identity: inv.is_identity(),
        is_central,
        is_super_central,
        is_normal,
        is_anti_symmetric,
        mu: is_central.then_some(mu),
        nu: is_normal.then_some(nu),
        symmetric_center: symmetric_center_from(inv, zmask),
    }
}

/// Symmetric elements of the center.
pub fn symmetric_center(l: &LoopTable, inv: &Involution) -> Vec<ElemId> {
    symmetric_center_from(inv, &l.center_mask())
}

fn symmetric_center_from(inv: &Involution, zmask: &[bool]) -> Vec<ElemId> {
    (0..zmask.len()).filter(|&z| zmask[z] && inv.apply(z) == z).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn identity_on_abelian_group() {
        let a = catalog::elementary_abelian(3);
        let id = Involution::identity(&a).unwrap();
        let r = id.classify(&a);
        assert!(r.is_identity && r.is_central && r.is_super_central);
        assert!(r.mu.unwrap().iter().all(|&m| m == 0));
        assert_eq!(r.symmetric_center.len(), 8);
    }

    #[test]
    fn identity_on_noncommutative_loop_is_rejected() {
        let q2 = catalog::quaternion();
        assert!(matches!(Involution::identity(&q2), Err(InvolutionError::NotAntiHom(..))));
    }

    #[test]
    fn validation_errors() {
        let z4 = catalog::cyclic(4);
        assert_eq!(
            Involution::new(&z4, vec![1, 0, 2, 3]).unwrap_err(),
            InvolutionError::MovesIdentity
        );
        assert_eq!(
            Involution::new(&z4, vec![0, 2, 3, 1]).unwrap_err(),
            InvolutionError::NotOrderTwo(1)
        );
        assert_eq!(
            Involution::new(&z4, vec![0, 0, 2, 3]).unwrap_err(),
            InvolutionError::NotAPermutation(0)
        );
        // swapping z and z^2 is not an anti-automorphism of Z4
        assert!(matches!(
            Involution::new(&z4, vec![0, 2, 1, 3]),
            Err(InvolutionError::NotAntiHom(..))
        ));
    }

    #[test]
    fn inverse_on_quaternions() {
        let q2 = catalog::quaternion();
        let inv = Involution::inverse(&q2).unwrap();
        let r = inv.classify(&q2);
        assert!(r.is_central && r.is_super_central && r.is_normal && r.is_anti_symmetric);
        assert!(!r.is_identity);
        assert_eq!(r.symmetric_center, vec![0, q2.find("-1").unwrap()]);
    }

    #[test]
    fn sigma_loop_involution_is_normal_not_central() {
        let (l, inv) = catalog::sigma_loop();
        let r = inv.classify(&l);
        assert!(r.is_normal);
        assert!(!r.is_central);
        assert!(r.mu.is_none());
        let nu = r.nu.unwrap();
        let (s, s2, m1) = (l.find("s").unwrap(), l.find("s2").unwrap(), l.find("-1").unwrap());
        assert_eq!(nu[s], m1);
        assert_eq!(nu[s2], 0);
    }

    #[test]
    fn symmetric_center_of_z4() {
        let z4 = catalog::cyclic(4);
        let inv = Involution::inverse(&z4).unwrap();
        // {1, z^2}: z* = z^3 is excluded
        assert_eq!(symmetric_center(&z4, &inv), vec![0, 2]);
        let id = Involution::identity(&z4).unwrap();
        assert_eq!(symmetric_center(&z4, &id), z4.center());
    }
}
