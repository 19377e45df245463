mod common;

use cdloops::catalog;
use cdloops::involution::{classify_involution, symmetric_center, InvolutionError};
use cdloops::{Involution, LoopTable};
use common::*;

/// Corpus loops with their involutions, plus every double that carries one.
fn sample() -> Vec<(String, LoopTable, Involution)> {
    let mut out: Vec<_> = catalog::corpus().into_iter().map(|e| (e.name, e.table, e.star)).collect();
    for i in catalog::instances(3) {
        if i.params.epsilon.is_none() {
            continue;
        }
        let d = build(&i);
        let s = d.star().unwrap().clone();
        out.push((format!("D({})", i.name), d.into_loop(), s));
    }
    out
}

#[test]
fn classification_matches_brute_force() {
    for (name, l, s) in sample() {
        let t = raw(&l);
        let p = perm(&s);
        let z = center(&t);
        let r = classify_involution(&l, &s);
        assert_eq!(r.is_identity, (0..l.order()).all(|a| p[a] == a), "{name}");
        assert_eq!(r.is_central, star_central(&t, &p), "{name}");
        assert_eq!(r.is_super_central, star_super_central(&t, &p), "{name}");
        assert_eq!(r.is_normal, (0..l.order()).all(|a| z.contains(&t[p[a]][a])), "{name}");
        assert_eq!(r.is_anti_symmetric, (0..l.order()).all(|a| z.contains(&a) || p[a] != a), "{name}");
        assert_eq!(r.symmetric_center, common::symmetric_center(&t, &p), "{name}");
        assert_eq!(symmetric_center(&l, &s), r.symmetric_center, "{name}");
        assert_eq!(r.mu.is_some(), r.is_central, "{name}");
        assert_eq!(r.nu.is_some(), r.is_normal, "{name}");
        if let Some(mu) = &r.mu {
            for a in l.elements() {
                assert_eq!(l.mul(mu[a], a), s.apply(a), "{name}");
            }
        }
    }
}

#[test]
fn involutions_are_anti_automorphisms() {
    for (name, l, s) in sample() {
        for a in l.elements() {
            assert_eq!(s.apply(s.apply(a)), a, "{name}");
            for b in l.elements() {
                assert_eq!(s.apply(l.mul(a, b)), l.mul(s.apply(b), s.apply(a)), "{name}");
                assert_eq!(s.apply(l.rdiv(a, b)), l.ldiv(s.apply(b), s.apply(a)), "{name}");
            }
        }
    }
}

#[test]
fn any_two_of_central_normal_and_exp2_give_the_third() {
    let mut seen = [false; 3];
    for (name, l, s) in sample() {
        let r = classify_involution(&l, &s);
        let z = l.center();
        let e2 = l.elements().all(|x| z.contains(&l.mul(x, x)));
        let count = [r.is_central, r.is_normal, e2].iter().filter(|&&b| b).count();
        assert_ne!(count, 2, "{name}: central={} normal={} e2={e2}", r.is_central, r.is_normal);
        seen[0] |= count == 3;
        seen[1] |= count == 1;
        seen[2] |= count == 0;
    }
    assert_eq!(seen[..2], [true, true]);
}

#[test]
fn normal_involutions_give_aaip_iff_the_norm_is_multiplicative() {
    let mut both = [false; 2];
    for (name, l, s) in sample() {
        let r = classify_involution(&l, &s);
        let Some(nu) = r.nu else { continue };
        let aaip = l.elements().all(|x| {
            l.elements().all(|y| l.inverses(l.mul(x, y)).left == l.mul(l.inverses(y).left, l.inverses(x).left))
        });
        let hom = l.elements().all(|x| l.elements().all(|y| nu[l.mul(x, y)] == l.mul(nu[x], nu[y])));
        assert_eq!(aaip, hom, "{name}");
        both[aaip as usize] = true;
    }
    assert_eq!(both, [true, true]);
}

#[test]
fn symmetric_associators_criterion() {
    for (name, l, s) in sample() {
        let t = raw(&l);
        if !central_by_abelian(&t) || !classify_involution(&l, &s).is_central {
            continue;
        }
        let zs = symmetric_center(&l, &s);
        let lhs = subset(&all_associators(&t), &zs);
        let rhs = l.elements().all(|a| {
            l.elements().all(|b| l.elements().all(|c| l.mul(l.associator(a, b, c), l.associator(c, b, a)) == 0))
        });
        assert_eq!(lhs, rhs, "{name}");
    }
}

#[test]
fn sigma_loop_taxonomy() {
    let (l, s) = catalog::sigma_loop();
    let r = classify_involution(&l, &s);
    let sigma = elem(&l, "s");
    assert!(r.is_normal);
    assert_eq!(r.nu.as_ref().unwrap()[sigma], elem(&l, "-1"));
    assert!(!r.is_central);
    let inv = l.inverses(sigma);
    assert_ne!(inv.left, inv.right);
    assert!(!l.is_associative());
}

#[test]
fn identity_is_an_involution_only_on_commutative_loops() {
    assert!(Involution::identity(&catalog::cyclic(5)).is_ok());
    assert!(matches!(Involution::identity(&catalog::symmetric3()), Err(InvolutionError::NotAntiHom(..))));
    let (q2, _) = catalog::qn(2);
    assert!(Involution::identity(&q2).is_err());
    assert!(Involution::new(&q2, vec![0; 8]).is_err());
}
