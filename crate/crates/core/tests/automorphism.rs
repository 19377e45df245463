mod common;

use std::collections::BTreeSet;

use cdloops::automorphism::{
    self, automorphism_group, compose, induced_linear_action, inverse, is_characteristic,
    pair_correspondence_check, AutError, Flavor,
};
use cdloops::catalog;
use cdloops::doubling;
use cdloops::{Involution, LoopTable, SubloopHandle};
use common::*;

/// All automorphisms by running through every permutation fixing 1.
fn brute_force(l: &LoopTable, star: Option<&Involution>) -> Vec<Vec<usize>> {
    let t = raw(l);
    let n = t.len();
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, t: &Table, star: Option<&[usize]>, out: &mut Vec<Vec<usize>>) {
        let n = p.len();
        if k == n {
            let hom = (0..n).all(|a| (0..n).all(|b| p[t[a][b]] == t[p[a]][p[b]]));
            let commutes = star.is_none_or(|s| (0..n).all(|a| p[s[a]] == s[p[a]]));
            if hom && commutes {
                out.push(p.clone());
            }
            return;
        }
        for i in k..n {
            p.swap(k, i);
            rec(k + 1, p, t, star, out);
            p.swap(k, i);
        }
    }
    let s = star.map(perm);
    rec(1, &mut p, &t, s.as_deref(), &mut out);
    out.sort();
    out
}

#[test]
fn search_agrees_with_brute_force() {
    let mut cases: Vec<(String, LoopTable, Involution)> = catalog::corpus()
        .into_iter()
        .filter(|e| e.table.order() <= 8)
        .map(|e| (e.name, e.table, e.star))
        .collect();
    for i in catalog::instances(2).into_iter().filter(|i| i.table.order() <= 4 && i.params.epsilon.is_some()) {
        let d = build(&i);
        cases.push((format!("D({})", i.name), d.table().clone(), d.star().unwrap().clone()));
    }
    assert!(cases.len() >= 15);
    for (name, l, s) in cases {
        let plain = automorphism_group(&l, None, Flavor::Plain).unwrap();
        assert_eq!(plain.elements, brute_force(&l, None), "{name}");
        assert_eq!(plain.order, plain.elements.len());
        let star = automorphism_group(&l, Some(&s), Flavor::Star).unwrap();
        assert_eq!(star.elements, brute_force(&l, Some(&s)), "{name}");
    }
}

#[test]
fn groups_are_closed_and_generated() {
    for n in [2, 3] {
        let (q, s) = catalog::qn(n);
        for flavor in [Flavor::Plain, Flavor::Star] {
            let g = automorphism_group(&q, Some(&s), flavor).unwrap();
            assert_eq!(g.elements[0], (0..q.order()).collect::<Vec<_>>());
            for p in &g.elements {
                assert!(g.contains(&inverse(p)));
                for gen in &g.generators {
                    assert!(g.contains(&compose(p, gen)));
                }
            }
        }
    }
}

#[test]
fn automorphisms_of_q3() {
    let (q3, s) = catalog::qn(3);
    let g = automorphism_group(&q3, None, Flavor::Plain).unwrap();
    assert_eq!(g.order, 1344);
    let gs = automorphism_group(&q3, Some(&s), Flavor::Star).unwrap();
    assert_eq!(gs.elements, g.elements);
    let la = induced_linear_action(&q3, &g).unwrap();
    assert_eq!(la.dim, 3);
    assert_eq!(la.image_order, 168);
    assert!(!la.faithful);
    // the kernel consists of the sign changes x -> χ(x̄)x
    let kernel = la.kernel();
    assert_eq!(kernel.len(), 8);
    let minus = elem(&q3, "-1");
    for &k in &kernel {
        let p = &g.elements[k];
        assert!(q3.elements().all(|x| p[x] == x || p[x] == q3.mul(minus, x)));
    }
}

#[test]
fn linear_action_is_a_homomorphism() {
    let (q3, _) = catalog::qn(3);
    let g = automorphism_group(&q3, None, Flavor::Plain).unwrap();
    let la = induced_linear_action(&q3, &g).unwrap();
    let mat = |p: &[usize]| la.matrices[g.index_of(p).unwrap()].clone();
    let apply = automorphism::LinearAction::apply;
    for p in g.elements.iter().step_by(37) {
        for q in g.elements.iter().step_by(41) {
            let pq = mat(&compose(p, q));
            let (mp, mq) = (mat(p), mat(q));
            for v in 0..8u32 {
                assert_eq!(apply(&pq, v), apply(&mp, apply(&mq, v)));
            }
        }
    }
}

#[test]
fn automorphisms_of_q4_and_q5() {
    for n in [4usize, 5] {
        let (q, s) = catalog::qn(n);
        let g = automorphism_group(&q, None, Flavor::Plain).unwrap();
        assert_eq!(g.order, 1344 << (n - 3), "Q{n}");
        let gs = automorphism_group(&q, Some(&s), Flavor::Star).unwrap();
        assert_eq!(gs.order, g.order, "Q{n}");
        let q3 = SubloopHandle::from_members(q.order(), 0..16);
        assert!(q3.is_closed(&q));
        let fix = g.pointwise_stabilizer(&q3);
        assert_eq!(fix.len(), 1 << (n - 3), "Q{n}");
        let id: Vec<usize> = (0..q.order()).collect();
        for p in &fix {
            assert_eq!(compose(p, p), id);
            for gen in &g.generators {
                assert_eq!(compose(p, gen), compose(gen, p));
            }
        }
        let la = induced_linear_action(&q, &g).unwrap();
        // the sign changes x -> χ(x̄)x form the kernel, so the image stays GL3(F2)
        assert_eq!(la.image_order, 168, "Q{n}");
        assert_eq!(la.kernel().len(), 1 << n, "Q{n}");
    }
}

#[test]
fn automorphisms_of_q5_split_over_q3() {
    let chain = doubling::build_qn(5).unwrap();
    let q5 = chain[4].table();
    let q3 = chain[2].table();
    let s3 = chain[2].star().unwrap();
    let g = automorphism_group(q5, None, Flavor::Plain).unwrap();
    let aut_q3 = automorphism_group(q3, Some(s3), Flavor::Star).unwrap();
    let minus = elem(q5, "-1");
    let (e4, e5) = (elem(q5, "e4"), elem(q5, "e5"));
    let mut images = BTreeSet::new();
    for p in &g.elements {
        assert!((0..16).all(|x| p[x] < 16));
        let restricted: Vec<usize> = p[..16].to_vec();
        assert!(aut_q3.contains(&restricted));
        let sign = |e: usize| {
            if p[e] == e {
                false
            } else {
                assert_eq!(p[e], q5.mul(minus, e));
                true
            }
        };
        images.insert((restricted, sign(e4), sign(e5)));
    }
    assert_eq!(images.len(), g.order);
    assert_eq!(images.len(), aut_q3.order * 4);
}

#[test]
fn second_double_generator_is_fixed_modulo_the_center() {
    for n in [4usize, 5] {
        let (q, _) = catalog::qn(n);
        let g = automorphism_group(&q, None, Flavor::Plain).unwrap();
        let jp = elem(&q, &format!("e{n}"));
        let coset = [jp, q.mul(elem(&q, "-1"), jp)];
        assert!(g.elements.iter().all(|p| coset.contains(&p[jp])), "Q{n}");
    }
    // Q3 acts transitively on Q3/Z minus the identity
    let (q3, _) = catalog::qn(3);
    let g = automorphism_group(&q3, None, Flavor::Plain).unwrap();
    let e3 = elem(&q3, "e3");
    let orbit: BTreeSet<usize> = g.elements.iter().map(|p| p[e3]).collect();
    assert_eq!(orbit.len(), 14);
}

#[test]
fn characteristic_subloops() {
    let (q4, s4) = catalog::qn(4);
    let (q3, s3) = catalog::qn(3);
    let (q5, _) = catalog::qn(5);
    let in_q4 = SubloopHandle::from_members(32, 0..16);
    assert!(is_characteristic(&q4, None, &in_q4, Flavor::Plain).unwrap());
    assert!(is_characteristic(&q4, Some(&s4), &in_q4, Flavor::Star).unwrap());
    let in_q3 = SubloopHandle::from_members(16, 0..8);
    assert!(!is_characteristic(&q3, None, &in_q3, Flavor::Plain).unwrap());
    assert!(!is_characteristic(&q3, Some(&s3), &in_q3, Flavor::Star).unwrap());
    let in_q5 = SubloopHandle::from_members(64, 0..32);
    assert!(is_characteristic(&q5, None, &in_q5, Flavor::Plain).unwrap());
    let center = SubloopHandle::from_members(32, q4.center());
    assert!(is_characteristic(&q4, None, &center, Flavor::Plain).unwrap());
}

#[test]
fn pair_correspondence_for_doubles() {
    let chain = doubling::build_qn(4).unwrap();
    for d in &chain[1..] {
        let r = pair_correspondence_check(d).unwrap();
        assert!(r.is_bijective(), "{:?}", r.violations);
    }
    let r = pair_correspondence_check(&chain[2]).unwrap();
    assert_eq!((r.preserving, r.pairs), (48, 48));
    let mut checked = 0;
    for i in catalog::instances(3).into_iter().filter(|i| i.table.order() <= 8) {
        let d = build(&i);
        let r = pair_correspondence_check(&d).unwrap();
        assert!(r.is_bijective(), "{}: {:?}", i.name, r.violations);
        assert_eq!(r.star_preserving.is_some(), i.params.epsilon.is_some());
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn star_fixing_flavour() {
    let (q3, s) = catalog::qn(3);
    let g = automorphism_group(&q3, Some(&s), Flavor::StarFixing(elem(&q3, "-1"))).unwrap();
    assert_eq!(g.order, 1344);
    let g = automorphism_group(&q3, Some(&s), Flavor::StarFixing(elem(&q3, "e1"))).unwrap();
    assert_eq!(g.order, 96);
    assert!(matches!(
        automorphism_group(&q3, None, Flavor::Star),
        Err(AutError::MissingInvolution)
    ));
}
