mod common;

use std::collections::BTreeSet;

use cdloops::catalog;
use cdloops::terms::{
    self, check_identity, degrees, derivative_membership, eval_term, expand_derivative_identities, is_homogeneous,
    named, parse_identity, parse_term, variety_membership, Component, ScalingContext, VarietySpec,
};
use cdloops::{doubling, DoublingParams, Identity, Involution, LoopTable, Term, TermError};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_corpus() -> Vec<(String, LoopTable, Involution)> {
    catalog::corpus()
        .into_iter()
        .filter(|e| e.table.order() <= 8)
        .map(|e| (e.name, e.table, e.star))
        .collect()
}

fn term_strategy(with_j: bool) -> impl Strategy<Value = Term> {
    let mut leaves = vec![
        Just(Term::var("x")).boxed(),
        Just(Term::var("y")).boxed(),
        Just(Term::var("z")).boxed(),
        Just(Term::One).boxed(),
    ];
    if with_j {
        leaves.push(Just(Term::J).boxed());
        leaves.push(Just(Term::var("ab")).boxed());
    }
    proptest::strategy::Union::new(leaves).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::ldiv(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::rdiv(a, b)),
            inner.prop_map(Term::star),
        ]
    })
}

fn random_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..5) {
            0 => Term::var("x"),
            1 => Term::var("y"),
            2 => Term::var("z"),
            3 => Term::J,
            _ => Term::One,
        };
    }
    match rng.gen_range(0..4) {
        0 => Term::mul(random_term(rng, depth - 1), random_term(rng, depth - 1)),
        1 => Term::ldiv(random_term(rng, depth - 1), random_term(rng, depth - 1)),
        2 => Term::rdiv(random_term(rng, depth - 1), random_term(rng, depth - 1)),
        _ => Term::star(random_term(rng, depth - 1)),
    }
}

proptest! {
    #[test]
    fn printing_round_trips(t in term_strategy(true)) {
        let printed = t.to_string();
        prop_assert_eq!(parse_term(&printed).unwrap(), t.clone());
        let id = Identity::new(t.clone(), Term::star(t));
        prop_assert_eq!(parse_identity(&id.to_string()).unwrap(), id);
    }

    #[test]
    fn pushing_stars_preserves_values(t in term_strategy(false), idx in 0usize..32, vals in proptest::array::uniform3(0usize..16)) {
        let corpus = small_corpus();
        let (_, l, s) = &corpus[idx % corpus.len()];
        let n = l.order();
        let assignment = [("x", vals[0] % n), ("y", vals[1] % n), ("z", vals[2] % n)];
        let a = eval_term(l, Some(s), &assignment, &t).unwrap();
        let b = eval_term(l, Some(s), &assignment, &terms::push_stars(&t)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn evaluation_matches_the_table(idx in 0usize..32, a in 0usize..16, b in 0usize..16) {
        let corpus = small_corpus();
        let (_, l, s) = &corpus[idx % corpus.len()];
        let t = raw(l);
        let (a, b) = (a % l.order(), b % l.order());
        let asg = [("a", a), ("b", b)];
        let ev = |src: &str| eval_term(l, Some(s), &asg, &parse_term(src).unwrap()).unwrap();
        prop_assert_eq!(ev("a.b"), t[a][b]);
        prop_assert_eq!(ev("a\\b"), solve_left(&t, a, b));
        prop_assert_eq!(ev("a/b"), solve_right(&t, b, a));
        prop_assert_eq!(ev("(a/b)*"), ev("b*\\a*"));
        prop_assert_eq!(ev("(a\\b)*"), ev("b*/a*"));
    }
}

#[test]
fn identity_checks_match_brute_force() {
    for (name, l, s) in small_corpus() {
        let t = raw(&l);
        let all: Vec<usize> = l.elements().collect();
        let check = |v: VarietySpec| variety_membership(&l, Some(&s), &v).unwrap();
        assert_eq!(check(named::commutative()), l.is_commutative(), "{name}");
        assert_eq!(check(named::associative()), associative_on(&t, &all), "{name}");
        assert_eq!(check(named::moufang()), moufang_on(&t, &all), "{name}");
        assert_eq!(check(named::identity_involution()), s.is_identity(), "{name}");
        let z = center(&t);
        assert_eq!(check(named::normal()), l.elements().all(|x| z.contains(&t[s.apply(x)][x])), "{name}");
        assert_eq!(check(named::squares_central()), l.elements().all(|x| z.contains(&t[x][x])), "{name}");
    }
}

#[test]
fn failing_identities_report_the_first_witness() {
    let (q2, s) = catalog::qn(2);
    let r = check_identity(&q2, Some(&s), &parse_identity("x.y = y.x").unwrap()).unwrap();
    assert!(!r.holds);
    let w = r.witness.unwrap();
    assert_eq!(w, vec![("x".to_string(), elem(&q2, "e1")), ("y".to_string(), elem(&q2, "e2"))]);
    assert!(matches!(
        check_identity(&q2, None, &parse_identity("x* = x").unwrap()),
        Err(TermError::MissingInvolution)
    ));
    assert!(matches!(
        check_identity(&q2, Some(&s), &parse_identity("x.j = j.x").unwrap()),
        Err(TermError::JNotAllowed)
    ));
}

fn components_hold(l: &LoopTable, s: &Involution, id: &Identity) -> bool {
    expand_derivative_identities(id).iter().all(|e| match &e.component {
        Component::False => false,
        Component::Identity(c) => check_identity(l, Some(s), c).unwrap().holds,
    })
}

#[test]
fn expansion_agrees_with_the_double() {
    let identities = [
        "x.y = y.x",
        "(x.y).z = x.(y.z)",
        "(z.x).(y.z) = (z.(x.y)).z",
        "(x.x).y = x.(x.y)",
        "x* = x",
        "(x.y).x = x.(y.x)",
        "(x*.x).y = y.(x*.x)",
        "x/(y\\x) = y",
        "(x.y)\\x = y*",
        "1/(x.y) = (1/y).(1/x)",
    ];
    let mut seen = [false; 2];
    for src in identities {
        let id = parse_identity(src).unwrap();
        for (name, l, s) in small_corpus() {
            let v = VarietySpec { name: src.into(), identities: vec![id.clone()] };
            let semantic = derivative_membership(&l, &s, &v).unwrap();
            assert_eq!(semantic, components_hold(&l, &s, &id), "{src} on {name}");
            seen[semantic as usize] = true;
        }
    }
    assert_eq!(seen, [true, true]);
}

#[test]
fn derivative_of_commutativity_is_the_identity_involution() {
    for e in catalog::corpus() {
        let d = derivative_membership(&e.table, &e.star, &named::commutative()).unwrap();
        assert_eq!(d, e.star.is_identity(), "{}", e.name);
    }
}

#[test]
fn derivative_of_associativity_adds_commutativity() {
    let mut seen = [false; 2];
    for e in catalog::corpus() {
        let d = derivative_membership(&e.table, &e.star, &named::associative()).unwrap();
        assert_eq!(d, e.table.is_associative() && e.table.is_commutative(), "{}", e.name);
        seen[d as usize] = true;
        if d {
            let dd = doubling::double(&e.table, &e.star, DoublingParams { gamma: 0, epsilon: Some(0) }).unwrap();
            let second = derivative_membership(dd.table(), dd.star().unwrap(), &named::associative()).unwrap();
            assert_eq!(second, e.star.is_identity(), "{}", e.name);
        }
    }
    assert_eq!(seen, [true, true]);
}

fn unordered(id: &Identity) -> (String, String) {
    let (a, b) = (id.lhs.to_string(), id.rhs.to_string());
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[test]
fn left_alternative_expands_to_four_identities() {
    let id = parse_identity("x.(x.y) = (x.x).y").unwrap();
    let got: BTreeSet<(String, String)> = expand_derivative_identities(&id)
        .iter()
        .map(|e| match &e.component {
            Component::Identity(c) => unordered(c),
            Component::False => panic!("unexpected FALSE"),
        })
        .collect();
    let expected: BTreeSet<(String, String)> = [
        "x.(x.y) = (x.x).y",
        "(y.x).x = y.(x.x)",
        "(y.x*).x = (x*.x).y",
        "x.(x*.y) = y.(x*.x)",
    ]
    .iter()
    .map(|s| unordered(&parse_identity(s).unwrap()))
    .collect();
    assert_eq!(got, expected);
}

#[test]
fn commutativity_marking_forces_symmetry() {
    let id = parse_identity("x.y = y.x").unwrap();
    let e = expand_derivative_identities(&id);
    let marked_y = e.iter().find(|e| e.marked == ["y"]).unwrap();
    let Component::Identity(c) = &marked_y.component else { panic!() };
    assert_eq!(unordered(c), unordered(&parse_identity("y.x = y.x*").unwrap()));
}

#[test]
fn scaling_law_on_random_terms() {
    let (q2, s) = catalog::qn(2);
    let minus = elem(&q2, "-1");
    let ctx = ScalingContext::new(&q2, &s, minus, minus).unwrap();
    let n = ctx.carrier().order();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut with_j = 0;
    for _ in 0..100 {
        let t = random_term(&mut rng, 5);
        with_j += t.contains_j() as usize;
        let asg = [("x", rng.gen_range(0..n)), ("y", rng.gen_range(0..n)), ("z", rng.gen_range(0..n))];
        let r = ctx.check(&t, &asg).unwrap();
        assert!(r.holds, "{t} under {asg:?}: {r:?}");
    }
    assert!(with_j >= 20);
}

#[test]
fn homogeneous_identities_do_not_see_the_parameters() {
    let identities = ["(z.x).(y.z) = (z.(x.y)).z", "(x.y).z = x.(y.z)", "(x*.x).y = y.(x*.x)", "x.y = y.x"];
    for src in identities {
        let id = parse_identity(src).unwrap();
        let vars: Vec<String> = id.variables.clone();
        for mask in 0..1u32 << vars.len() {
            let marks: BTreeSet<String> =
                vars.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v.clone()).collect();
            assert!(is_homogeneous(&id, &marks), "{src} {marks:?}");
        }
        for e in catalog::corpus().into_iter().filter(|e| e.table.order() <= 8) {
            let (l, s) = (&e.table, &e.star);
            let plain = doubling::double(l, s, DoublingParams { gamma: 0, epsilon: Some(0) }).unwrap();
            let base = variety_membership(plain.table(), plain.star(), &VarietySpec { name: src.into(), identities: vec![id.clone()] }).unwrap();
            for g in l.center().into_iter().filter(|&g| s.apply(g) == g) {
                for eps in l.center().into_iter().filter(|&x| s.apply(x) == x && l.mul(x, x) == 0) {
                    let d = doubling::double(l, s, DoublingParams { gamma: g, epsilon: Some(eps) }).unwrap();
                    let v = VarietySpec { name: src.into(), identities: vec![id.clone()] };
                    assert_eq!(variety_membership(d.table(), d.star(), &v).unwrap(), base, "{src} on {}", e.name);
                }
            }
        }
    }
    let star = parse_identity("x* = x").unwrap();
    let marks: BTreeSet<String> = ["x".to_string()].into();
    assert!(!is_homogeneous(&star, &marks));
    assert_eq!(degrees(&star.lhs, &marks).deps, 1);
}

#[test]
fn variety_files_parse() {
    let v = VarietySpec::parse("M", "# Moufang\n(z.x).(y.z) = (z.(x.y)).z\n\n x* = x # trailing\n").unwrap();
    assert_eq!(v.identities.len(), 2);
    assert!(VarietySpec::parse("bad", "x.y.z = x").is_err());
    assert!(matches!(VarietySpec::parse("bad", "x ="), Err(TermError::Syntax(_))));
}
