//! The reproduction suite: twelve numbered criteria, each run in isolation
//! and reported as PASS or FAIL with the findings that decided it.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use cdloops::analysis::{
    self, diassociative_fast, in_za_e2, kirsh_refutation, locally_moufang_elements, moufang_double_report,
};
use cdloops::automorphism::{self, automorphism_group, induced_linear_action, is_characteristic};
use cdloops::catalog::{self, Instance};
use cdloops::doubling::{self, verify_double_formulas, verify_triple_table, DoubleResult};
use cdloops::involution::classify_involution;
use cdloops::terms::{
    derivative_membership, expand_derivative_identities, named, parse_identity, variety_membership, Component,
    ScalingContext,
};
use cdloops::{DoublingParams, ElemId, Flavor, Identity, Involution, LoopTable, SubloopHandle, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// One acceptance criterion.
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub title: &'static str,
    run: fn(&mut Findings),
}

/// Accumulates the claims checked by a criterion.
#[derive(Default)]
pub struct Findings {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Findings {
    fn expect(&mut self, ok: bool, claim: impl Into<String>) {
        let claim = claim.into();
        if ok {
            self.notes.push(claim);
        } else {
            self.failures.push(claim);
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub title: &'static str,
    pub passed: bool,
    /// Claims that failed, each with the values found.
    pub failures: Vec<String>,
    /// Claims that held, and other observations.
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionResult {
    /// `PASS  3 characteristic  ...`, with the failures appended.
    pub fn line(&self, timings: bool) -> String {
        let mut s = format!(
            "{} {:>2} {:<16} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.title
        );
        if timings {
            s.push_str(&format!(" ({:.2} s)", self.elapsed.as_secs_f64()));
        }
        for f in &self.failures {
            s.push_str(&format!("\n        - {f}"));
        }
        s
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "aut-q3", title: "Aut(Q3) is GL3(F2) acting faithfully on Q3/Z", run: aut_q3 },
        Criterion { id: 2, name: "aut-qn", title: "|Aut(Qn)| = 168 * 2^(n-3) for n = 4, 5, 6", run: aut_qn },
        Criterion { id: 3, name: "characteristic", title: "Q3 char in Q4, Q2 not char in Q3", run: characteristic },
        Criterion { id: 4, name: "kirsh", title: "[xz, yz, zj] = 1 in Q4", run: kirsh },
        Criterion { id: 5, name: "formulas", title: "triple table and commutator/associator formulas", run: formulas },
        Criterion { id: 6, name: "main1", title: "central-by-abelian doubles", run: main1 },
        Criterion { id: 7, name: "moufang-double", title: "Moufang criterion for doubles", run: moufang_double },
        Criterion { id: 8, name: "chein", title: "M(S3, 2) is a Moufang loop of order 12", run: chein },
        Criterion { id: 9, name: "sigma", title: "involution taxonomy of the order-6 loop", run: sigma },
        Criterion { id: 10, name: "derivatives", title: "variety derivatives and homogeneity", run: derivatives },
        Criterion { id: 11, name: "diassociativity", title: "finite basis for diassociativity", run: dias },
        Criterion { id: 12, name: "locally-moufang", title: "locally Moufang elements of Q5", run: locally_moufang },
    ]
}

/// Runs the criteria, all of them or only the one named `only` (by name or
/// number). `None` when `only` matches nothing.
pub fn run(only: Option<&str>) -> Option<Vec<CriterionResult>> {
    let selected: Vec<Criterion> = criteria()
        .into_iter()
        .filter(|c| only.is_none_or(|o| o == c.name || o == c.id.to_string()))
        .collect();
    if selected.is_empty() {
        return None;
    }
    Some(selected.iter().map(run_one).collect())
}

pub fn run_one(c: &Criterion) -> CriterionResult {
    let mut f = Findings::default();
    let start = Instant::now();
    (c.run)(&mut f);
    let elapsed = start.elapsed();
    CriterionResult {
        id: c.id,
        name: c.name,
        title: c.title,
        passed: f.failures.is_empty(),
        failures: f.failures,
        notes: f.notes,
        elapsed,
    }
}

fn elem(l: &LoopTable, name: &str) -> ElemId {
    l.find(name).unwrap_or_else(|| panic!("no element {name}"))
}

fn qn(n: usize) -> DoubleResult {
    doubling::build_qn(n).expect("Qn builds").pop().expect("n >= 1")
}

fn prefix(order: usize, k: usize) -> SubloopHandle {
    SubloopHandle::from_members(order, 0..k)
}

fn aut_q3(f: &mut Findings) {
    let start = Instant::now();
    let (q3, _) = catalog::qn(3);
    let g = automorphism_group(&q3, None, Flavor::Plain).expect("Aut(Q3)");
    let la = induced_linear_action(&q3, &g).expect("Q3/Z is elementary abelian");
    f.expect(g.order == 168, format!("|Aut(Q3)| = {} (claimed 168)", g.order));
    f.expect(la.image_order == 168, format!("image in GL3(F2) has order {}", la.image_order));
    f.expect(
        la.faithful,
        format!("action on Q3/Z faithful: kernel has {} elements, all sign changes of generators", la.kernel().len()),
    );
    let secs = start.elapsed().as_secs_f64();
    f.expect(secs < 10.0, format!("computed in {secs:.2} s (limit 10 s)"));
}

fn aut_qn(f: &mut Findings) {
    let start = Instant::now();
    for n in 4..=6 {
        let (m, _) = catalog::qn(n);
        let g = automorphism_group(&m, None, Flavor::Plain).expect("Aut(Qn)");
        let claimed = 168usize << (n - 3);
        f.expect(g.order == claimed, format!("|Aut(Q{n})| = {} (claimed {claimed})", g.order));
        if n > 5 {
            continue;
        }
        let fix = g.pointwise_stabilizer(&prefix(m.order(), 16));
        let elementary = fix.iter().all(|p| automorphism::compose(p, p) == (0..m.order()).collect::<Vec<_>>());
        let abelian = fix.iter().all(|p| fix.iter().all(|q| automorphism::compose(p, q) == automorphism::compose(q, p)));
        let central = fix.iter().all(|p| g.center().contains(p));
        f.expect(
            fix.len() == 1 << (n - 3) && elementary && abelian,
            format!("Q{n}: pointwise stabiliser of Q3 is elementary abelian of order {}", fix.len()),
        );
        f.expect(central, format!("Q{n}: pointwise stabiliser of Q3 is central"));
    }
    let secs = start.elapsed().as_secs_f64();
    f.expect(secs < 120.0, format!("computed in {secs:.2} s (limit 120 s)"));
}

fn characteristic(f: &mut Findings) {
    let (q4, _) = catalog::qn(4);
    let (q3, _) = catalog::qn(3);
    let a = is_characteristic(&q4, None, &prefix(32, 16), Flavor::Plain).expect("Aut(Q4)");
    let b = is_characteristic(&q3, None, &prefix(16, 8), Flavor::Plain).expect("Aut(Q3)");
    f.expect(a, format!("Q3 characteristic in Q4: {a}"));
    f.expect(!b, format!("Q2 characteristic in Q3: {b}"));
}

fn kirsh(f: &mut Findings) {
    let q4 = qn(4);
    let r = kirsh_refutation(&q4);
    let base = q4.base();
    let minus = elem(base, "-1");
    f.expect(
        r.base_octonion.is_octonion && r.base_octonion.alpha == Some(minus),
        format!("<x,y,z> octonion with alpha = {}", r.base_octonion.alpha.map_or("none", |a| base.name(a))),
    );
    f.expect(r.triple_is_basis, "xz, yz, zj lie in <xj,yj,zj> and span it modulo the center");
    f.expect(
        r.associator == 0 && r.associator_by_formula == 0,
        format!("[xz,yz,zj] = {}", q4.table().name(r.associator)),
    );
    f.expect(r.refuted, "claim refuted");
}

fn formulas(f: &mut Findings) {
    let (q2, s2) = catalog::qn(2);
    let (sigma, ss) = catalog::sigma_loop();
    let params = DoublingParams { gamma: 1, epsilon: Some(1) };
    let targets = [
        ("D(Q2)", qn(3)),
        ("D(Q3)", qn(4)),
        ("D(sigma6)", doubling::double(&sigma, &ss, params).expect("valid parameters")),
        (
            "D2(Q2)",
            doubling::double_iterate(&q2, &s2, &[1, 1], &[Some(1), Some(1)]).expect("valid parameters").pop().unwrap(),
        ),
    ];
    let start = Instant::now();
    for (name, d) in &targets {
        let t = verify_triple_table(d);
        f.expect(
            t.mismatches.is_empty(),
            format!("{name}: {} triple-table mismatches in {} checks", t.mismatches.len(), t.checks),
        );
        let r = verify_double_formulas(d);
        f.expect(
            r.is_clean(),
            format!(
                "{name}: {} formula mismatches in {} commutator and {} associator checks",
                r.mismatches.len(),
                r.commutator_checks,
                r.associator_checks
            ),
        );
    }
    let secs = start.elapsed().as_secs_f64();
    f.expect(secs < 30.0, format!("computed in {secs:.2} s (limit 30 s)"));
}

fn all_central(l: &LoopTable, mask: &[bool], assoc: bool) -> bool {
    let n = l.order();
    (0..n).all(|a| {
        (0..n).all(|b| {
            if assoc {
                (0..n).all(|c| mask[l.associator(a, b, c)])
            } else {
                mask[l.commutator(a, b)]
            }
        })
    })
}

/// Truth values of the four left-hand and right-hand sides.
fn main1_sides(i: &Instance, d: &DoubleResult) -> ([bool; 4], [bool; 4]) {
    let (l, s) = (&i.table, &i.star);
    let m = d.table();
    let zm = m.center_mask();
    let mut zls = vec![false; l.order()];
    for a in classify_involution(l, s).symmetric_center {
        zls[a] = true;
    }
    let zl = l.center_mask();
    let comm_m = all_central(m, &zm, false);
    let assoc_m = all_central(m, &zm, true);
    let m_super = d.star().is_some_and(|ms| classify_involution(m, ms).is_super_central);
    let super_l = classify_involution(l, s).is_super_central;
    let comm_l = all_central(l, &zls, false);
    let assoc_l = all_central(l, &zls, true);
    let za_l = all_central(l, &zl, false) && all_central(l, &zl, true);
    let gamma_sym = s.apply(i.params.gamma) == i.params.gamma;
    (
        [comm_m, assoc_m, comm_m && assoc_m, comm_m && assoc_m && m_super],
        [super_l, comm_l && assoc_l, za_l && assoc_l && super_l, za_l && assoc_l && super_l && gamma_sym],
    )
}

fn build(i: &Instance) -> DoubleResult {
    doubling::double(&i.table, &i.star, i.params).expect("catalog instances are valid")
}

fn main1(f: &mut Findings) {
    let mut count = 0;
    let mut violations = Vec::new();
    for i in catalog::instances(6) {
        let zl = i.table.center_mask();
        let za = all_central(&i.table, &zl, false) && all_central(&i.table, &zl, true);
        if i.params.epsilon.is_none() || !za || i.table.order() > 16 {
            continue;
        }
        count += 1;
        let (lhs, rhs) = main1_sides(&i, &build(&i));
        for k in 0..4 {
            if lhs[k] != rhs[k] {
                violations.push(format!("{}: part {} gives {} vs {}", i.name, k + 1, lhs[k], rhs[k]));
            }
        }
    }
    f.expect(count >= 20, format!("{count} instances with an extended involution"));
    f.expect(violations.is_empty(), format!("{} violations", violations.len()));
    for v in violations.into_iter().take(5) {
        f.expect(false, v);
    }
}

fn moufang_double(f: &mut Findings) {
    let mut seen = BTreeSet::new();
    let mut checked = 0;
    let mut violations = Vec::new();
    for i in catalog::instances(6) {
        let (l, s) = (&i.table, &i.star);
        let g = i.params.gamma;
        if l.order() > 16 || s.apply(g) != g || !seen.insert((l.rows(), s.perm().to_vec(), g)) {
            continue;
        }
        let r = moufang_double_report(l, s, g).expect("gamma is symmetric and central");
        checked += 1;
        if r.predicted != r.actual {
            violations.push(format!("{}: predicted {}, actual {}", i.name, r.predicted, r.actual));
        }
    }
    f.expect(checked > 0 && violations.is_empty(), format!("{checked} (L, *, gamma) checked, {} violations", violations.len()));
    for v in violations.into_iter().take(5) {
        f.expect(false, v);
    }
    let (q2, s2) = catalog::qn(2);
    let pos = moufang_double_report(&q2, &s2, elem(&q2, "-1")).expect("-1 is symmetric and central");
    f.expect(pos.predicted && pos.actual, format!("D(Q2, *, -1) Moufang: {}", pos.actual));
    let (q3, s3) = catalog::qn(3);
    let neg = moufang_double_report(&q3, &s3, elem(&q3, "-1")).expect("-1 is symmetric and central");
    f.expect(!neg.predicted && !neg.actual, format!("D(Q3, *, -1) Moufang: {}", neg.actual));
}

fn chein(f: &mut Findings) {
    let m = doubling::build_chein(&catalog::symmetric3()).expect("S3 is a group");
    let t = m.table();
    f.expect(t.order() == 12, format!("order {}", t.order()));
    f.expect(analysis::is_moufang(t), "Moufang");
    f.expect(!t.is_associative(), "nonassociative");
}

fn sigma(f: &mut Findings) {
    let (l, s) = catalog::sigma_loop();
    let r = classify_involution(&l, &s);
    let sg = elem(&l, "s");
    let nu = r.nu.as_ref().map(|nu| l.name(nu[sg]).to_string());
    f.expect(r.is_normal, "normal");
    f.expect(nu.as_deref() == Some("-1"), format!("nu(s) = {}", nu.as_deref().unwrap_or("undefined")));
    f.expect(!r.is_central, "not central");
    let inv = l.inverses(sg);
    f.expect(
        inv.left != inv.right,
        format!("left inverse {} and right inverse {} of s", l.name(inv.left), l.name(inv.right)),
    );
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
    let op = rng.gen_range(0..4);
    let mut sub = || random_term(rng, depth - 1);
    match op {
        0 => Term::mul(sub(), sub()),
        1 => Term::ldiv(sub(), sub()),
        2 => Term::rdiv(sub(), sub()),
        _ => Term::star(sub()),
    }
}

fn unordered(id: &Identity) -> (String, String) {
    let (a, b) = (id.lhs.to_string(), id.rhs.to_string());
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn derivatives(f: &mut Findings) {
    let mut bad = Vec::new();
    let corpus = catalog::corpus();
    for e in &corpus {
        let (l, s) = (&e.table, &e.star);
        let comm_d = derivative_membership(l, s, &named::commutative()).expect("no j in COMM");
        let iden = variety_membership(l, Some(s), &named::identity_involution()).expect("well-formed");
        if comm_d != iden {
            bad.push(format!("{}: COMM' {comm_d}, IDEN {iden}", e.name));
        }
        let assoc_d = derivative_membership(l, s, &named::associative()).expect("no j in ASSOC");
        let both = l.is_associative() && l.is_commutative();
        if assoc_d != both {
            bad.push(format!("{}: ASSOC' {assoc_d}, ASSOC and COMM {both}", e.name));
        }
    }
    f.expect(bad.is_empty(), format!("COMM' = IDEN and ASSOC' = ASSOC n COMM on {} loops", corpus.len()));
    for b in bad.into_iter().take(5) {
        f.expect(false, b);
    }

    let la = parse_identity("x.(x.y) = (x.x).y").expect("well-formed");
    let got: BTreeSet<(String, String)> = expand_derivative_identities(&la)
        .iter()
        .map(|e| match &e.component {
            Component::Identity(c) => unordered(c),
            Component::False => ("FALSE".into(), String::new()),
        })
        .collect();
    let expected: BTreeSet<(String, String)> =
        ["x.(x.y) = (x.x).y", "(y.x).x = y.(x.x)", "(y.x*).x = (x*.x).y", "x.(x*.y) = y.(x*.x)"]
            .iter()
            .map(|s| unordered(&parse_identity(s).expect("well-formed")))
            .collect();
    f.expect(got == expected, format!("left-alternative expands to {} identities", got.len()));

    let (q2, s2) = catalog::qn(2);
    let minus = elem(&q2, "-1");
    let ctx = ScalingContext::new(&q2, &s2, minus, minus).expect("-1 is symmetric and central");
    let n = ctx.carrier().order();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = 0;
    for _ in 0..100 {
        let t = random_term(&mut rng, 5);
        let asg = [("x", rng.gen_range(0..n)), ("y", rng.gen_range(0..n)), ("z", rng.gen_range(0..n))];
        if !ctx.check(&t, &asg).is_ok_and(|r| r.holds) {
            failures += 1;
        }
    }
    f.expect(failures == 0, format!("degree scaling fails on {failures} of 100 random terms over Q2"));
}

fn dias(f: &mut Findings) {
    let mut loops: Vec<(String, LoopTable)> = catalog::corpus().into_iter().map(|e| (e.name, e.table)).collect();
    for i in catalog::instances(2) {
        if i.params.epsilon.is_some() {
            let d = build(&i);
            loops.push((format!("D({})", i.name), d.into_loop()));
        }
    }
    loops.push(("Q4".into(), catalog::qn(4).0));
    let mut checked = 0;
    let mut seen = [false; 2];
    let mut mismatches = Vec::new();
    for (name, l) in &loops {
        if !in_za_e2(l) {
            continue;
        }
        checked += 1;
        let fast = diassociative_fast(l).expect("loop is in ZA n E2").holds;
        let slow = analysis::is_diassociative(l);
        seen[slow as usize] = true;
        if fast != slow {
            mismatches.push(format!("{name}: finite basis {fast}, general {slow}"));
        }
    }
    f.expect(mismatches.is_empty(), format!("{checked} loops in ZA n E2 compared"));
    for m in mismatches {
        f.expect(false, m);
    }
    f.expect(seen == [true, true], "both outcomes occur");

    let (l, _) = catalog::commutative_dim2();
    let r = diassociative_fast(&l).expect("loop is in ZA n E2");
    let minus = elem(&l, "-1");
    let w = r.witness.unwrap_or_default();
    f.expect(
        !r.holds && w.len() == 6 && w[2] == w[3] && w[5] == minus,
        "commutative example fails with a witness [a, a, b] = -1",
    );
    let gens = ["a1", "a2", "a3"].map(|g| elem(&l, g));
    let pattern = gens.iter().all(|&a| gens.iter().all(|&b| l.associator(a, a, b) == if a == b { 0 } else { minus }));
    f.expect(pattern, "[ai, ai, aj] = -1 for i != j");
}

fn locally_moufang(f: &mut Findings) {
    let (q5, _) = catalog::qn(5);
    let jp = elem(&q5, "e5");
    let minus = elem(&q5, "-1");
    let allowed = [0, minus, jp, q5.mul(minus, jp)];
    let lm = locally_moufang_elements(&q5).expect("Q5 is in ZA n E2");
    let names: Vec<&str> = lm.iter().map(|&x| q5.name(x)).collect();
    f.expect(lm.iter().all(|x| allowed.contains(x)), format!("locally Moufang elements {{{}}}", names.join(", ")));
    f.expect(lm.contains(&jp), "j' = e5 is locally Moufang");
}

/// Loads a loop given as rows and names, reporting why it is invalid.
pub fn validate(rows: Vec<Vec<usize>>, names: Vec<String>, involution: Option<Vec<ElemId>>) -> Result<(), String> {
    let l = LoopTable::new(rows, names).map_err(|e| e.to_string())?;
    if let Some(p) = involution {
        Involution::new(&l, p).map_err(|e| e.to_string())?;
    }
    Ok(())
}
