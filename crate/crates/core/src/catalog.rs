//! Small loops used throughout the tests, the CLI and the benchmarks.

use crate::doubling::{self, DoubleResult, DoublingParams};
use crate::involution::Involution;
use crate::loops::LoopTable;

fn build(n: usize, names: Vec<String>, f: impl Fn(usize, usize) -> usize) -> LoopTable {
    let raw = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
    LoopTable::new(raw, names).expect("catalog tables are loops")
}

/// The cyclic group `Z_m`, element `k` being `z^k`. For `m = 2` the
/// generator is named `-1`.
pub fn cyclic(m: usize) -> LoopTable {
    assert!(m >= 1);
    let names = (0..m)
        .map(|k| match (m, k) {
            (_, 0) => "1".to_string(),
            (2, 1) => "-1".to_string(),
            (_, 1) => "z".to_string(),
            _ => format!("z^{k}"),
        })
        .collect();
    build(m, names, |a, b| (a + b) % m)
}

/// `Z_2^k`, element `x` being the bit vector `x`.
pub fn elementary_abelian(k: u32) -> LoopTable {
    let n = 1usize << k;
    let names = (0..n)
        .map(|x| {
            if x == 0 {
                "1".to_string()
            } else {
                (0..k).filter(|i| x >> i & 1 == 1).map(|i| format!("e{}", i + 1)).collect()
            }
        })
        .collect();
    build(n, names, |a, b| a ^ b)
}

/// `A × B`, the pair `(a, b)` stored at index `a * |B| + b`.
pub fn direct_product(a: &LoopTable, b: &LoopTable) -> LoopTable {
    let nb = b.order();
    let n = a.order() * nb;
    let names = (0..n)
        .map(|x| {
            if x == 0 {
                "1".to_string()
            } else {
                format!("({},{})", a.name(x / nb), b.name(x % nb))
            }
        })
        .collect();
    build(n, names, |x, y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
}

/// Involution of a direct product acting factorwise.
pub fn product_involution(
    a: &LoopTable,
    sa: &Involution,
    b: &LoopTable,
    sb: &Involution,
) -> Involution {
    let nb = b.order();
    let perm = (0..a.order() * nb).map(|x| sa.apply(x / nb) * nb + sb.apply(x % nb)).collect();
    let p = direct_product(a, b);
    Involution::new(&p, perm).expect("factorwise involution")
}

/// The symmetric group on three points, composing right to left.
pub fn symmetric3() -> LoopTable {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let names = ["()", "(12)", "(01)", "(012)", "(021)", "(02)"].map(String::from).to_vec();
    let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    build(6, names, |x, y| {
        let (s, t) = (perms[x], perms[y]);
        index([s[t[0]], s[t[1]], s[t[2]]])
    })
}

/// The dihedral group of order `2m`; `r^k s^e` sits at index `e * m + k`.
pub fn dihedral(m: usize) -> LoopTable {
    let names = (0..2 * m)
        .map(|x| {
            let (e, k) = (x / m, x % m);
            match (k, e) {
                (0, 0) => "1".to_string(),
                (0, 1) => "s".to_string(),
                (_, 0) => format!("r^{k}"),
                _ => format!("r^{k}s"),
            }
        })
        .collect();
    build(2 * m, names, |x, y| {
        let (e, a) = (x / m, x % m);
        let (f, b) = (y / m, y % m);
        let k = if e == 0 { (a + b) % m } else { (a + m - b) % m };
        ((e + f) % 2) * m + k
    })
}

/// `Q_0 = {±1}` with the identity involution.
pub fn q0() -> (LoopTable, Involution) {
    let l = cyclic(2);
    let inv = Involution::identity(&l).expect("commutative");
    (l, inv)
}

/// The quaternion group `Q_2`, as built by doubling.
pub fn quaternion() -> LoopTable {
    qn(2).0
}

/// `Q_n` with its involution; `n = 0` gives `{±1}`.
pub fn qn(n: usize) -> (LoopTable, Involution) {
    if n == 0 {
        return q0();
    }
    let chain = doubling::build_qn(n).expect("Q_n within the order cap");
    let last = chain.into_iter().last().unwrap();
    let star = last.star().cloned().expect("Q_n carries an involution");
    (last.into_loop(), star)
}

/// The nonassociative loop `{±1, ±s, ±s²}` of order 6 with `s·s = s²`,
/// `s·s² = 1`, `s²·s = -1`, `s²·s² = s`, and `-1` central; together with the
/// involution exchanging `s` and `s²`.
pub fn sigma_loop() -> (LoopTable, Involution) {
    // index = 2 * power + sign
    let names = ["1", "-1", "s", "-s", "s2", "-s2"].map(String::from).to_vec();
    let power = |a: usize, b: usize| -> (usize, usize) {
        match (a, b) {
            (0, k) | (k, 0) => (0, k),
            (1, 1) => (0, 2),
            (1, 2) => (0, 0),
            (2, 1) => (1, 0),
            (2, 2) => (0, 1),
            _ => unreachable!(),
        }
    };
    let l = build(6, names, |x, y| {
        let (sign, p) = power(x / 2, y / 2);
        2 * p + ((x % 2) ^ (y % 2) ^ sign)
    });
    let inv = Involution::new(&l, vec![0, 1, 4, 5, 2, 3]).expect("s <-> s2 is an involution");
    (l, inv)
}

/// Commutative loop `{±1, ±a1, ±a2, ±a3}` with `ai² = -1` and `ai·aj = ak`
/// for distinct indices, carrying the identity involution.
pub fn commutative_dim2() -> (LoopTable, Involution) {
    let names = ["1", "-1", "a1", "-a1", "a2", "-a2", "a3", "-a3"].map(String::from).to_vec();
    let l = build(8, names, |x, y| {
        let (i, j) = (x / 2, y / 2);
        let sign = (x % 2) ^ (y % 2);
        match (i, j) {
            (0, k) | (k, 0) => 2 * k + sign,
            _ if i == j => sign ^ 1,
            _ => 2 * (6 - i - j) + sign,
        }
    });
    let inv = Involution::identity(&l).expect("commutative");
    (l, inv)
}

/// Chein's loop `M(S_3, 2)`, the smallest nonassociative Moufang loop.
pub fn chein_s3() -> DoubleResult {
    doubling::build_chein(&symmetric3()).expect("S3 is a group")
}

/// An associative loop of dimension three: `D(Z4 × Z4, inverse, 1, 1)`.
/// It is a group of order 32 whose quotient by the center is `Z_2^3`.
pub fn associative_octonion_loop() -> (LoopTable, Involution) {
    let a = direct_product(&cyclic(4), &cyclic(4));
    let inv = Involution::inverse(&a).expect("abelian group");
    let params = DoublingParams { gamma: 0, epsilon: Some(0) };
    let d = doubling::double(&a, &inv, params).expect("valid parameters");
    let star = d.star().cloned().unwrap();
    (d.into_loop(), star)
}

/// A named loop with involution.
#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub table: LoopTable,
    pub star: Involution,
}

fn entry(name: &str, table: LoopTable, star: Involution) -> Entry {
    Entry { name: name.to_string(), table, star }
}

/// Loops with involution of order at most 16 used as a test corpus.
pub fn corpus() -> Vec<Entry> {
    let mut out = Vec::new();
    for m in [1, 2, 3, 4, 6] {
        let z = cyclic(m);
        out.push(entry(&format!("Z{m}/id"), z.clone(), Involution::identity(&z).unwrap()));
        if m > 2 {
            out.push(entry(&format!("Z{m}/inv"), z.clone(), Involution::inverse(&z).unwrap()));
        }
    }
    let v4 = elementary_abelian(2);
    out.push(entry("Z2^2/id", v4.clone(), Involution::identity(&v4).unwrap()));
    out.push(entry("Z2^2/swap", v4.clone(), Involution::new(&v4, vec![0, 2, 1, 3]).unwrap()));
    let v8 = elementary_abelian(3);
    out.push(entry("Z2^3/id", v8.clone(), Involution::identity(&v8).unwrap()));

    let z4z2 = direct_product(&cyclic(4), &cyclic(2));
    out.push(entry("Z4xZ2/id", z4z2.clone(), Involution::identity(&z4z2).unwrap()));
    out.push(entry("Z4xZ2/inv", z4z2.clone(), Involution::inverse(&z4z2).unwrap()));
    let (z4, z2) = (cyclic(4), cyclic(2));
    out.push(entry(
        "Z4xZ2/inv*id",
        z4z2,
        product_involution(&z4, &Involution::inverse(&z4).unwrap(), &z2, &Involution::identity(&z2).unwrap()),
    ));
    let z4z4 = direct_product(&z4, &z4);
    out.push(entry("Z4xZ4/inv", z4z4.clone(), Involution::inverse(&z4z4).unwrap()));

    let s3 = symmetric3();
    out.push(entry("S3/inv", s3.clone(), Involution::inverse(&s3).unwrap()));
    let d4 = dihedral(4);
    out.push(entry("D4/inv", d4.clone(), Involution::inverse(&d4).unwrap()));

    for n in 0..=3 {
        let (l, s) = qn(n);
        out.push(entry(&format!("Q{n}"), l, s));
    }
    let (l, s) = sigma_loop();
    out.push(entry("sigma6", l, s));
    let (l, s) = commutative_dim2();
    out.push(entry("comm8/id", l, s));
    let c = chein_s3();
    let s = c.star().cloned().unwrap();
    out.push(entry("M(S3,2)", c.into_loop(), s));
    out
}

/// `Q_3` restricted to the subloop generated by `gens`, with the
/// restricted involution.
pub fn q3_restriction(gens: &[&str]) -> (LoopTable, Involution) {
    let (q3, s) = qn(3);
    let ids: Vec<usize> = gens.iter().map(|g| q3.find(g).expect("generator of Q3")).collect();
    let sub = q3.generate_subloop(&ids, Some(&s));
    let r = q3.restrict(&sub);
    let pos = |x: usize| sub.members().binary_search(&x).unwrap();
    let perm = sub.members().iter().map(|&x| pos(s.apply(x))).collect();
    let inv = Involution::new(&r, perm).expect("restriction of an involution");
    (r, inv)
}

/// A loop with involution together with doubling parameters.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub table: LoopTable,
    pub star: Involution,
    pub params: DoublingParams,
}

/// Every valid `(γ, ε)` for each corpus entry (and a few restrictions of
/// `Q_3`), at most `per_entry` of them per loop, in a fixed order.
pub fn instances(per_entry: usize) -> Vec<Instance> {
    let mut entries = corpus();
    for gens in [["e1", "e2e3"], ["e1e2", "e3"]] {
        let (l, s) = q3_restriction(&gens);
        entries.push(entry(&format!("Q3<{},{}>", gens[0], gens[1]), l, s));
    }
    let mut out = Vec::new();
    for e in entries {
        let z = e.table.center();
        let mut count = 0;
        'entry: for &gamma in &z {
            for epsilon in z.iter().map(|&x| Some(x)).chain([None]) {
                if doubling::validate_params(&e.table, &e.star, gamma, epsilon).is_err() {
                    continue;
                }
                let name = format!(
                    "{}; g={}; e={}",
                    e.name,
                    e.table.name(gamma),
                    epsilon.map_or("none".to_string(), |x| e.table.name(x).to_string())
                );
                out.push(Instance {
                    name,
                    table: e.table.clone(),
                    star: e.star.clone(),
                    params: DoublingParams { gamma, epsilon },
                });
                count += 1;
                if count == per_entry {
                    break 'entry;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_tables_are_loops_of_expected_order() {
        assert_eq!(symmetric3().order(), 6);
        assert!(symmetric3().is_associative() && !symmetric3().is_commutative());
        assert_eq!(dihedral(4).order(), 8);
        assert!(dihedral(4).is_associative());
        let (l, _) = commutative_dim2();
        assert!(l.is_commutative() && !l.is_associative());
        let (o, _) = associative_octonion_loop();
        assert_eq!(o.order(), 32);
        assert!(o.is_associative());
        assert_eq!(o.structure_sets().dim, Some(3));
    }

    #[test]
    fn corpus_is_small() {
        let c = corpus();
        assert!(c.len() >= 20);
        assert!(c.iter().all(|e| e.table.order() <= 16));
        let inst = instances(4);
        assert!(inst.len() >= 40);
        assert!(inst.iter().any(|i| i.params.epsilon.is_none()));
    }

    #[test]
    fn q3_restrictions_are_quaternion_groups() {
        let (l, s) = q3_restriction(&["e1", "e2e3"]);
        assert_eq!(l.order(), 8);
        assert!(l.is_associative() && !l.is_commutative());
        assert!(s.classify(&l).is_central);
    }
}
