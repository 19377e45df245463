//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's derived operations: divisions, commutators, centers and
//! doubles are recomputed from the raw table.

#![allow(dead_code)]

use cdloops::catalog::{self, Instance};
use cdloops::{DoubleResult, ElemId, Involution, LoopTable};

pub type Table = Vec<Vec<usize>>;

pub fn raw(l: &LoopTable) -> Table {
    l.rows()
}

/// The unique `k` with `t[x][k] == y`, found by scanning.
pub fn solve_left(t: &Table, x: usize, y: usize) -> usize {
    (0..t.len()).find(|&k| t[x][k] == y).expect("latin square")
}

/// The unique `k` with `t[k][x] == y`.
pub fn solve_right(t: &Table, x: usize, y: usize) -> usize {
    (0..t.len()).find(|&k| t[k][x] == y).expect("latin square")
}

pub fn comm(t: &Table, a: usize, b: usize) -> usize {
    solve_left(t, t[b][a], t[a][b])
}

pub fn assoc(t: &Table, a: usize, b: usize, c: usize) -> usize {
    solve_left(t, t[a][t[b][c]], t[t[a][b]][c])
}

pub fn center(t: &Table) -> Vec<usize> {
    let n = t.len();
    (0..n)
        .filter(|&z| {
            (0..n).all(|a| t[z][a] == t[a][z])
                && (0..n).all(|a| {
                    (0..n).all(|b| {
                        assoc(t, z, a, b) == 0 && assoc(t, a, z, b) == 0 && assoc(t, a, b, z) == 0
                    })
                })
        })
        .collect()
}

pub fn nucleus(t: &Table) -> Vec<usize> {
    let n = t.len();
    (0..n)
        .filter(|&z| {
            (0..n).all(|a| {
                (0..n).all(|b| assoc(t, z, a, b) == 0 && assoc(t, a, z, b) == 0 && assoc(t, a, b, z) == 0)
            })
        })
        .collect()
}

pub fn symmetric_center(t: &Table, s: &[usize]) -> Vec<usize> {
    center(t).into_iter().filter(|&z| s[z] == z).collect()
}

pub fn all_commutators(t: &Table) -> Vec<usize> {
    let n = t.len();
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| comm(t, a, b)).collect()
}

pub fn all_associators(t: &Table) -> Vec<usize> {
    let n = t.len();
    let mut out = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                out.push(assoc(t, a, b, c));
            }
        }
    }
    out
}

pub fn subset(xs: &[usize], of: &[usize]) -> bool {
    xs.iter().all(|x| of.contains(x))
}

pub fn central_by_abelian(t: &Table) -> bool {
    let z = center(t);
    subset(&all_commutators(t), &z) && subset(&all_associators(t), &z)
}

/// `a* ∈ Z(L) a` for every `a`.
pub fn star_central(t: &Table, s: &[usize]) -> bool {
    let z = center(t);
    (0..t.len()).all(|a| z.contains(&solve_right(t, a, s[a])))
}

/// Central and `μ(a)² = 1`.
pub fn star_super_central(t: &Table, s: &[usize]) -> bool {
    let z = center(t);
    (0..t.len()).all(|a| {
        let mu = solve_right(t, a, s[a]);
        z.contains(&mu) && t[mu][mu] == 0
    })
}

/// `D(L,*,γ,ε)` straight from the defining formulas, with `aj` at `n + a`.
/// Returns the table and, when `ε` is given, the involution.
pub fn double_oracle(t: &Table, s: &[usize], gamma: usize, epsilon: Option<usize>) -> (Table, Option<Vec<usize>>) {
    let n = t.len();
    let mut m = vec![vec![0; 2 * n]; 2 * n];
    for a in 0..n {
        for b in 0..n {
            m[a][b] = t[a][b];
            m[a][n + b] = n + t[b][a];
            m[n + a][b] = n + t[a][s[b]];
            m[n + a][n + b] = t[gamma][t[s[b]][a]];
        }
    }
    let star = epsilon.map(|e| (0..2 * n).map(|x| if x < n { s[x] } else { n + t[e][x - n] }).collect());
    (m, star)
}

pub fn loop_from(t: Table) -> LoopTable {
    let names = (0..t.len()).map(|i| if i == 0 { "1".to_string() } else { format!("x{i}") }).collect();
    LoopTable::new(t, names).expect("valid loop")
}

pub fn build(i: &Instance) -> DoubleResult {
    cdloops::doubling::double(&i.table, &i.star, i.params).expect("valid parameters")
}

/// The standard corpus: every entry with up to six parameter choices.
pub fn corpus() -> Vec<Instance> {
    catalog::instances(6)
}

pub fn perm(s: &Involution) -> Vec<usize> {
    s.perm().to_vec()
}

pub fn elem(l: &LoopTable, name: &str) -> ElemId {
    l.find(name).unwrap_or_else(|| panic!("no element {name}"))
}

/// Closure of `gens` under multiplication and both divisions.
pub fn generate(t: &Table, gens: &[usize]) -> Vec<usize> {
    let n = t.len();
    let mut inside = vec![false; n];
    inside[0] = true;
    for &g in gens {
        inside[g] = true;
    }
    loop {
        let members: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
        let mut grew = false;
        for &a in &members {
            for &b in &members {
                for c in [t[a][b], solve_left(t, a, b), solve_right(t, a, b)] {
                    if !inside[c] {
                        inside[c] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return (0..n).filter(|&x| inside[x]).collect();
        }
    }
}

pub fn moufang_on(t: &Table, s: &[usize]) -> bool {
    s.iter().all(|&x| {
        s.iter().all(|&y| s.iter().all(|&z| t[t[z][x]][t[y][z]] == t[t[z][t[x][y]]][z]))
    })
}

pub fn associative_on(t: &Table, s: &[usize]) -> bool {
    s.iter().all(|&a| s.iter().all(|&b| s.iter().all(|&c| t[t[a][b]][c] == t[a][t[b][c]])))
}

pub fn diassociative(t: &Table) -> bool {
    let n = t.len();
    (0..n).all(|x| (0..n).all(|y| associative_on(t, &generate(t, &[x, y]))))
}

/// `log2 |S Z / Z|` for a subloop `S`.
pub fn dim_mod_center(t: &Table, s: &[usize]) -> u32 {
    let z = center(t);
    let mut cosets: Vec<Vec<usize>> = s
        .iter()
        .map(|&x| {
            let mut c: Vec<usize> = z.iter().map(|&k| t[x][k]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    cosets.sort();
    cosets.dedup();
    cosets.len().trailing_zeros()
}
