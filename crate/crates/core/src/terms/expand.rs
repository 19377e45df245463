//! Symbolic expansion of an identity over the double `D(L,*,1,1)`.
//!
//! Each element of the double is `a` or `aj` with `a ∈ L`, so a term over
//! the double evaluates to a pair `(term over L, bit)`. With `γ = ε = 1`:
//!
//! ```text
//! a(bj) = (ba)j     (aj)b = (ab*)j     (aj)(bj) = b*a     (aj)* = aj
//! ```
//!
//! The divisions follow by solving these equations.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::{Identity, Term};

/// The identity over `L` that one marking reduces to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Component {
    Identity(Identity),
    /// The two sides land in different halves of the double.
    False,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Identity(id) => id.fmt(f),
            Component::False => f.write_str("FALSE"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    /// Variables ranging over `Lj`.
    pub marked: Vec<String>,
    pub component: Component,
}

/// Pushes the involution down to the variables using `(ab)* = b*a*`,
/// `(a/b)* = b*\a*`, `(a\b)* = b*/a*`, `a** = a`, `1* = 1`.
pub fn push_stars(t: &Term) -> Term {
    fn go(t: &Term, starred: bool) -> Term {
        match (t, starred) {
            (Term::Var(_), false) | (Term::One, _) | (Term::J, false) => t.clone(),
            (Term::Var(_), true) | (Term::J, true) => Term::star(t.clone()),
            (Term::Star(a), s) => go(a, !s),
            (Term::Mul(a, b), false) => Term::mul(go(a, false), go(b, false)),
            (Term::LDiv(a, b), false) => Term::ldiv(go(a, false), go(b, false)),
            (Term::RDiv(a, b), false) => Term::rdiv(go(a, false), go(b, false)),
            (Term::Mul(a, b), true) => Term::mul(go(b, true), go(a, true)),
            (Term::RDiv(a, b), true) => Term::ldiv(go(b, true), go(a, true)),
            (Term::LDiv(a, b), true) => Term::rdiv(go(b, true), go(a, true)),
        }
    }
    go(t, false)
}

fn star(t: Term) -> Term {
    push_stars(&Term::star(t))
}

fn expand(t: &Term, marks: &BTreeSet<String>) -> (Term, bool) {
    match t {
        Term::Var(v) => (t.clone(), marks.contains(v)),
        Term::One => (Term::One, false),
        Term::J => (Term::One, true),
        Term::Star(a) => {
            let (a, bit) = expand(a, marks);
            if bit {
                (a, true)
            } else {
                (star(a), false)
            }
        }
        Term::Mul(x, y) => {
            let ((a, p), (b, q)) = (expand(x, marks), expand(y, marks));
            match (p, q) {
                (false, false) => (Term::mul(a, b), false),
                (false, true) => (Term::mul(b, a), true),
                (true, false) => (Term::mul(a, star(b)), true),
                (true, true) => (Term::mul(star(b), a), false),
            }
        }
        // x/y = z means z·y = x
        Term::RDiv(x, y) => {
            let ((a, p), (b, q)) = (expand(x, marks), expand(y, marks));
            match (p, q) {
                (false, false) => (Term::rdiv(a, b), false),
                (true, false) => (Term::rdiv(a, star(b)), true),
                (false, true) => (Term::ldiv(star(b), a), true),
                (true, true) => (Term::ldiv(b, a), false),
            }
        }
        // y\x = z means y·z = x
        Term::LDiv(y, x) => {
            let ((b, q), (a, p)) = (expand(y, marks), expand(x, marks));
            match (q, p) {
                (false, false) => (Term::ldiv(b, a), false),
                (false, true) => (Term::rdiv(a, b), true),
                (true, false) => (star(Term::rdiv(a, b)), true),
                (true, true) => (star(Term::ldiv(b, a)), false),
            }
        }
    }
}

/// The `2^k` component identities of a `j`-free identity in `k` variables,
/// one per choice of which variables range over `Lj`, deduplicated by
/// printed form (sides in either order). The double `D(L,*,1,1)` satisfies
/// the identity iff `L` satisfies every component.
pub fn expand_derivative_identities(id: &Identity) -> Vec<Expansion> {
    let k = id.variables.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << k {
        let marked: Vec<String> =
            id.variables.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v.clone()).collect();
        let marks: BTreeSet<String> = marked.iter().cloned().collect();
        let (l, p) = expand(&id.lhs, &marks);
        let (r, q) = expand(&id.rhs, &marks);
        let component = if p == q {
            Component::Identity(Identity::new(push_stars(&l), push_stars(&r)))
        } else {
            Component::False
        };
        let key = match &component {
            Component::Identity(i) => {
                let (a, b) = (i.lhs.to_string(), i.rhs.to_string());
                if a <= b { (a, b) } else { (b, a) }
            }
            Component::False => ("FALSE".to_string(), String::new()),
        };
        if seen.insert(key) {
            out.push(Expansion { marked, component });
        }
    }
    out
}
