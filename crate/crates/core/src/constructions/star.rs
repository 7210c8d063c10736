use std::collections::HashMap;

use crate::algebra::{in_vn_with, Assignment, Elem, FiniteAlgebra, Identity, Signature, Var, VnOutcome};
use crate::budget::{Budget, Progress};
use crate::error::{Error, Result};
use crate::terms::{format_identity, parse_identity};

/// `A*` for a τ-algebra `A`, on `A1 × A2` with `(g, s)` at index `g·|A2| + s`.
#[derive(Clone, Debug)]
pub struct StarAlgebra {
    pub algebra: FiniteAlgebra,
    pub first: usize,
    pub second: usize,
}

impl StarAlgebra {
    #[inline]
    pub fn pair(&self, g: Elem, s: Elem) -> Elem {
        g * self.second + s
    }

    #[inline]
    pub fn split(&self, c: Elem) -> (Elem, Elem) {
        (c / self.second, c % self.second)
    }
}

const D: usize = 0;
const F: usize = 1;

/// The three defining identities of `Ω_τ*`.
pub fn omega_tau_star_identities() -> Vec<Identity> {
    let sig = Signature::tau_star();
    [
        "d(x0, x0) =~ x0",
        "d(d(x0, x1), d(x2, x3)) =~ d(x0, x3)",
        "d(f(x0), x1) =~ d(x0, x1)",
    ]
    .iter()
    .map(|t| parse_identity(t, &sig).expect("well-formed"))
    .collect()
}

/// `d((a1,a2),(b1,b2)) = (a1,b2)` and `f((a1,a2)) = (a1, s(a1,a2))`.
pub fn star(a: &FiniteAlgebra) -> Result<StarAlgebra> {
    if a.signature() != &Signature::tau() {
        return Err(Error::SignatureMismatch);
    }
    let (n1, n2) = (a.size(0), a.size(1));
    let algebra = FiniteAlgebra::from_fn(Signature::tau_star(), vec![n1 * n2], |sym, x| {
        if sym == D {
            (x[0] / n2) * n2 + x[1] % n2
        } else {
            let g = x[0] / n2;
            g * n2 + a.apply2(0, g, x[0] % n2)
        }
    })?;
    let labels = (0..n1 * n2)
        .map(|c| format!("({},{})", a.label(0, c / n2), a.label(1, c % n2)))
        .collect();
    let star = StarAlgebra {
        algebra: algebra.with_labels(vec![labels])?,
        first: n1,
        second: n2,
    };
    if let Err(e) = check_omega_tau_star(&star.algebra) {
        return Err(Error::InvalidAlgebra(format!("star construction broke: {e}")));
    }
    Ok(star)
}

fn intern<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut ids = HashMap::new();
    keys.map(|k| {
        let n = ids.len();
        *ids.entry(k).or_insert(n)
    })
    .collect()
}

fn violation(which: usize, vals: &[Elem]) -> Error {
    let id = &omega_tau_star_identities()[which];
    let mut env = Assignment::new();
    for (i, &v) in vals.iter().enumerate() {
        env.insert(Var::new(0, i), v);
    }
    Error::NotInOmegaTauStar {
        identity: format_identity(id, &Signature::tau_star()),
        witness: env.to_string(),
    }
}

/// Checks the `Ω_τ*` identities in `O(n²)`.
///
/// Given `d(x,x) = x`, the middle identity is equivalent to the pair
/// `d(d(x,y),z) = d(x,z)` and `d(x,d(y,z)) = d(x,z)`: rows of `d(x,y)` and
/// `x` agree, and columns of `d(y,z)` and `z` agree. Rows and columns are
/// interned so each comparison is constant time.
pub fn check_omega_tau_star(c: &FiniteAlgebra) -> Result<()> {
    if c.signature() != &Signature::tau_star() {
        return Err(Error::SignatureMismatch);
    }
    let n = c.size(0);
    let d = |x: Elem, y: Elem| c.apply2(D, x, y);
    let f = |x: Elem| c.apply(F, &[x]);
    if let Some(x) = (0..n).find(|&x| d(x, x) != x) {
        return Err(violation(0, &[x]));
    }
    let row = intern((0..n).map(|x| &c.table(D)[x * n..(x + 1) * n]));
    let col = intern((0..n).map(|y| (0..n).map(|x| d(x, y)).collect::<Vec<_>>()));
    for x in 0..n {
        for y in 0..n {
            let xy = d(x, y);
            if row[xy] != row[x] {
                let z = (0..n).find(|&z| d(xy, z) != d(x, z)).expect("rows differ");
                return Err(violation(1, &[x, y, z, z]));
            }
            if col[xy] != col[y] {
                let w = (0..n).find(|&w| d(w, xy) != d(w, y)).expect("columns differ");
                return Err(violation(1, &[w, w, x, y]));
            }
        }
    }
    for x in 0..n {
        if row[f(x)] != row[x] {
            let y = (0..n).find(|&y| d(f(x), y) != d(x, y)).expect("rows differ");
            return Err(violation(2, &[x, y]));
        }
    }
    Ok(())
}

/// `C□` with the bijection `c ↦ (c/E1, c/E2)`.
#[derive(Clone, Debug)]
pub struct Square {
    pub algebra: FiniteAlgebra,
    pub e1: Vec<Elem>,
    pub e2: Vec<Elem>,
}

/// Union-find classes of "some `c` gives equal values", numbered by first
/// occurrence.
fn classes(n: usize, value: impl Fn(Elem, Elem) -> Elem) -> Vec<Elem> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in 0..n {
        let mut first: HashMap<Elem, usize> = HashMap::new();
        for a in 0..n {
            match first.get(&value(a, c)) {
                Some(&b) => {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra.max(rb)] = ra.min(rb);
                }
                None => {
                    first.insert(value(a, c), a);
                }
            }
        }
    }
    let mut number = HashMap::new();
    (0..n)
        .map(|x| {
            let r = find(&mut parent, x);
            let k = number.len();
            *number.entry(r).or_insert(k)
        })
        .collect()
}

/// `C□`: universes `C/E1` and `C/E2` where `a E1 b` iff `d(a,c) = d(b,c)`
/// for some `c`, `a E2 b` iff `d(c,a) = d(c,b)` for some `c`, and
/// `s(a/E1, b/E2) = f(d(a,b))/E2`.
pub fn square(c: &FiniteAlgebra) -> Result<Square> {
    check_omega_tau_star(c)?;
    let n = c.size(0);
    let d = |x: Elem, y: Elem| c.apply2(D, x, y);
    let e1 = classes(n, |a, x| d(a, x));
    let e2 = classes(n, |a, x| d(x, a));
    let (k1, k2) = (e1.iter().max().unwrap() + 1, e2.iter().max().unwrap() + 1);
    let mut rep1 = vec![usize::MAX; k1];
    let mut rep2 = vec![usize::MAX; k2];
    for x in (0..n).rev() {
        rep1[e1[x]] = x;
        rep2[e2[x]] = x;
    }
    let mut seen = vec![false; k1 * k2];
    for x in 0..n {
        if k1 * k2 != n || std::mem::replace(&mut seen[e1[x] * k2 + e2[x]], true) {
            return Err(Error::InvalidAlgebra("c ↦ (c/E1, c/E2) is not a bijection".into()));
        }
    }
    let algebra = FiniteAlgebra::from_fn(Signature::tau(), vec![k1, k2], |_, a| {
        e2[c.apply(F, &[d(rep1[a[0]], rep2[a[1]])])]
    })?;
    let labels = vec![
        rep1.iter().map(|&x| format!("[{}]", c.label(0, x))).collect(),
        rep2.iter().map(|&x| format!("[{}]", c.label(0, x))).collect(),
    ];
    Ok(Square {
        algebra: algebra.with_labels(labels)?,
        e1,
        e2,
    })
}

/// `B* ∈ V(A*)^(n)` decided on the two-sorted side: by the correspondence
/// between `n`-generated subalgebras of `B*` and `(n, n)`-generated
/// subalgebras of `B`, and between the varieties, it is
/// `in_vn(B□, A□, (n, n))`.
pub fn in_vn_star(
    b: &FiniteAlgebra,
    a: &FiniteAlgebra,
    n: usize,
    budget: &Budget,
    progress: &dyn Progress,
) -> Result<VnOutcome> {
    let (bs, as_) = (square(b)?, square(a)?);
    in_vn_with(&bs.algebra, &as_.algebra, &[n, n], budget, progress)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{find_isomorphism, holds};
    use crate::constructions::{adjoin_zero, build_action_algebra};
    use crate::groups::FiniteGroup;

    fn s3() -> FiniteAlgebra {
        let (g, act) = FiniteGroup::symmetric(3);
        build_action_algebra(&g, &act).unwrap().algebra
    }

    #[test]
    fn sizes_and_identities() {
        let a = s3();
        let st = star(&a).unwrap();
        assert_eq!(st.algebra.size(0), 18);
        for id in omega_tau_star_identities() {
            assert!(holds(&st.algebra, &id).unwrap().is_holds());
        }
        let z = adjoin_zero(&a).unwrap();
        assert_eq!(star(&z.algebra).unwrap().algebra.size(0), 28);
        let one = FiniteAlgebra::from_fn(Signature::tau(), vec![1, 1], |_, _| 0).unwrap();
        let so = star(&one).unwrap();
        assert_eq!(so.algebra.size(0), 1);
        assert_eq!(square(&so.algebra).unwrap().algebra.sizes(), &[1, 1]);
    }

    #[test]
    fn roundtrips() {
        let a = s3();
        let st = star(&a).unwrap();
        let sq = square(&st.algebra).unwrap();
        assert!(find_isomorphism(&sq.algebra, &a).unwrap().is_some());
        let back = star(&sq.algebra).unwrap();
        assert!(find_isomorphism(&back.algebra, &st.algebra).unwrap().is_some());
    }

    #[test]
    fn fast_check_agrees_with_exhaustive() {
        // idempotent, f trivial, middle identity fails
        let sig = Signature::tau_star();
        let bad = FiniteAlgebra::from_fn(sig.clone(), vec![3], |s, x| {
            if s == 0 {
                if x[0] == x[1] { x[0] } else { (x[0] + x[1]) % 3 }
            } else {
                x[0]
            }
        })
        .unwrap();
        let err = check_omega_tau_star(&bad).unwrap_err();
        let Error::NotInOmegaTauStar { identity, .. } = &err else {
            panic!("{err:?}")
        };
        assert!(identity.contains("d(d("), "{identity}");
        assert!(!holds(&bad, &omega_tau_star_identities()[1]).unwrap().is_holds());
        assert!(square(&bad).is_err());
        let f_bad = FiniteAlgebra::from_fn(sig, vec![4], |s, x| {
            if s == 0 {
                (x[0] / 2) * 2 + x[1] % 2
            } else {
                (x[0] + 2) % 4
            }
        })
        .unwrap();
        assert!(holds(&f_bad, &omega_tau_star_identities()[1]).unwrap().is_holds());
        assert!(matches!(check_omega_tau_star(&f_bad), Err(Error::NotInOmegaTauStar { .. })));
    }
}
