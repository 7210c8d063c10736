use crate::algebra::{Assignment, Check, CompiledTerm, Elem, FiniteAlgebra, Identity, Signature, Term, Var, DOT};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groups::GroupAction;

use super::TwoSortedActionAlgebra;

/// `Auto(G, S, σ)` on `G ⊎ S ⊎ {0}`: indices `0..|G|`, then `S`, then `0`.
#[derive(Clone, Debug)]
pub struct AutomaticAlgebra {
    pub algebra: FiniteAlgebra,
    pub g_size: usize,
    pub s_size: usize,
}

impl AutomaticAlgebra {
    pub fn zero(&self) -> Elem {
        self.g_size + self.s_size
    }

    pub fn size(&self) -> usize {
        self.g_size + self.s_size + 1
    }

    /// `A(G⁰, S⁰, σ)`: the restriction of `·` to `G⁰ × S⁰`, with zeros last.
    pub fn two_sorted(&self) -> TwoSortedActionAlgebra {
        let (ng, ns, z) = (self.g_size, self.s_size, self.zero());
        let g_elem = |x: Elem| if x == ng { z } else { x };
        let s_elem = |y: Elem| if y == ns { z } else { ng + y };
        let algebra = FiniteAlgebra::from_fn(Signature::tau(), vec![ng + 1, ns + 1], |_, a| {
            let v = self.algebra.apply2(0, g_elem(a[0]), s_elem(a[1]));
            if v == z {
                ns
            } else {
                v - ng
            }
        })
        .expect("products stay in S ⊎ {0}");
        let labels = vec![
            (0..=ng).map(|x| self.algebra.label(0, g_elem(x))).collect(),
            (0..=ns).map(|y| self.algebra.label(0, s_elem(y))).collect(),
        ];
        TwoSortedActionAlgebra {
            algebra: algebra.with_labels(labels).expect("sizes match"),
            group: None,
            faithful: None,
            zeros: Some((ng, ns)),
            provenance: serde_json::json!({ "construction": "automatic_two_sorted" }),
        }
    }
}

impl AutomaticAlgebra {
    /// Checks that `x·y` is `0` unless `x ∈ G` and `y ∈ S`, and lies in
    /// `S ⊎ {0}` otherwise.
    pub fn check_shape(&self) -> Result<()> {
        let (ng, ns, z) = (self.g_size, self.s_size, self.zero());
        for x in 0..=z {
            for y in 0..=z {
                let v = self.algebra.apply2(0, x, y);
                let active = x < ng && (ng..ng + ns).contains(&y);
                if (!active && v != z) || (active && v < ng) {
                    return Err(Error::InvalidAlgebra(format!("product {x}·{y} = {v} breaks the automatic shape")));
                }
            }
        }
        Ok(())
    }

    /// Exhaustive identity check over a reduced set of values. A variable
    /// that only occurs as a left factor ranges over `G` and `0`, one that
    /// only occurs as a right factor over `S` and `0`: every other value
    /// gives the same products as `0` there. A side `z·z` whose variable
    /// occurs nowhere else is the constant `0`. Exact once
    /// [`check_shape`](Self::check_shape) passes, which is checked first.
    pub fn holds(&self, id: &Identity, budget: &Budget) -> Result<Check> {
        let sig = self.algebra.signature();
        id.sort(sig)?;
        self.check_shape()?;
        let dot = sig.symbol_index(DOT).expect("automatic signature");
        let z = self.zero();
        let square_of = |t: &Term| match t {
            Term::App(s, a) if *s == dot => match (&a[0], &a[1]) {
                (Term::Var(u), Term::Var(v)) if u == v => Some(*u),
                _ => None,
            },
            _ => None,
        };
        let constant = |t: &Term, other: &Term| square_of(t).filter(|v| !other.vars().contains(v)).is_some();
        let sides: Vec<Option<&Term>> = vec![
            (!constant(&id.lhs, &id.rhs)).then_some(&id.lhs),
            (!constant(&id.rhs, &id.lhs)).then_some(&id.rhs),
        ];
        // bit 0: left factor, bit 1: right factor, bit 2: anywhere else
        let mut roles: std::collections::BTreeMap<Var, u8> = std::collections::BTreeMap::new();
        fn walk(t: &Term, dot: usize, pos: u8, roles: &mut std::collections::BTreeMap<Var, u8>) {
            match t {
                Term::Var(v) => *roles.entry(*v).or_default() |= pos,
                Term::App(s, a) => {
                    for (i, c) in a.iter().enumerate() {
                        let p = if *s == dot { 1 << i } else { 4 };
                        walk(c, dot, p, roles);
                    }
                }
            }
        }
        for t in sides.iter().flatten() {
            walk(t, dot, 4, &mut roles);
        }
        let (ng, ns) = (self.g_size, self.s_size);
        let vars: Vec<Var> = roles.keys().copied().collect();
        let domains: Vec<Vec<Elem>> = roles
            .values()
            .map(|&r| match r {
                1 => (0..ng).chain([z]).collect(),
                2 => (ng..ng + ns).chain([z]).collect(),
                _ => (0..=z).collect(),
            })
            .collect();
        let total = domains
            .iter()
            .try_fold(1u64, |acc, d| acc.checked_mul(d.len() as u64))
            .unwrap_or(u64::MAX);
        budget.check_assignments(total)?;
        let slot = |v: Var| vars.binary_search(&v).expect("collected");
        let code: Vec<Option<CompiledTerm>> = sides
            .iter()
            .map(|t| t.map(|t| CompiledTerm::compile(t, &slot)))
            .collect();
        let mut pick = vec![0usize; vars.len()];
        let mut vals: Vec<Elem> = domains.iter().map(|d| d[0]).collect();
        let mut stack = Vec::new();
        loop {
            let mut ev = code.iter().map(|c| c.as_ref().map_or(z, |c| c.eval(&self.algebra, &vals, &mut stack)));
            if ev.next() != ev.next() {
                return Ok(Check::Fails(Assignment(vars.iter().copied().zip(vals.iter().copied()).collect())));
            }
            let mut i = pick.len();
            loop {
                if i == 0 {
                    return Ok(Check::Holds);
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < domains[i].len() {
                    vals[i] = domains[i][pick[i]];
                    break;
                }
                pick[i] = 0;
                vals[i] = domains[i][0];
            }
        }
    }
}

/// Builds `Auto(G, S, σ)` from labels and the partial maps `σ_a`, each
/// given as `(point, image)` pairs.
pub fn build_automatic(
    g_labels: Vec<String>,
    s_labels: Vec<String>,
    sigma: &[Vec<(usize, usize)>],
) -> Result<AutomaticAlgebra> {
    let (ng, ns) = (g_labels.len(), s_labels.len());
    if ng == 0 || ns == 0 {
        return Err(Error::InvalidAlgebra("G and S must be nonempty".into()));
    }
    if sigma.len() != ng {
        return Err(Error::DomainViolation(format!("{} partial maps for {ng} elements", sigma.len())));
    }
    let z = ng + ns;
    let mut table = vec![z as u32; (z + 1) * (z + 1)];
    for (a, map) in sigma.iter().enumerate() {
        for &(s, t) in map {
            if s >= ns || t >= ns {
                return Err(Error::DomainViolation(format!(
                    "σ_{} maps {s} to {t} outside S of size {ns}",
                    g_labels[a]
                )));
            }
            let cell = &mut table[a * (z + 1) + ng + s];
            if *cell != z as u32 {
                return Err(Error::DomainViolation(format!("σ_{} defined twice at {s}", g_labels[a])));
            }
            *cell = (ng + t) as u32;
        }
    }
    let mut labels = g_labels;
    labels.extend(s_labels);
    labels.push("0".into());
    let algebra = FiniteAlgebra::new(Signature::automatic(), vec![z + 1], vec![table])?.with_labels(vec![labels])?;
    Ok(AutomaticAlgebra {
        algebra,
        g_size: ng,
        s_size: ns,
    })
}

/// `Auto(G, S, α)` with every `σ_a` the total map `s ↦ a·s`.
pub fn automatic_from_action(act: &GroupAction) -> Result<AutomaticAlgebra> {
    let g = act.group();
    let ns = act.set_size();
    let sigma: Vec<Vec<(usize, usize)>> = (0..g.size())
        .map(|a| (0..ns).map(|s| (s, act.act(a, s))).collect())
        .collect();
    build_automatic(
        (0..g.size()).map(|a| g.label(a)).collect(),
        (0..ns).map(|s| act.point_label(s)).collect(),
        &sigma,
    )
}

/// The automatic algebra on `B1 ∪ B2` (zeros identified) of a
/// zero-adjoined τ-algebra: `x·y = s(x, y)` for `x ∈ B1`, `y ∈ B2`, else 0.
pub fn automatic_from_zero_adjoined(b0: &TwoSortedActionAlgebra) -> Result<AutomaticAlgebra> {
    let (z1, z2) = crate::terms::check_zero_adjoined(&b0.algebra, b0.zeros)?;
    let (n1, n2) = b0.sizes();
    let g: Vec<Elem> = (0..n1).filter(|&x| x != z1).collect();
    let s: Vec<Elem> = (0..n2).filter(|&y| y != z2).collect();
    let mut s_index = vec![usize::MAX; n2];
    for (i, &y) in s.iter().enumerate() {
        s_index[y] = i;
    }
    let sigma: Vec<Vec<(usize, usize)>> = g
        .iter()
        .map(|&x| {
            s.iter()
                .enumerate()
                .filter_map(|(i, &y)| {
                    let v = b0.act(x, y);
                    (v != z2).then(|| (i, s_index[v]))
                })
                .collect()
        })
        .collect();
    build_automatic(
        g.iter().map(|&x| b0.algebra.label(0, x)).collect(),
        s.iter().map(|&y| b0.algebra.label(1, y)).collect(),
        &sigma,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::holds;
    use crate::constructions::{adjoin_zero, build_action_algebra};
    use crate::groups::FiniteGroup;
    use crate::terms::{delta_identities, parse_identity};

    #[test]
    fn reduced_check_agrees_with_exhaustive() {
        let (_, act) = FiniteGroup::symmetric(3);
        let full = automatic_from_action(&act).unwrap();
        let partial = build_automatic(
            vec!["a".into(), "b".into()],
            vec!["p".into(), "q".into(), "r".into()],
            &[vec![(0, 1), (1, 2)], vec![(2, 2)]],
        )
        .unwrap();
        let sig = Signature::automatic();
        let mut ids = delta_identities(3);
        for text in [
            "x0 . (x1 . y0) =~ x1 . (x0 . y0)",
            "x0 . (x0 . y0) =~ y0 . y0",
            "x0 . (x0 . y0) =~ x0 . y0",
            "x0 . (x0 . (x0 . y0)) =~ x0 . y0",
            "(x0 . x1) . x2 =~ x1 . x2",
            "x0 =~ x0 . x0",
            "x0 . x1 =~ x1 . x0",
        ] {
            ids.push(parse_identity(text, &sig).unwrap());
        }
        let b = Budget::default();
        for alg in [&full, &partial] {
            for id in &ids {
                let fast = alg.holds(id, &b).unwrap().is_holds();
                let slow = holds(&alg.algebra, id).unwrap().is_holds();
                assert_eq!(fast, slow, "{id:?}");
            }
        }
    }

    #[test]
    fn s3_automatic() {
        let (_, act) = FiniteGroup::symmetric(3);
        let a = automatic_from_action(&act).unwrap();
        assert_eq!(a.size(), 10);
        for id in delta_identities(4) {
            assert!(holds(&a.algebra, &id).unwrap().is_holds());
        }
        let sig = Signature::automatic();
        let id = parse_identity("(x0 . x1) . x2 =~ x3 . x3", &sig).unwrap();
        assert!(holds(&a.algebra, &id).unwrap().is_holds());
        let two = a.two_sorted();
        assert_eq!(two.sizes(), (7, 4));
        let (g, act) = FiniteGroup::symmetric(3);
        let z = adjoin_zero(&build_action_algebra(&g, &act).unwrap().algebra).unwrap();
        assert_eq!(two.algebra.tables(), z.algebra.tables());
    }

    #[test]
    fn partial_maps() {
        let a = build_automatic(
            vec!["a".into(), "b".into()],
            vec!["p".into(), "q".into()],
            &[vec![(0, 1)], vec![]],
        )
        .unwrap();
        let z = a.zero();
        assert_eq!(a.algebra.apply2(0, 0, 2), 3);
        assert_eq!(a.algebra.apply2(0, 0, 3), z);
        assert!((0..5).all(|y| a.algebra.apply2(0, 1, y) == z));
        assert!(matches!(
            build_automatic(vec!["a".into()], vec!["p".into()], &[vec![(1, 0)]]),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn zero_adjoined_round_trip() {
        let (g, act) = FiniteGroup::symmetric(3);
        let z = adjoin_zero(&build_action_algebra(&g, &act).unwrap().algebra).unwrap();
        let c = automatic_from_zero_adjoined(&z).unwrap();
        assert_eq!(c.size(), 10);
        assert_eq!(c.algebra, automatic_from_action(&act).unwrap().algebra);
    }
}
