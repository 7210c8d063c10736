use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, Signature};
use crate::error::{Error, Result};

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    size: usize,
    mult: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Builds a group from a row-major table, checking the group laws.
    ///
    /// Associativity is checked with Light's test over a generating set:
    /// elements `a` with `(xa)y = x(ay)` for all `x, y` form a submagma.
    pub fn from_table(size: usize, mult: Vec<u32>) -> Result<FiniteGroup> {
        if size == 0 || mult.len() != size * size || mult.iter().any(|&v| v as usize >= size) {
            return Err(Error::InvalidGroup("table has wrong shape".into()));
        }
        let m = |a: usize, b: usize| mult[a * size + b] as usize;
        let identity = (0..size)
            .find(|&e| (0..size).all(|x| m(e, x) == x && m(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let mut inverse = vec![0u32; size];
        for (x, inv) in inverse.iter_mut().enumerate() {
            let y = (0..size)
                .find(|&y| m(x, y) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("{x} has no right inverse")))?;
            if m(y, x) != identity {
                return Err(Error::InvalidGroup(format!("{x} has no two-sided inverse")));
            }
            *inv = y as u32;
        }
        let g = FiniteGroup {
            size,
            mult,
            identity,
            inverse,
            labels: None,
        };
        for a in g.greedy_generators() {
            for x in 0..size {
                let xa = g.mul(x, a);
                for y in 0..size {
                    if g.mul(xa, y) != g.mul(x, g.mul(a, y)) {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({x}, {a}, {y})"
                        )));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Trusted constructor for tables known to be groups.
    pub(crate) fn from_parts(size: usize, mult: Vec<u32>, identity: usize) -> FiniteGroup {
        let mut inverse = vec![0u32; size];
        for x in 0..size {
            for y in 0..size {
                if mult[x * size + y] as usize == identity {
                    inverse[x] = y as u32;
                    break;
                }
            }
        }
        FiniteGroup {
            size,
            mult,
            identity,
            inverse,
            labels: None,
        }
    }

    /// The permutation group generated by `gens` (images of `0..degree`),
    /// with its natural action. Elements are numbered breadth first from the
    /// identity and labelled in 1-based cycle notation. Products compose
    /// right to left: `(gh)(i) = g(h(i))`.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<(FiniteGroup, GroupAction)> {
        for g in gens {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&i| i >= degree || std::mem::replace(&mut seen[i], true)) {
                return Err(Error::InvalidGroup(format!("{g:?} is not a permutation of degree {degree}")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut mult = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let p: Vec<usize> = elems[b].iter().map(|&x| elems[a][x]).collect();
                mult[a * n + b] = index[&p] as u32;
            }
        }
        let mut g = FiniteGroup::from_parts(n, mult, 0);
        g.labels = Some(elems.iter().map(|p| cycle_notation(p)).collect());
        let g = Arc::new(g);
        let act = elems.iter().flat_map(|p| p.iter().map(|&x| x as u32)).collect();
        let action = GroupAction::new(g.clone(), degree, act)?
            .with_point_labels((1..=degree).map(|i| i.to_string()).collect());
        Ok((Arc::try_unwrap(g).unwrap_or_else(|a| (*a).clone()), action))
    }

    pub fn symmetric(n: usize) -> (FiniteGroup, GroupAction) {
        let mut gens = Vec::new();
        if n > 1 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        FiniteGroup::from_permutations(n, &gens).expect("valid generators")
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let mut g = FiniteGroup::from_parts(
            n,
            (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect(),
            0,
        );
        g.labels = Some((0..n).map(|i| i.to_string()).collect());
        g
    }

    /// Dihedral group of order `2n` acting on the `n`-gon.
    pub fn dihedral(n: usize) -> (FiniteGroup, GroupAction) {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        FiniteGroup::from_permutations(n, &[rot, refl]).expect("valid generators")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (na, nb) = (a.size, b.size);
        let n = na * nb;
        let mut mult = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let p = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
                mult[x * n + y] = p as u32;
            }
        }
        let mut g = FiniteGroup::from_parts(n, mult, a.identity * nb + b.identity);
        g.labels = Some(
            (0..n)
                .map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb)))
                .collect(),
        );
        g
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<FiniteGroup> {
        if labels.len() != self.size {
            return Err(Error::InvalidGroup("wrong number of labels".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[u32] {
        &self.mult
    }

    pub fn inverses(&self) -> &[u32] {
        &self.inverse
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.size + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let (mut r, mut base, mut k) = (self.identity, a, k);
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        r
    }

    pub fn order_of(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        (0..self.size).fold(1, |acc, a| lcm(acc, self.order_of(a)))
    }

    /// Greedy generating set: elements in index order not yet generated.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut have = vec![false; self.size];
        have[self.identity] = true;
        for a in 0..self.size {
            if !have[a] {
                gens.push(a);
                for x in super::subgroup_generated(self, &gens) {
                    have[x] = true;
                }
            }
        }
        gens
    }

    /// The subgroup on `elems` as a group of its own, with the inclusion.
    pub fn subgroup(&self, elems: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let mut incl = elems.to_vec();
        incl.sort_unstable();
        incl.dedup();
        let mut back = vec![u32::MAX; self.size];
        for (i, &e) in incl.iter().enumerate() {
            back[e] = i as u32;
        }
        let n = incl.len();
        let mut mult = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let p = back[self.mul(incl[i], incl[j])];
                if p == u32::MAX {
                    return Err(Error::InvalidGroup("subset is not closed".into()));
                }
                mult[i * n + j] = p;
            }
        }
        let id = back[self.identity];
        if id == u32::MAX {
            return Err(Error::InvalidGroup("subset misses the identity".into()));
        }
        let mut g = FiniteGroup::from_parts(n, mult, id as usize);
        if let Some(l) = &self.labels {
            g.labels = Some(incl.iter().map(|&e| l[e].clone()).collect());
        }
        Ok((g, incl))
    }

    /// The group as a single-sorted algebra with one binary symbol `*`.
    pub fn to_algebra(&self) -> FiniteAlgebra {
        let sig = Signature::single_sorted(&[("*", 2)]);
        let a = FiniteAlgebra::from_fn(sig, vec![self.size], |_, x| self.mul(x[0], x[1]))
        .expect("group tables are valid");
        match &self.labels {
            Some(l) => a.with_labels(vec![l.clone()]).expect("sizes match"),
            None => a,
        }
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// 1-based cycle notation, `e` for the identity.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(i + 1).to_string());
            first = false;
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// A left action `G × S → S` with table `act[g·|S| + s]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    group: Arc<FiniteGroup>,
    set_size: usize,
    act: Vec<u32>,
    point_labels: Option<Vec<String>>,
}

impl GroupAction {
    /// Checks `act(e, s) = s` and `act(gh, s) = act(g, act(h, s))`.
    pub fn new(group: Arc<FiniteGroup>, set_size: usize, act: Vec<u32>) -> Result<GroupAction> {
        let n = group.size();
        if set_size == 0 || act.len() != n * set_size || act.iter().any(|&v| v as usize >= set_size) {
            return Err(Error::ActionMismatch("table has wrong shape".into()));
        }
        let a = |g: usize, s: usize| act[g * set_size + s] as usize;
        for s in 0..set_size {
            if a(group.identity(), s) != s {
                return Err(Error::ActionMismatch(format!("identity moves point {s}")));
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = group.mul(g, h);
                for s in 0..set_size {
                    if a(gh, s) != a(g, a(h, s)) {
                        return Err(Error::ActionMismatch(format!(
                            "act({gh}, {s}) differs from act({g}, act({h}, {s}))"
                        )));
                    }
                }
            }
        }
        Ok(GroupAction {
            group,
            set_size,
            act,
            point_labels: None,
        })
    }

    /// Left multiplication of `G` on itself.
    pub fn regular(group: Arc<FiniteGroup>) -> GroupAction {
        let n = group.size();
        let act = (0..n * n).map(|i| group.mul(i / n, i % n) as u32).collect();
        let labels = (0..n).map(|x| group.label(x)).collect();
        GroupAction {
            group,
            set_size: n,
            act,
            point_labels: Some(labels),
        }
    }

    /// Every element fixes every point.
    pub fn trivial(group: Arc<FiniteGroup>, set_size: usize) -> GroupAction {
        let n = group.size();
        let act = (0..n * set_size).map(|i| (i % set_size) as u32).collect();
        GroupAction {
            group,
            set_size,
            act,
            point_labels: None,
        }
    }

    pub fn with_point_labels(mut self, labels: Vec<String>) -> GroupAction {
        assert_eq!(labels.len(), self.set_size, "one label per point");
        self.point_labels = Some(labels);
        self
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn shared_group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn table(&self) -> &[u32] {
        &self.act
    }

    #[inline]
    pub fn act(&self, g: usize, s: usize) -> usize {
        self.act[g * self.set_size + s] as usize
    }

    pub fn point_label(&self, s: usize) -> String {
        match &self.point_labels {
            Some(l) => l[s].clone(),
            None => s.to_string(),
        }
    }

    pub fn point_labels(&self) -> Option<&[String]> {
        self.point_labels.as_deref()
    }

    /// Only the identity fixes every point.
    pub fn is_faithful(&self) -> bool {
        (0..self.group.size())
            .filter(|&g| g != self.group.identity())
            .all(|g| (0..self.set_size).any(|s| self.act(g, s) != s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_basics() {
        let (g, act) = FiniteGroup::symmetric(3);
        assert_eq!(g.size(), 6);
        assert_eq!(g.label(0), "e");
        assert!(!g.is_abelian());
        assert_eq!(g.exponent(), 6);
        assert!(act.is_faithful());
        let t = (0..6).find(|&x| g.label(x) == "(1 2)").unwrap();
        assert_eq!(act.act(t, 0), 1);
        assert_eq!(g.order_of(t), 2);
        assert!(FiniteGroup::from_table(6, g.table().to_vec()).is_ok());
    }

    #[test]
    fn composition_is_right_to_left() {
        let (g, act) = FiniteGroup::symmetric(3);
        let find = |l: &str| (0..6).find(|&x| g.label(x) == l).unwrap();
        let (a, b) = (find("(1 2)"), find("(1 3)"));
        // (1 2)(1 3) sends 1 to 3 then 3 to 3
        let ab = g.mul(a, b);
        assert_eq!(act.act(ab, 0), 2);
        assert_eq!(g.label(ab), "(1 3 2)");
    }

    #[test]
    fn rejects_non_groups() {
        assert!(FiniteGroup::from_table(2, vec![0, 0, 0, 0]).is_err());
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1]).is_err());
        // a loop that is not associative
        let t = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(FiniteGroup::from_table(5, t).is_err());
    }

    #[test]
    fn actions() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        assert!(GroupAction::regular(g.clone()).is_faithful());
        assert!(!GroupAction::trivial(g.clone(), 3).is_faithful());
        let bad = vec![1u32, 0, 1, 0, 1, 0, 1, 0];
        assert!(GroupAction::new(g, 2, bad).is_err());
        let (d4, act) = FiniteGroup::dihedral(4);
        assert_eq!(d4.size(), 8);
        assert!(act.is_faithful());
    }

    #[test]
    fn products_and_subgroups() {
        let c2 = FiniteGroup::cyclic(2);
        let v4 = FiniteGroup::direct_product(&c2, &c2);
        assert_eq!(v4.size(), 4);
        assert!(v4.is_abelian());
        assert_eq!(v4.exponent(), 2);
        let (g, _) = FiniteGroup::symmetric(3);
        let a3 = crate::groups::subgroup_generated(&g, &[g.mul(0, 1).max(1)]);
        let (h, incl) = g.subgroup(&a3).unwrap();
        assert_eq!(h.size(), incl.len());
    }
}
