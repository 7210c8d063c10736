use super::FiniteGroup;
use crate::error::{Error, Result};

/// Left-normed commutator `[[x1, x2], ..., xk]` with `[x, y] = x⁻¹y⁻¹xy`.
pub fn left_commutator(g: &FiniteGroup, xs: &[usize]) -> usize {
    assert!(xs.len() >= 2, "a commutator needs at least two entries");
    xs[1..].iter().fold(xs[0], |acc, &y| {
        let t = g.mul(g.inv(acc), g.inv(y));
        g.mul(g.mul(t, acc), y)
    })
}

/// Least subgroup containing `gens`, sorted ascending.
pub fn subgroup_generated(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut have = vec![false; g.size()];
    let mut elems = vec![g.identity()];
    have[g.identity()] = true;
    let mut i = 0;
    while i < elems.len() {
        let x = elems[i];
        for &s in gens {
            let y = g.mul(x, s);
            if !have[y] {
                have[y] = true;
                elems.push(y);
            }
        }
        i += 1;
    }
    elems.sort_unstable();
    elems
}

/// Result of the lower central series computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nilpotency {
    /// `γ1 ⊇ γ2 ⊇ ...`, each sorted, ending at the first repeated term.
    pub series: Vec<Vec<usize>>,
    /// Nilpotency class, `None` when the series stalls above the identity.
    pub class: Option<usize>,
}

impl Nilpotency {
    pub fn is_nilpotent(&self) -> bool {
        self.class.is_some()
    }
}

/// Lower central series `γ1 = G`, `γ(i+1) = [γi, G]`.
pub fn nilpotency(g: &FiniteGroup) -> Nilpotency {
    let all: Vec<usize> = (0..g.size()).collect();
    let gens = g.greedy_generators();
    let mut series = vec![all];
    loop {
        let last = series.last().unwrap();
        if last.len() == 1 {
            // the trivial group has class 0 by convention, abelian groups class 1
            let class = (series.len() - 1).max(1);
            let class = if g.size() == 1 { 0 } else { class };
            return Nilpotency {
                series,
                class: Some(class),
            };
        }
        // [γi, G] is the normal closure of commutators of γi with generators of G
        let mut comms = Vec::new();
        for &x in last {
            for &y in &gens {
                let c = left_commutator(g, &[x, y]);
                if c != g.identity() {
                    comms.push(c);
                }
            }
        }
        comms.sort_unstable();
        comms.dedup();
        let next = normal_closure(g, &comms, &gens);
        if next.len() == last.len() {
            return Nilpotency {
                series,
                class: None,
            };
        }
        series.push(next);
    }
}

/// Smallest normal subgroup containing `xs`.
pub fn normal_closure(g: &FiniteGroup, xs: &[usize], gens: &[usize]) -> Vec<usize> {
    let mut set = subgroup_generated(g, xs);
    loop {
        let mut extra = Vec::new();
        let mut member = vec![false; g.size()];
        for &x in &set {
            member[x] = true;
        }
        for &x in &set {
            for &s in gens {
                let c = g.mul(g.mul(g.inv(s), x), s);
                if !member[c] {
                    member[c] = true;
                    extra.push(c);
                }
            }
        }
        if extra.is_empty() {
            return set;
        }
        let mut all = set.clone();
        all.extend(extra);
        set = subgroup_generated(g, &all);
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Outcome of the `A_p A_q` membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApAqOutcome {
    pub member: bool,
    /// The verbal subgroup generated by commutators and `q`-th powers.
    pub n: Vec<usize>,
    /// On failure: a noncommuting pair in `N`, or `(x, x)` for an element
    /// whose order does not divide `p`.
    pub violation: Option<(usize, usize)>,
}

/// Whether `H` is an extension of an abelian group of exponent dividing `p`
/// by one of exponent dividing `q`. With `N` the subgroup generated by all
/// commutators and `q`-th powers, `H/N` is abelian of exponent dividing `q`
/// and `N` is contained in every normal subgroup with such a quotient, so
/// it suffices to test `N`.
pub fn in_ap_aq(h: &FiniteGroup, p: u64, q: u64) -> Result<ApAqOutcome> {
    for r in [p, q] {
        if !is_prime(r) {
            return Err(Error::NotPrime(r));
        }
    }
    let mut words = Vec::new();
    for x in 0..h.size() {
        words.push(h.pow(x, q));
        for y in 0..x {
            words.push(left_commutator(h, &[x, y]));
        }
    }
    words.sort_unstable();
    words.dedup();
    let n = subgroup_generated(h, &words);
    for &x in &n {
        if h.pow(x, p) != h.identity() {
            return Ok(ApAqOutcome {
                member: false,
                n,
                violation: Some((x, x)),
            });
        }
        for &y in &n {
            if h.mul(x, y) != h.mul(y, x) {
                return Ok(ApAqOutcome {
                    member: false,
                    n,
                    violation: Some((x, y)),
                });
            }
        }
    }
    Ok(ApAqOutcome {
        member: true,
        n,
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(g: &FiniteGroup, l: &str) -> usize {
        (0..g.size()).find(|&x| g.label(x) == l).unwrap()
    }

    #[test]
    fn commutators_in_s3() {
        let (g, _) = FiniteGroup::symmetric(3);
        let (a, b) = (find(&g, "(1 2)"), find(&g, "(1 3)"));
        assert_eq!(left_commutator(&g, &[a, a]), g.identity());
        // direct computation: a⁻¹b⁻¹ab with right-to-left composition
        let direct = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
        assert_eq!(left_commutator(&g, &[a, b]), direct);
        assert_eq!(g.label(direct), "(1 2 3)");
        let c = FiniteGroup::cyclic(5);
        assert!((0..5).all(|x| (0..5).all(|y| left_commutator(&c, &[x, y, x]) == 0)));
    }

    #[test]
    fn series() {
        assert_eq!(nilpotency(&FiniteGroup::cyclic(6)).class, Some(1));
        assert_eq!(nilpotency(&FiniteGroup::cyclic(1)).class, Some(0));
        let (s3, _) = FiniteGroup::symmetric(3);
        let nil = nilpotency(&s3);
        assert_eq!(nil.class, None);
        assert_eq!(nil.series.last().unwrap().len(), 3);
        let (d4, _) = FiniteGroup::dihedral(4);
        assert_eq!(nilpotency(&d4).class, Some(2));
        let (d8, _) = FiniteGroup::dihedral(8);
        assert_eq!(nilpotency(&d8).class, Some(3));
    }

    #[test]
    fn generated_subgroups() {
        let (g, _) = FiniteGroup::symmetric(3);
        assert_eq!(subgroup_generated(&g, &[g.identity()]), vec![g.identity()]);
        let r = find(&g, "(1 2 3)");
        assert_eq!(subgroup_generated(&g, &[r]).len(), 3);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(subgroup_generated(&g, &all), all);
    }

    #[test]
    fn ap_aq() {
        let (g, _) = FiniteGroup::symmetric(3);
        let out = in_ap_aq(&g, 3, 2).unwrap();
        assert!(out.member);
        assert_eq!(out.n.len(), 3);
        assert!(!in_ap_aq(&g, 2, 2).unwrap().member);
        let c2 = FiniteGroup::cyclic(2);
        let v = FiniteGroup::direct_product(&c2, &c2);
        let out = in_ap_aq(&v, 5, 2).unwrap();
        assert!(out.member);
        assert_eq!(out.n, vec![v.identity()]);
        assert_eq!(in_ap_aq(&v, 4, 2), Err(Error::NotPrime(4)));
    }
}
