use std::collections::HashMap;

use super::coset::CosetTable;
use super::presentation::{eval_word, GroupPresentation, GvPresentation};
use super::series::{in_ap_aq, subgroup_generated};
use super::FiniteGroup;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// The homomorphism from the group enumerated in `table` to `target` sending
/// generator `i` to `images[i]`, provided every relator maps to the identity.
pub fn hom_from_generators(
    table: &CosetTable,
    pres: &GroupPresentation,
    target: &FiniteGroup,
    images: &[usize],
) -> Result<Vec<usize>> {
    if images.len() != pres.generator_count() {
        return Err(Error::NotExtendable(format!(
            "{} images for {} generators",
            images.len(),
            pres.generator_count()
        )));
    }
    if let Some(i) = pres.relators_hold(target, images) {
        return Err(Error::NotExtendable(format!(
            "relator {} is not sent to the identity",
            pres.format_word(&pres.relators()[i])
        )));
    }
    Ok((0..table.coset_count())
        .map(|c| eval_word(target, images, table.representative(c)))
        .collect())
}

fn is_automorphism(g: &FiniteGroup, map: &[usize]) -> bool {
    let n = g.size();
    let mut seen = vec![false; n];
    for &x in map {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    (0..n).all(|a| (0..n).all(|b| map[g.mul(a, b)] == g.mul(map[a], map[b])))
}

/// Extends a permutation of the presentation generators to an automorphism
/// of the enumerated group `g`, verified on the full table.
pub fn extend_generator_map(
    g: &FiniteGroup,
    table: &CosetTable,
    pres: &GroupPresentation,
    genmap: &[usize],
) -> Result<Vec<usize>> {
    let k = pres.generator_count();
    let mut seen = vec![false; k];
    if genmap.len() != k || genmap.iter().any(|&i| i >= k || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::NotExtendable("generator map is not a permutation".into()));
    }
    let images: Vec<usize> = genmap.iter().map(|&i| table.image(0, 2 * i)).collect();
    let map = hom_from_generators(table, pres, g, &images)?;
    if !is_automorphism(g, &map) {
        return Err(Error::NotExtendable("induced map is not an automorphism".into()));
    }
    Ok(map)
}

/// `N ⋊ K` with `(n1, k1)(n2, k2) = (n1 · φ(k1)(n2), k1 k2)`; element
/// `(n, k)` has index `n·|K| + k`. `phi[k]` is an element map of `N`.
pub fn semidirect_product(n: &FiniteGroup, k: &FiniteGroup, phi: &[Vec<usize>]) -> Result<FiniteGroup> {
    let (sn, sk) = (n.size(), k.size());
    if phi.len() != sk {
        return Err(Error::NotAHomomorphism(format!("{} maps for {} elements", phi.len(), sk)));
    }
    for (x, m) in phi.iter().enumerate() {
        if m.len() != sn || !is_automorphism(n, m) {
            return Err(Error::NotAHomomorphism(format!(
                "image of {} is not an automorphism",
                k.label(x)
            )));
        }
    }
    if phi[k.identity()].iter().enumerate().any(|(i, &y)| i != y) {
        return Err(Error::NotAHomomorphism("identity does not act trivially".into()));
    }
    for a in 0..sk {
        for b in 0..sk {
            let ab = &phi[k.mul(a, b)];
            if (0..sn).any(|x| ab[x] != phi[a][phi[b][x]]) {
                return Err(Error::NotAHomomorphism(format!(
                    "φ({}·{}) differs from φ({})∘φ({})",
                    k.label(a),
                    k.label(b),
                    k.label(a),
                    k.label(b)
                )));
            }
        }
    }
    let size = sn * sk;
    let mut mult = vec![0u32; size * size];
    for x in 0..size {
        let (n1, k1) = (x / sk, x % sk);
        for y in 0..size {
            let (n2, k2) = (y / sk, y % sk);
            mult[x * size + y] = (n.mul(n1, phi[k1][n2]) * sk + k.mul(k1, k2)) as u32;
        }
    }
    FiniteGroup::from_parts(size, mult, n.identity() * sk + k.identity()).with_labels(
        (0..size)
            .map(|x| format!("({},{})", n.label(x / sk), k.label(x % sk)))
            .collect(),
    )
}

/// Check of one size-`n` subset of the witness set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetReport {
    /// Position in `X` of the omitted element.
    pub omitted: usize,
    pub order: usize,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnpqReport {
    pub generates: bool,
    pub subsets: Vec<SubsetReport>,
}

impl FnpqReport {
    pub fn holds(&self) -> bool {
        self.generates && self.subsets.iter().all(|s| s.member)
    }
}

/// Checks that `X` generates `P` while every subset of size `n` generates a
/// group in `A_p A_q`. Smaller subsets are covered since `A_p A_q` is closed
/// under subgroups.
pub fn check_fnpq_witness(p_group: &FiniteGroup, x: &[usize], n: usize, p: u64, q: u64) -> Result<FnpqReport> {
    if x.len() != n + 1 {
        return Err(Error::WitnessCheckFailed(format!(
            "{} witness elements, expected {}",
            x.len(),
            n + 1
        )));
    }
    let generates = subgroup_generated(p_group, x).len() == p_group.size();
    let mut subsets = Vec::new();
    for omitted in 0..x.len() {
        let y: Vec<usize> = (0..x.len()).filter(|&i| i != omitted).map(|i| x[i]).collect();
        let elems = subgroup_generated(p_group, &y);
        let (sub, _) = p_group.subgroup(&elems)?;
        subsets.push(SubsetReport {
            omitted,
            order: sub.size(),
            member: in_ap_aq(&sub, p, q)?.member,
        });
    }
    Ok(FnpqReport { generates, subsets })
}

/// Evidence that `H` is a quotient of a subgroup `S = ⟨tuple⟩` of `G^m`:
/// the assignment `tuple[i] ↦ images[i]` extends to a surjection `S → H`
/// with the listed kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupVarietyCertificate {
    pub m: usize,
    pub tuple: Vec<Vec<usize>>,
    pub images: Vec<usize>,
    pub subgroup_order: usize,
    pub kernel: Vec<Vec<usize>>,
}

/// Closes the pairs `(tuple[i], images[i])` in `G^m × H`. Returns `None`
/// when the projection to `G^m` is not injective on the closure, that is
/// when the assignment is not well defined.
fn close_graph(
    h: &FiniteGroup,
    g: &FiniteGroup,
    tuple: &[Vec<usize>],
    images: &[usize],
) -> Option<Vec<(Vec<usize>, usize)>> {
    let m = tuple.first().map_or(0, |t| t.len());
    let mul = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().zip(b).map(|(&x, &y)| g.mul(x, y)).collect() };
    let id = vec![g.identity(); m];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id.clone(), h.identity())]);
    let mut elems = vec![(id, h.identity())];
    let mut i = 0;
    while i < elems.len() {
        for (t, &img) in tuple.iter().zip(images) {
            let x = mul(&elems[i].0, t);
            let y = h.mul(elems[i].1, img);
            match index.get(&x) {
                Some(&z) if z != y => return None,
                Some(_) => {}
                None => {
                    index.insert(x.clone(), y);
                    elems.push((x, y));
                }
            }
        }
        i += 1;
    }
    Some(elems)
}

/// Re-derives the closure and checks well definedness, surjectivity and the
/// kernel.
pub fn verify_group_certificate(h: &FiniteGroup, g: &FiniteGroup, cert: &GroupVarietyCertificate) -> Result<()> {
    let reject = |m: &str| Err(Error::CertificateRejected(m.into()));
    if cert.tuple.len() != cert.images.len() || cert.tuple.iter().any(|t| t.len() != cert.m) {
        return reject("tuple shape does not match");
    }
    let Some(graph) = close_graph(h, g, &cert.tuple, &cert.images) else {
        return reject("assignment is not well defined");
    };
    let mut hit = vec![false; h.size()];
    for (_, y) in &graph {
        hit[*y] = true;
    }
    if hit.contains(&false) {
        return reject("map is not onto");
    }
    let mut kernel: Vec<Vec<usize>> = graph
        .iter()
        .filter(|(_, y)| *y == h.identity())
        .map(|(x, _)| x.clone())
        .collect();
    kernel.sort();
    if graph.len() != cert.subgroup_order || kernel != cert.kernel {
        return reject("subgroup or kernel differs");
    }
    Ok(())
}

/// Searches for `H` as a quotient of a subgroup of `G^m`, `m = 1..=m_max`.
/// Generators of `H` are taken greedily; the preimage of `h_i` must have
/// order divisible by that of `h_i`. `Ok(None)` means nothing was found
/// within the bounds.
pub fn group_in_variety(
    h: &FiniteGroup,
    g: &FiniteGroup,
    m_max: usize,
    budget: &Budget,
) -> Result<Option<GroupVarietyCertificate>> {
    let gens = h.greedy_generators();
    let mut tries: u64 = 0;
    for m in 1..=m_max {
        let space = (g.size() as u128).pow(m as u32);
        if space > budget.max_elements as u128 {
            return Err(Error::BudgetExceeded {
                what: "power size",
                limit: budget.max_elements as u64,
            });
        }
        let space = space as usize;
        let decode = |mut x: usize| -> Vec<usize> {
            let mut v = vec![0; m];
            for i in (0..m).rev() {
                v[i] = x % g.size();
                x /= g.size();
            }
            v
        };
        let order = |v: &[usize]| v.iter().fold(1, |acc, &x| super::lcm(acc, g.order_of(x)));
        let orders: Vec<usize> = (0..space).map(|x| order(&decode(x))).collect();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&hg| {
                let o = h.order_of(hg);
                (0..space).filter(|&x| orders[x] % o == 0).collect()
            })
            .collect();
        if candidates.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut pick = vec![0usize; gens.len()];
        'search: loop {
            tries += 1;
            budget.check_assignments(tries)?;
            let tuple: Vec<Vec<usize>> = pick
                .iter()
                .zip(&candidates)
                .map(|(&i, c)| decode(c[i]))
                .collect();
            if let Some(graph) = close_graph(h, g, &tuple, &gens) {
                let mut kernel: Vec<Vec<usize>> = graph
                    .iter()
                    .filter(|(_, y)| *y == h.identity())
                    .map(|(x, _)| x.clone())
                    .collect();
                kernel.sort();
                return Ok(Some(GroupVarietyCertificate {
                    m,
                    tuple,
                    images: gens,
                    subgroup_order: graph.len(),
                    kernel,
                }));
            }
            let mut i = pick.len();
            loop {
                if i == 0 {
                    break 'search;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < candidates[i].len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    }
    Ok(None)
}

/// A retraction of `G_{V,p,c}` onto `H_{p,c}`: `retraction ∘ section = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Retraction {
    /// Vectors `v, w` whose generators receive `a1, a2`.
    pub pair: (usize, usize),
    /// Element map `H → G`.
    pub section: Vec<usize>,
    /// Element map `G → H`.
    pub retraction: Vec<usize>,
}

/// Searches for a retraction of the group enumerated from `gv` onto the
/// group enumerated from `hp`. The generators `[0]` and `[w]`, with `w` the
/// all-ones vector, go to `a1, a2`; images of the other generators are
/// searched in ascending order.
#[allow(clippy::too_many_arguments)]
pub fn find_retraction(
    gv: &GvPresentation,
    g: &FiniteGroup,
    g_table: &CosetTable,
    hp: &GroupPresentation,
    h: &FiniteGroup,
    h_table: &CosetTable,
    budget: &Budget,
) -> Result<Option<Retraction>> {
    if hp.generator_count() != 2 {
        return Err(Error::InvalidGroup("expected a two-generator presentation".into()));
    }
    let space = gv.space;
    let v = 0;
    let w = space.index(&vec![1; space.n]);
    let gen = |u: usize| g_table.image(0, 2 * u);
    let section = match hom_from_generators(h_table, hp, g, &[gen(v), gen(w)]) {
        Ok(s) => s,
        Err(Error::NotExtendable(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let (a1, a2) = (h_table.image(0, 0), h_table.image(0, 2));
    let rest: Vec<usize> = (0..space.size()).filter(|&u| u != v && u != w).collect();
    let mut pick = vec![0usize; rest.len()];
    let mut tries = 0u64;
    loop {
        tries += 1;
        budget.check_assignments(tries)?;
        let mut images = vec![0; space.size()];
        images[v] = a1;
        images[w] = a2;
        for (&u, &x) in rest.iter().zip(&pick) {
            images[u] = x;
        }
        if let Ok(r) = hom_from_generators(g_table, &gv.presentation, h, &images) {
            if (0..h.size()).all(|x| r[section[x]] == x) {
                return Ok(Some(Retraction {
                    pair: (v, w),
                    section,
                    retraction: r,
                }));
            }
        }
        let mut i = pick.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < h.size() {
                break;
            }
            pick[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{presentation_gvpc, presentation_hpc, todd_coxeter, VectorSpaceFq};
    use super::*;
    use crate::algebra::find_isomorphism;

    #[test]
    fn c3_by_c2_is_s3() {
        let c3 = FiniteGroup::cyclic(3);
        let c2 = FiniteGroup::cyclic(2);
        let phi = vec![vec![0, 1, 2], vec![0, 2, 1]];
        let g = semidirect_product(&c3, &c2, &phi).unwrap();
        assert_eq!(g.size(), 6);
        let (s3, _) = FiniteGroup::symmetric(3);
        assert!(find_isomorphism(&g.to_algebra(), &s3.to_algebra()).unwrap().is_some());
        let bad = vec![vec![0, 1, 2], vec![0, 1, 1]];
        assert!(semidirect_product(&c3, &c2, &bad).is_err());
        let trivial = vec![vec![0, 1, 2]; 2];
        assert!(semidirect_product(&c3, &c2, &trivial).unwrap().is_abelian());
    }

    #[test]
    fn generator_maps() {
        let gv = presentation_gvpc(2, 2, 2, 2, &Budget::default()).unwrap();
        let pres = &gv.presentation;
        let (g, t) = todd_coxeter(pres, 1_000_000).unwrap();
        assert_eq!(g.size(), 64);
        let id = extend_generator_map(&g, &t, pres, &[0, 1, 2, 3]).unwrap();
        assert!(id.iter().enumerate().all(|(i, &x)| i == x));
        for x in 0..4 {
            let genmap: Vec<usize> = (0..4).map(|v| gv.space.add(v, x)).collect();
            assert!(extend_generator_map(&g, &t, pres, &genmap).is_ok());
        }
        // swapping 00 and 01 sends the commuting pair (00, 10) to (01, 10)
        assert!(matches!(
            extend_generator_map(&g, &t, pres, &[1, 0, 2, 3]),
            Err(Error::NotExtendable(_))
        ));
    }

    #[test]
    fn retract_of_gv() {
        let gv = presentation_gvpc(2, 2, 3, 2, &Budget::default()).unwrap();
        let (g, gt) = todd_coxeter(&gv.presentation, 1_000_000).unwrap();
        let hp = presentation_hpc(3, 2);
        let (h, ht) = todd_coxeter(&hp, 1_000_000).unwrap();
        assert_eq!(h.size(), 27);
        assert!(g.size() >= 27);
        let r = find_retraction(&gv, &g, &gt, &hp, &h, &ht, &Budget::default())
            .unwrap()
            .unwrap();
        assert!((0..h.size()).all(|x| r.retraction[r.section[x]] == x));
    }

    #[test]
    fn fnpq_witness_small() {
        let space = VectorSpaceFq::new(2, 2).unwrap();
        let v = space.group();
        let x = vec![space.basis(0), space.basis(1), 0];
        let rep = check_fnpq_witness(&v, &x, 2, 3, 2).unwrap();
        assert!(rep.generates);
        assert!(rep.holds());
        assert!(check_fnpq_witness(&v, &x[..2], 2, 3, 2).is_err());
    }

    #[test]
    fn variety_search() {
        let (s3, _) = FiniteGroup::symmetric(3);
        let b = Budget::default();
        let cert = group_in_variety(&s3, &s3, 1, &b).unwrap().unwrap();
        assert_eq!(cert.m, 1);
        verify_group_certificate(&s3, &s3, &cert).unwrap();
        let c6 = FiniteGroup::cyclic(6);
        let cert = group_in_variety(&c6, &s3, 3, &b).unwrap().unwrap();
        assert_eq!(cert.m, 2);
        verify_group_certificate(&c6, &s3, &cert).unwrap();
        let mut bad = cert.clone();
        bad.images[0] = 2;
        assert!(verify_group_certificate(&c6, &s3, &bad).is_err());
        assert_eq!(group_in_variety(&FiniteGroup::cyclic(4), &s3, 3, &b).unwrap(), None);
    }
}
