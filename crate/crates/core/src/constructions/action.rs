use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::json;

use crate::algebra::{AlgebraDoc, Elem, FiniteAlgebra, GroupDoc, Signature, SubUniverse};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupAction};

/// A τ-algebra `(A1, A2; s)` with what is known about where it came from.
#[derive(Clone, Debug)]
pub struct TwoSortedActionAlgebra {
    pub algebra: FiniteAlgebra,
    /// The group whose elements form sort 1, when there is one.
    pub group: Option<Arc<FiniteGroup>>,
    /// Faithfulness of the underlying action; `None` when not applicable.
    pub faithful: Option<bool>,
    /// Absorbing elements `(0_1, 0_2)`, always the last index of each sort.
    pub zeros: Option<(Elem, Elem)>,
    pub provenance: serde_json::Value,
}

impl TwoSortedActionAlgebra {
    /// Wraps a τ-algebra without metadata.
    pub fn from_algebra(algebra: FiniteAlgebra, zeros: Option<(Elem, Elem)>) -> Result<TwoSortedActionAlgebra> {
        if algebra.signature() != &Signature::tau() {
            return Err(Error::SignatureMismatch);
        }
        if zeros.is_some() {
            crate::terms::check_zero_adjoined(&algebra, zeros)?;
        }
        Ok(TwoSortedActionAlgebra {
            algebra,
            group: None,
            faithful: None,
            zeros,
            provenance: json!({ "construction": "input" }),
        })
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.algebra.size(0), self.algebra.size(1))
    }

    #[inline]
    pub fn act(&self, x: Elem, y: Elem) -> Elem {
        self.algebra.apply2(0, x, y)
    }

    /// The JSON document with group, action, zero and provenance blocks.
    pub fn to_doc(&self) -> AlgebraDoc {
        let mut doc = AlgebraDoc::from_algebra(&self.algebra);
        if let Some(g) = &self.group {
            doc.group = Some(GroupDoc {
                identity: g.identity(),
                inverses: g.inverses().to_vec(),
            });
        }
        if let Some((z1, z2)) = self.zeros {
            doc.zeros = Some(BTreeMap::from([("G".to_string(), z1), ("S".to_string(), z2)]));
        }
        let mut prov = self.provenance.clone();
        if let (Some(f), Some(obj)) = (self.faithful, prov.as_object_mut()) {
            obj.insert("faithful".into(), json!(f));
        }
        doc.provenance = Some(prov);
        doc
    }

    /// Reads a τ-algebra document, keeping designated zeros.
    pub fn from_doc(doc: &AlgebraDoc) -> Result<TwoSortedActionAlgebra> {
        let algebra = doc.to_algebra()?;
        let zeros = match &doc.zeros {
            Some(z) => Some((
                *z.get("G").ok_or(Error::NotZeroAdjoined)?,
                *z.get("S").ok_or(Error::NotZeroAdjoined)?,
            )),
            None => None,
        };
        let mut t = TwoSortedActionAlgebra::from_algebra(algebra, zeros)?;
        if let Some(p) = &doc.provenance {
            t.provenance = p.clone();
        }
        Ok(t)
    }
}

fn labels_or_indices(labels: Option<&[String]>, n: usize) -> Vec<String> {
    match labels {
        Some(l) => l.to_vec(),
        None => (0..n).map(|i| i.to_string()).collect(),
    }
}

/// `A(G, S, α)`: sorts `G` and `S`, with `s` the action table.
///
/// An unfaithful action is accepted; `faithful` records the fact.
pub fn build_action_algebra(g: &FiniteGroup, act: &GroupAction) -> Result<TwoSortedActionAlgebra> {
    if act.group() != g {
        return Err(Error::ActionMismatch("action belongs to a different group".into()));
    }
    let algebra = FiniteAlgebra::new(
        Signature::tau(),
        vec![g.size(), act.set_size()],
        vec![act.table().to_vec()],
    )?
    .with_labels(vec![
        labels_or_indices(g.labels(), g.size()),
        labels_or_indices(act.point_labels(), act.set_size()),
    ])?;
    Ok(TwoSortedActionAlgebra {
        algebra,
        group: Some(act.shared_group().clone()),
        faithful: Some(act.is_faithful()),
        zeros: None,
        provenance: json!({
            "construction": "action",
            "group_order": g.size(),
            "set_size": act.set_size(),
        }),
    })
}

/// `L(H, r)`: `H` acting by left multiplication on `r` disjoint copies of
/// itself. Element `(i, k)` of sort 2 has index `i·|H| + k`.
pub fn build_l(h: &FiniteGroup, r: usize) -> Result<TwoSortedActionAlgebra> {
    if r == 0 {
        return Err(Error::InvalidAlgebra("L(H, r) needs r >= 1".into()));
    }
    let n = h.size();
    let algebra = FiniteAlgebra::from_fn(Signature::tau(), vec![n, r * n], |_, a| {
        let (i, k) = (a[1] / n, a[1] % n);
        i * n + h.mul(a[0], k)
    })?;
    let s_labels = (0..r * n)
        .map(|y| {
            if r == 1 {
                h.label(y)
            } else {
                format!("({},{})", y / n, h.label(y % n))
            }
        })
        .collect();
    let algebra = algebra.with_labels(vec![(0..n).map(|x| h.label(x)).collect(), s_labels])?;
    Ok(TwoSortedActionAlgebra {
        algebra,
        group: Some(Arc::new(h.clone())),
        faithful: Some(true),
        zeros: None,
        provenance: json!({ "construction": "L", "group_order": n, "r": r }),
    })
}

/// `B⁰`: each sort gains a last element `0`, and `s` sends every pair
/// involving a zero to the zero of sort 2.
pub fn adjoin_zero(b: &FiniteAlgebra) -> Result<TwoSortedActionAlgebra> {
    if b.signature() != &Signature::tau() {
        return Err(Error::SignatureMismatch);
    }
    let (n1, n2) = (b.size(0), b.size(1));
    let algebra = FiniteAlgebra::from_fn(Signature::tau(), vec![n1 + 1, n2 + 1], |_, a| {
        if a[0] < n1 && a[1] < n2 {
            b.apply2(0, a[0], a[1])
        } else {
            n2
        }
    })?;
    let labels = (0..2)
        .map(|s| {
            let mut l: Vec<String> = (0..b.size(s)).map(|e| b.label(s, e)).collect();
            l.push("0".into());
            l
        })
        .collect();
    Ok(TwoSortedActionAlgebra {
        algebra: algebra.with_labels(labels)?,
        group: None,
        faithful: None,
        zeros: Some((n1, n2)),
        provenance: json!({ "construction": "adjoin_zero", "base_sizes": [n1, n2] }),
    })
}

/// `D⁻`: a subuniverse of a zero-adjoined algebra with the zeros removed.
/// Returns `None` when a sort would become empty.
pub fn strip_zero(d: &SubUniverse, zeros: (Elem, Elem)) -> Option<SubUniverse> {
    let z = [zeros.0, zeros.1];
    let parts: Vec<Vec<Elem>> = d
        .subsets()
        .iter()
        .enumerate()
        .map(|(s, v)| v.iter().copied().filter(|&e| e != z[s]).collect())
        .collect();
    if parts.iter().any(Vec::is_empty) {
        None
    } else {
        Some(SubUniverse::new(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{find_embedding, find_isomorphism};

    #[test]
    fn s3_action_sizes() {
        let (g, act) = FiniteGroup::symmetric(3);
        let a = build_action_algebra(&g, &act).unwrap();
        assert_eq!(a.sizes(), (6, 3));
        assert_eq!(a.faithful, Some(true));
        let z = adjoin_zero(&a.algebra).unwrap();
        assert_eq!(z.sizes(), (7, 4));
        assert_eq!(z.zeros, Some((6, 3)));
        assert_eq!(z.algebra.label(1, 3), "0");
        let (t, tact) = FiniteGroup::symmetric(1);
        assert_eq!(build_action_algebra(&t, &tact).unwrap().sizes(), (1, 1));
        assert!(build_action_algebra(&t, &act).is_err());
    }

    #[test]
    fn l_algebras() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let reg = build_action_algebra(&c2, &GroupAction::regular(c2.clone())).unwrap();
        let l1 = build_l(&c2, 1).unwrap();
        assert!(find_isomorphism(&reg.algebra, &l1.algebra).unwrap().is_some());
        let (s3, _) = FiniteGroup::symmetric(3);
        assert_eq!(build_l(&s3, 2).unwrap().sizes(), (6, 12));
        let c2sq = FiniteGroup::direct_product(&c2, &c2);
        let l2 = build_l(&c2, 2).unwrap();
        let big = build_l(&c2sq, 1).unwrap();
        // sort-1 images must be a subgroup isomorphic to C2, which exists
        assert!(find_embedding(&l2.algebra, &big.algebra).unwrap().is_some());
    }

    #[test]
    fn json_round_trip_keeps_zeros() {
        let (g, act) = FiniteGroup::symmetric(3);
        let a = build_action_algebra(&g, &act).unwrap();
        let z = adjoin_zero(&a.algebra).unwrap();
        let doc = AlgebraDoc::parse(&z.to_doc().to_json()).unwrap();
        let back = TwoSortedActionAlgebra::from_doc(&doc).unwrap();
        assert_eq!(back.zeros, Some((6, 3)));
        assert_eq!(back.algebra, z.algebra);
    }

    #[test]
    fn stripping_zeros() {
        let d = SubUniverse::new(vec![vec![0, 6], vec![1, 3]]);
        let s = strip_zero(&d, (6, 3)).unwrap();
        assert_eq!(s.subsets(), &[vec![0], vec![1]]);
        assert!(strip_zero(&SubUniverse::new(vec![vec![6], vec![1, 3]]), (6, 3)).is_none());
    }
}
