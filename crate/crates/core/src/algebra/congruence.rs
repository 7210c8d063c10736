use super::finite::{for_each_tuple, Elem, FiniteAlgebra};
use crate::error::{Error, Result};

/// A partition per sort, stored as block numbers. Blocks are renumbered in
/// order of first occurrence so equal partitions compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Congruence {
    partitions: Vec<Vec<usize>>,
    counts: Vec<usize>,
}

impl Congruence {
    pub fn new(partitions: Vec<Vec<usize>>) -> Congruence {
        let mut out = Vec::with_capacity(partitions.len());
        let mut counts = Vec::with_capacity(partitions.len());
        for p in partitions {
            let mut rename = std::collections::HashMap::new();
            let v: Vec<usize> = p
                .iter()
                .map(|&b| {
                    let n = rename.len();
                    *rename.entry(b).or_insert(n)
                })
                .collect();
            counts.push(rename.len());
            out.push(v);
        }
        Congruence {
            partitions: out,
            counts,
        }
    }

    /// The equality relation.
    pub fn identity(alg: &FiniteAlgebra) -> Congruence {
        Congruence::new(alg.sizes().iter().map(|&n| (0..n).collect()).collect())
    }

    /// The full relation.
    pub fn total(alg: &FiniteAlgebra) -> Congruence {
        Congruence::new(alg.sizes().iter().map(|&n| vec![0; n]).collect())
    }

    pub fn partitions(&self) -> &[Vec<usize>] {
        &self.partitions
    }

    pub fn block(&self, sort: usize, e: Elem) -> usize {
        self.partitions[sort][e]
    }

    pub fn block_count(&self, sort: usize) -> usize {
        self.counts[sort]
    }

    pub fn block_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn related(&self, sort: usize, a: Elem, b: Elem) -> bool {
        self.partitions[sort][a] == self.partitions[sort][b]
    }
}

/// Whether `partitions` (block number per element, per sort) is compatible
/// with every operation of `alg`.
///
/// It suffices to check tuples that differ in one coordinate: every argument
/// is compared with the first element of its block.
pub fn is_congruence(alg: &FiniteAlgebra, partitions: &[Vec<usize>]) -> bool {
    if partitions.len() != alg.sort_count()
        || partitions.iter().zip(alg.sizes()).any(|(p, &n)| p.len() != n)
    {
        return false;
    }
    let reps: Vec<std::collections::HashMap<usize, Elem>> = partitions
        .iter()
        .map(|p| {
            let mut m = std::collections::HashMap::new();
            for (e, &b) in p.iter().enumerate() {
                m.entry(b).or_insert(e);
            }
            m
        })
        .collect();
    let rep_of: Vec<Vec<Elem>> = partitions
        .iter()
        .enumerate()
        .map(|(s, p)| p.iter().map(|b| reps[s][b]).collect())
        .collect();
    for (si, sym) in alg.signature().symbols().iter().enumerate() {
        let radices = alg.radices(si);
        let mut ok = true;
        let mut moved = Vec::new();
        for_each_tuple(&radices, |t| {
            if !ok {
                return;
            }
            let r = partitions[sym.out][alg.apply(si, t)];
            for j in 0..t.len() {
                let rep = rep_of[sym.args[j]][t[j]];
                if rep == t[j] {
                    continue;
                }
                moved.clear();
                moved.extend_from_slice(t);
                moved[j] = rep;
                if partitions[sym.out][alg.apply(si, &moved)] != r {
                    ok = false;
                    return;
                }
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

/// A map per sort between two algebras over one signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub maps: Vec<Vec<Elem>>,
}

impl Homomorphism {
    pub fn new(maps: Vec<Vec<Elem>>) -> Homomorphism {
        Homomorphism { maps }
    }

    pub fn identity(alg: &FiniteAlgebra) -> Homomorphism {
        Homomorphism::new(alg.sizes().iter().map(|&n| (0..n).collect()).collect())
    }

    pub fn map(&self, sort: usize, e: Elem) -> Elem {
        self.maps[sort][e]
    }

    /// Checks shapes and that the maps commute with every operation.
    pub fn verify(&self, dom: &FiniteAlgebra, cod: &FiniteAlgebra) -> Result<()> {
        if dom.signature() != cod.signature() {
            return Err(Error::SignatureMismatch);
        }
        if self.maps.len() != dom.sort_count()
            || self.maps.iter().zip(dom.sizes()).any(|(m, &n)| m.len() != n)
        {
            return Err(Error::NotAHomomorphism("maps do not cover the domain".into()));
        }
        for (s, m) in self.maps.iter().enumerate() {
            if m.iter().any(|&e| e >= cod.size(s)) {
                return Err(Error::NotAHomomorphism(format!(
                    "image outside sort `{}`",
                    dom.signature().sort_name(s)
                )));
            }
        }
        let mut img = Vec::new();
        for (si, sym) in dom.signature().symbols().iter().enumerate() {
            let mut bad = None;
            for_each_tuple(&dom.radices(si), |t| {
                if bad.is_some() {
                    return;
                }
                img.clear();
                img.extend(t.iter().zip(&sym.args).map(|(&x, &s)| self.maps[s][x]));
                if self.maps[sym.out][dom.apply(si, t)] != cod.apply(si, &img) {
                    bad = Some(t.to_vec());
                }
            });
            if let Some(t) = bad {
                return Err(Error::NotAHomomorphism(format!(
                    "`{}` at {:?} does not commute",
                    sym.name, t
                )));
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| {
            let mut v = m.clone();
            v.sort_unstable();
            v.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn is_surjective(&self, cod: &FiniteAlgebra) -> bool {
        self.maps.iter().enumerate().all(|(s, m)| {
            let mut hit = vec![false; cod.size(s)];
            m.iter().for_each(|&e| hit[e] = true);
            hit.into_iter().all(|b| b)
        })
    }

    /// The kernel as a congruence of the domain.
    pub fn kernel(&self) -> Congruence {
        Congruence::new(self.maps.clone())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism::new(
            self.maps
                .iter()
                .enumerate()
                .map(|(s, m)| m.iter().map(|&e| other.maps[s][e]).collect())
                .collect(),
        )
    }
}

/// The quotient algebra on the blocks of `theta` and the projection onto it.
pub fn quotient(alg: &FiniteAlgebra, theta: &Congruence) -> Result<(FiniteAlgebra, Homomorphism)> {
    if !is_congruence(alg, theta.partitions()) {
        return Err(Error::NotACongruence(
            "partition is not compatible with the operations".into(),
        ));
    }
    let reps: Vec<Vec<Elem>> = (0..alg.sort_count())
        .map(|s| {
            let mut r = vec![usize::MAX; theta.block_count(s)];
            for e in (0..alg.size(s)).rev() {
                r[theta.block(s, e)] = e;
            }
            r
        })
        .collect();
    let mut args = Vec::new();
    let q = FiniteAlgebra::from_fn_shared(
        alg.shared_signature().clone(),
        theta.block_counts().to_vec(),
        |si, a| {
            let sym = alg.signature().symbol(si);
            args.clear();
            args.extend(a.iter().zip(&sym.args).map(|(&b, &s)| reps[s][b]));
            theta.block(sym.out, alg.apply(si, &args))
        },
    )?;
    let q = match alg.labels() {
        Some(l) => q.with_labels(
            reps.iter()
                .enumerate()
                .map(|(s, r)| r.iter().map(|&e| format!("[{}]", l[s][e])).collect())
                .collect(),
        )?,
        None => q,
    };
    Ok((q, Homomorphism::new(theta.partitions().to_vec())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;

    fn z6() -> FiniteAlgebra {
        FiniteAlgebra::from_fn(Signature::single_sorted(&[("+", 2)]), vec![6], |_, a| {
            (a[0] + a[1]) % 6
        })
        .unwrap()
    }

    #[test]
    fn cosets_of_subgroups_are_congruences() {
        let a = z6();
        let mod3: Vec<usize> = (0..6).map(|e| e % 3).collect();
        assert!(is_congruence(&a, &[mod3.clone()]));
        let (q, proj) = quotient(&a, &Congruence::new(vec![mod3])).unwrap();
        assert_eq!(q.sizes(), &[3]);
        proj.verify(&a, &q).unwrap();
        assert!(proj.is_surjective(&q));
        assert!(!is_congruence(&a, &[vec![0, 0, 1, 1, 2, 2]]));
    }

    #[test]
    fn trivial_congruences() {
        let a = z6();
        assert!(is_congruence(&a, Congruence::identity(&a).partitions()));
        assert!(is_congruence(&a, Congruence::total(&a).partitions()));
        let (q, _) = quotient(&a, &Congruence::total(&a)).unwrap();
        assert_eq!(q.sizes(), &[1]);
    }

    #[test]
    fn blocks_are_renumbered() {
        let c = Congruence::new(vec![vec![5, 5, 2, 9]]);
        assert_eq!(c.partitions()[0], vec![0, 0, 1, 2]);
        assert_eq!(c.block_count(0), 3);
    }

    #[test]
    fn verify_rejects_non_homomorphism() {
        let a = z6();
        let h = Homomorphism::new(vec![vec![1, 2, 3, 4, 5, 0]]);
        assert!(h.verify(&a, &a).is_err());
        Homomorphism::identity(&a).verify(&a, &a).unwrap();
    }
}
