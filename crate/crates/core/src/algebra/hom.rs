//! Homomorphism search.
//!
//! Images are chosen only for a generating set of the domain (the
//! prescribed elements first, then a greedy completion); every other image
//! is forced by closing the graph of the partial map under the operations.
//! Conflicts found while closing prune the search immediately.

use super::closure::DenseCloser;
use super::congruence::Homomorphism;
use super::finite::{Elem, FiniteAlgebra};
use crate::budget::Budget;
use crate::error::{Error, Result};

const UNSET: u32 = u32::MAX;

/// A partial map per sort, sized like the domain.
pub type PartialMap = Vec<Vec<Option<Elem>>>;

/// The nowhere-defined partial map on `dom`.
pub fn empty_partial(dom: &FiniteAlgebra) -> PartialMap {
    dom.sizes().iter().map(|&n| vec![None; n]).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    pub onto: bool,
    pub injective: bool,
}

/// Extends `partial` to a homomorphism `dom → cod`, surjective when `onto`.
/// Candidates are tried in ascending order, so the result is the
/// lexicographically first extension.
pub fn find_homomorphism(
    dom: &FiniteAlgebra,
    cod: &FiniteAlgebra,
    partial: &PartialMap,
    onto: bool,
) -> Result<Option<Homomorphism>> {
    search(
        dom,
        cod,
        partial,
        SearchOptions {
            onto,
            injective: false,
        },
    )
}

/// A bijective homomorphism, if the algebras are isomorphic.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Option<Homomorphism>> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch);
    }
    if a.sizes() != b.sizes() {
        return Ok(None);
    }
    search(
        a,
        b,
        &empty_partial(a),
        SearchOptions {
            onto: true,
            injective: true,
        },
    )
}

/// An injective homomorphism `dom → cod`.
pub fn find_embedding(dom: &FiniteAlgebra, cod: &FiniteAlgebra) -> Result<Option<Homomorphism>> {
    if dom.signature() != cod.signature() {
        return Err(Error::SignatureMismatch);
    }
    if dom.sizes().iter().zip(cod.sizes()).any(|(a, b)| a > b) {
        return Ok(None);
    }
    search(
        dom,
        cod,
        &empty_partial(dom),
        SearchOptions {
            onto: false,
            injective: true,
        },
    )
}

pub fn search(
    dom: &FiniteAlgebra,
    cod: &FiniteAlgebra,
    partial: &PartialMap,
    opts: SearchOptions,
) -> Result<Option<Homomorphism>> {
    if dom.signature() != cod.signature() {
        return Err(Error::SignatureMismatch);
    }
    if partial.len() != dom.sort_count()
        || partial.iter().zip(dom.sizes()).any(|(p, &n)| p.len() != n)
    {
        return Err(Error::SortMismatch("partial map does not match the domain".into()));
    }
    for (s, p) in partial.iter().enumerate() {
        if p.iter().flatten().any(|&e| e >= cod.size(s)) {
            return Err(Error::SortMismatch("partial map leaves the codomain".into()));
        }
    }
    let mut state = Graph::new(dom, cod, opts.injective);
    if !state.close(vec![0; dom.sort_count()], true) {
        return Ok(None);
    }
    for (s, p) in partial.iter().enumerate() {
        for (a, b) in p.iter().enumerate() {
            if let Some(b) = *b {
                if !state.extend(s, a, b) {
                    return Ok(None);
                }
            }
        }
    }
    // greedy completion of the prescribed elements to a generating set
    let mut closer = DenseCloser::new(dom, &Budget {
        max_elements: usize::MAX,
        ..Budget::default()
    });
    let mut gens: Vec<Vec<Elem>> = partial
        .iter()
        .map(|p| p.iter().enumerate().filter(|(_, b)| b.is_some()).map(|(a, _)| a).collect())
        .collect();
    let mut have: Vec<Vec<bool>> = dom.sizes().iter().map(|&n| vec![false; n]).collect();
    let mut free: Vec<(usize, Elem)> = Vec::new();
    let mark = |have: &mut Vec<Vec<bool>>, cl: Vec<Vec<Elem>>| {
        for (s, v) in cl.into_iter().enumerate() {
            for e in v {
                have[s][e] = true;
            }
        }
    };
    mark(&mut have, closer.close(&gens)?);
    for s in 0..dom.sort_count() {
        for e in 0..dom.size(s) {
            if !have[s][e] {
                gens[s].push(e);
                free.push((s, e));
                mark(&mut have, closer.close(&gens)?);
            }
        }
    }
    Ok(backtrack(&state, &free, 0, cod, opts))
}

fn backtrack(
    state: &Graph,
    free: &[(usize, Elem)],
    depth: usize,
    cod: &FiniteAlgebra,
    opts: SearchOptions,
) -> Option<Homomorphism> {
    if depth == free.len() {
        let h = state.to_hom();
        if opts.onto && !h.is_surjective(cod) {
            return None;
        }
        return Some(h);
    }
    let (s, a) = free[depth];
    if state.img[s][a] != UNSET {
        return backtrack(state, free, depth + 1, cod, opts);
    }
    for b in 0..cod.size(s) {
        if opts.injective && state.used.as_ref().is_some_and(|u| u[s][b]) {
            continue;
        }
        let mut next = state.clone();
        if next.extend(s, a, b) {
            if let Some(h) = backtrack(&next, free, depth + 1, cod, opts) {
                return Some(h);
            }
        }
    }
    None
}

/// The graph of a partial map closed under the operations.
#[derive(Clone)]
struct Graph<'a> {
    dom: &'a FiniteAlgebra,
    cod: &'a FiniteAlgebra,
    img: Vec<Vec<u32>>,
    defined: Vec<Vec<Elem>>,
    used: Option<Vec<Vec<bool>>>,
}

impl<'a> Graph<'a> {
    fn new(dom: &'a FiniteAlgebra, cod: &'a FiniteAlgebra, injective: bool) -> Graph<'a> {
        Graph {
            dom,
            cod,
            img: dom.sizes().iter().map(|&n| vec![UNSET; n]).collect(),
            defined: vec![Vec::new(); dom.sort_count()],
            used: injective.then(|| cod.sizes().iter().map(|&n| vec![false; n]).collect()),
        }
    }

    fn to_hom(&self) -> Homomorphism {
        Homomorphism::new(
            self.img
                .iter()
                .map(|v| v.iter().map(|&b| b as Elem).collect())
                .collect(),
        )
    }

    fn set(&mut self, s: usize, a: Elem, b: Elem) -> bool {
        let cur = self.img[s][a];
        if cur != UNSET {
            return cur as Elem == b;
        }
        if let Some(u) = &mut self.used {
            if u[s][b] {
                return false;
            }
            u[s][b] = true;
        }
        self.img[s][a] = b as u32;
        self.defined[s].push(a);
        true
    }

    /// Adds `a ↦ b` in sort `s` and closes; false on a conflict.
    fn extend(&mut self, s: usize, a: Elem, b: Elem) -> bool {
        let prev: Vec<usize> = self.defined.iter().map(Vec::len).collect();
        if !self.set(s, a, b) {
            return false;
        }
        if prev[s] == self.defined[s].len() {
            return true;
        }
        self.close(prev, false)
    }

    /// Semi-naive closure of the graph; tuples made only of elements
    /// before `prev` are assumed done. Constants are applied when `seed`.
    fn close(&mut self, mut prev: Vec<usize>, seed: bool) -> bool {
        let mut first_round = seed;
        let sig = self.dom.signature();
        let mut args = Vec::new();
        let mut imgs = Vec::new();
        loop {
            let start: Vec<usize> = self.defined.iter().map(Vec::len).collect();
            if start == prev && !first_round {
                return true;
            }
            for (si, sym) in sig.symbols().iter().enumerate() {
                let k = sym.args.len();
                if k == 0 {
                    if first_round {
                        let r = self.dom.apply(si, &[]);
                        let rb = self.cod.apply(si, &[]);
                        if !self.set(sym.out, r, rb) {
                            return false;
                        }
                    }
                    continue;
                }
                for first_new in 0..k {
                    let mut lo = vec![0usize; k];
                    let mut hi = vec![0usize; k];
                    let mut empty = false;
                    for (j, &srt) in sym.args.iter().enumerate() {
                        let (l, h) = if j < first_new {
                            (0, prev[srt])
                        } else if j == first_new {
                            (prev[srt], start[srt])
                        } else {
                            (0, start[srt])
                        };
                        empty |= l >= h;
                        lo[j] = l;
                        hi[j] = h;
                    }
                    if empty {
                        continue;
                    }
                    let mut t = lo.clone();
                    'tuples: loop {
                        args.clear();
                        imgs.clear();
                        for j in 0..k {
                            let x = self.defined[sym.args[j]][t[j]];
                            args.push(x);
                            imgs.push(self.img[sym.args[j]][x] as Elem);
                        }
                        let r = self.dom.apply(si, &args);
                        let rb = self.cod.apply(si, &imgs);
                        if !self.set(sym.out, r, rb) {
                            return false;
                        }
                        let mut j = k;
                        loop {
                            if j == 0 {
                                break 'tuples;
                            }
                            j -= 1;
                            t[j] += 1;
                            if t[j] < hi[j] {
                                break;
                            }
                            t[j] = lo[j];
                        }
                    }
                }
            }
            first_round = false;
            prev = start;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;

    fn zn(n: usize) -> FiniteAlgebra {
        FiniteAlgebra::from_fn(Signature::single_sorted(&[("+", 2)]), vec![n], move |_, a| {
            (a[0] + a[1]) % n
        })
        .unwrap()
    }

    #[test]
    fn identity_extension() {
        let a = zn(6);
        let mut p = empty_partial(&a);
        p[0][1] = Some(1);
        let h = find_homomorphism(&a, &a, &p, false).unwrap().unwrap();
        assert_eq!(h, Homomorphism::identity(&a));
    }

    #[test]
    fn projections_and_embeddings() {
        let (z6, z3, z4) = (zn(6), zn(3), zn(4));
        let h = find_homomorphism(&z6, &z3, &empty_partial(&z6), true).unwrap().unwrap();
        h.verify(&z6, &z3).unwrap();
        assert!(h.is_surjective(&z3));
        assert!(find_homomorphism(&z6, &z4, &empty_partial(&z6), true).unwrap().is_none());
        let e = find_embedding(&z3, &z6).unwrap().unwrap();
        assert_eq!(e.maps[0], vec![0, 2, 4]);
        assert!(find_embedding(&z4, &z6).unwrap().is_none());
    }

    #[test]
    fn isomorphism_of_relabelled_copy() {
        let a = zn(5);
        let perm = [3usize, 0, 4, 1, 2];
        let mut inv = [0usize; 5];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let b = FiniteAlgebra::from_fn(a.signature().clone(), vec![5], |_, x| {
            perm[a.apply2(0, inv[x[0]], inv[x[1]])]
        })
        .unwrap();
        let h = find_isomorphism(&a, &b).unwrap().unwrap();
        h.verify(&a, &b).unwrap();
        assert!(h.is_injective());
        assert!(find_isomorphism(&a, &zn(4)).unwrap().is_none());
    }

    #[test]
    fn conflicting_partial_map() {
        let a = zn(4);
        let mut p = empty_partial(&a);
        p[0][1] = Some(1);
        p[0][2] = Some(3);
        assert!(find_homomorphism(&a, &a, &p, false).unwrap().is_none());
    }
}
