use std::collections::VecDeque;

use super::presentation::{cyclic_reduce, inverse_letter, GroupPresentation, Letter};
use super::FiniteGroup;
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// A complete, standardized coset table of the trivial subgroup.
///
/// Column `2i` holds the action of generator `i`, column `2i + 1` that of its
/// inverse. Coset `0` is the identity; cosets are numbered breadth first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    columns: usize,
    table: Vec<u32>,
    reps: Vec<Vec<Letter>>,
}

impl CosetTable {
    pub fn coset_count(&self) -> usize {
        self.reps.len()
    }

    pub fn column_count(&self) -> usize {
        self.columns
    }

    #[inline]
    pub fn image(&self, coset: usize, letter: Letter) -> usize {
        self.table[coset * self.columns + letter] as usize
    }

    /// Shortest-first representative word of each coset.
    pub fn representative(&self, coset: usize) -> &[Letter] {
        &self.reps[coset]
    }

    /// Follows `w` from `coset`.
    pub fn trace(&self, coset: usize, w: &[Letter]) -> usize {
        w.iter().fold(coset, |c, &l| self.image(c, l))
    }

    /// Whether every relator fixes every coset.
    pub fn satisfies(&self, pres: &GroupPresentation) -> bool {
        pres.relators()
            .iter()
            .all(|r| (0..self.coset_count()).all(|c| self.trace(c, r) == c))
    }
}

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    limit: usize,
    rows: usize,
    queue: Vec<u32>,
}

impl Enumerator {
    fn new(cols: usize, limit: usize) -> Enumerator {
        Enumerator {
            cols,
            table: vec![NONE; cols],
            parent: vec![0],
            limit,
            rows: 1,
            queue: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, c: usize, x: Letter) -> u32 {
        self.table[c * self.cols + x]
    }

    #[inline]
    fn set(&mut self, c: usize, x: Letter, v: u32) {
        self.table[c * self.cols + x] = v;
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn define(&mut self, c: usize, x: Letter) -> Result<()> {
        if self.rows >= self.limit {
            return Err(Error::Overflow(self.rows));
        }
        let n = self.rows;
        self.rows += 1;
        self.table.extend(std::iter::repeat(NONE).take(self.cols));
        self.parent.push(n as u32);
        self.set(c, x, n as u32);
        self.set(n, inverse_letter(x), c as u32);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut c = c;
        while self.parent[c] as usize != r {
            let next = self.parent[c] as usize;
            self.parent[c] = r as u32;
            c = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo as u32;
            self.queue.push(hi as u32);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i] as usize;
            i += 1;
            for x in 0..self.cols {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                let d = d as usize;
                let xi = inverse_letter(x);
                if self.get(d, xi) as usize == g {
                    self.set(d, xi, NONE);
                }
                let (mu, nu) = (self.rep(g), self.rep(d));
                let m = self.get(mu, x);
                if m != NONE {
                    self.merge(nu, m as usize);
                    continue;
                }
                let n = self.get(nu, xi);
                if n != NONE {
                    self.merge(mu, n as usize);
                    continue;
                }
                self.set(mu, x, nu as u32);
                self.set(nu, xi, mu as u32);
            }
        }
    }

    fn scan_and_fill(&mut self, a: usize, w: &[Letter]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (a, a);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]) as usize;
                i += 1;
            }
            if i as isize > j {
                if f != a {
                    self.coincidence(f, a);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, inverse_letter(w[j as usize])) != NONE {
                b = self.get(b, inverse_letter(w[j as usize])) as usize;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.set(f, w[i], b as u32);
                self.set(b, inverse_letter(w[i]), f as u32);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// Enumerates the cosets of the trivial subgroup (HLT strategy): each live
/// coset in ascending order scans every relator, defining cosets as needed,
/// then has its remaining columns filled. `coset_limit` caps the number of
/// rows ever allocated.
pub fn todd_coxeter(pres: &GroupPresentation, coset_limit: usize) -> Result<(FiniteGroup, CosetTable)> {
    if coset_limit == 0 {
        return Err(Error::Overflow(0));
    }
    let cols = 2 * pres.generator_count();
    let mut rels: Vec<Vec<Letter>> = Vec::new();
    for r in pres.relators() {
        let r = cyclic_reduce(r);
        if !r.is_empty() && !rels.contains(&r) {
            rels.push(r);
        }
    }
    let mut e = Enumerator::new(cols, coset_limit);
    let mut c = 0;
    while c < e.rows {
        for r in &rels {
            if !e.live(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        for x in 0..cols {
            if !e.live(c) {
                break;
            }
            if e.get(c, x) == NONE {
                e.define(c, x)?;
            }
        }
        c += 1;
    }
    Ok(standardize(&e, pres))
}

fn standardize(e: &Enumerator, pres: &GroupPresentation) -> (FiniteGroup, CosetTable) {
    let cols = e.cols;
    let mut number = vec![NONE; e.rows];
    let mut order = vec![0usize];
    let mut reps: Vec<Vec<Letter>> = vec![Vec::new()];
    // (parent coset, letter) in new numbering
    let mut tree: Vec<(usize, Letter)> = vec![(0, 0)];
    number[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for x in 0..cols {
            let d = e.get(c, x) as usize;
            if number[d] == NONE {
                number[d] = order.len() as u32;
                let mut w = reps[number[c] as usize].clone();
                w.push(x);
                reps.push(w);
                tree.push((number[c] as usize, x));
                order.push(d);
                queue.push_back(d);
            }
        }
    }
    let n = order.len();
    let mut table = vec![0u32; n * cols];
    for (i, &c) in order.iter().enumerate() {
        for x in 0..cols {
            table[i * cols + x] = number[e.get(c, x) as usize];
        }
    }
    // element b has word rep(parent(b)) · letter(b), so a·b = (a·parent(b))·letter(b)
    let mut mult = vec![0u32; n * n];
    for a in 0..n {
        mult[a * n] = a as u32;
        for b in 1..n {
            let (pb, x) = tree[b];
            let ap = mult[a * n + pb] as usize;
            mult[a * n + b] = table[ap * cols + x];
        }
    }
    let labels = reps.iter().map(|w| pres.format_word(w)).collect();
    let group = FiniteGroup::from_parts(n, mult, 0)
        .with_labels(labels)
        .expect("one label per coset");
    (
        group,
        CosetTable {
            columns: cols,
            table,
            reps,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::super::presentation::{eval_word, presentation_hpc};
    use super::*;

    fn enumerate(text: &str) -> (FiniteGroup, CosetTable) {
        let p = GroupPresentation::parse(text).unwrap();
        let (g, t) = todd_coxeter(&p, 100_000).unwrap();
        assert!(t.satisfies(&p));
        (g, t)
    }

    #[test]
    fn small_groups() {
        assert_eq!(enumerate("gens: a; rels: a^7;").0.size(), 7);
        assert_eq!(enumerate("gens: a b; rels: a^2, b^3, (a b)^3;").0.size(), 12);
        assert_eq!(enumerate("gens: a b; rels: a^2, b^3, (a b)^5;").0.size(), 60);
        assert_eq!(enumerate("gens: a b; rels: a^3, b^2, a b a b;").0.size(), 6);
        assert_eq!(enumerate("gens: a; rels: a^4, a^6;").0.size(), 2);
        assert_eq!(enumerate("gens: a; rels: a;").0.size(), 1);
    }

    #[test]
    fn group_table_is_consistent() {
        let p = GroupPresentation::parse("gens: a b; rels: a^4, b^2, b a b a;").unwrap();
        let (g, t) = todd_coxeter(&p, 1000).unwrap();
        assert_eq!(g.size(), 8);
        assert!(FiniteGroup::from_table(8, g.table().to_vec()).is_ok());
        for c in 0..8 {
            // the element numbered c is the value of its representative word
            assert_eq!(eval_word(&g, &[t.image(0, 0), t.image(0, 2)], t.representative(c)), c);
        }
        assert!(p.relators_hold(&g, &[t.image(0, 0), t.image(0, 2)]).is_none());
    }

    #[test]
    fn infinite_groups_overflow() {
        let p = GroupPresentation::parse("gens: a b; rels: [a,b];").unwrap();
        assert_eq!(todd_coxeter(&p, 500), Err(Error::Overflow(500)));
    }

    #[test]
    fn hpc_orders() {
        for (p, c, n) in [(2, 1, 4), (2, 2, 8), (2, 3, 16), (3, 1, 9), (3, 2, 27)] {
            let (g, t) = todd_coxeter(&presentation_hpc(p, c), 1_000_000).unwrap();
            assert_eq!(g.size(), n, "H({p},{c})");
            assert!(t.satisfies(&presentation_hpc(p, c)));
        }
    }
}
