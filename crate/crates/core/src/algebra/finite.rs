use std::sync::Arc;

use super::signature::Signature;
use crate::error::{Error, Result};

/// Element of a sort: a dense 0-based index.
pub type Elem = usize;

/// A finite, everywhere nonempty multi-sorted algebra with dense operation
/// tables. Tables are row-major with the first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    sig: Arc<Signature>,
    sizes: Vec<usize>,
    tables: Vec<Vec<u32>>,
    labels: Option<Vec<Vec<String>>>,
}

impl FiniteAlgebra {
    pub fn new(sig: Signature, sizes: Vec<usize>, tables: Vec<Vec<u32>>) -> Result<FiniteAlgebra> {
        Self::with_shared(Arc::new(sig), sizes, tables)
    }

    pub fn with_shared(
        sig: Arc<Signature>,
        sizes: Vec<usize>,
        tables: Vec<Vec<u32>>,
    ) -> Result<FiniteAlgebra> {
        if sizes.len() != sig.sort_count() {
            return Err(Error::InvalidAlgebra(format!(
                "{} sizes for {} sorts",
                sizes.len(),
                sig.sort_count()
            )));
        }
        if let Some(s) = sizes.iter().position(|&n| n == 0) {
            return Err(Error::InvalidAlgebra(format!(
                "sort `{}` is empty",
                sig.sort_name(s)
            )));
        }
        if sizes.iter().any(|&n| n > u32::MAX as usize) {
            return Err(Error::InvalidAlgebra("sort too large".into()));
        }
        if tables.len() != sig.symbols().len() {
            return Err(Error::InvalidAlgebra(format!(
                "{} tables for {} symbols",
                tables.len(),
                sig.symbols().len()
            )));
        }
        for (sym, table) in sig.symbols().iter().zip(&tables) {
            let expected: usize = sym.args.iter().map(|&a| sizes[a]).product();
            if table.len() != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "table of `{}` has {} entries, expected {expected}",
                    sym.name,
                    table.len()
                )));
            }
            let bound = sizes[sym.out] as u32;
            if let Some(bad) = table.iter().find(|&&v| v >= bound) {
                return Err(Error::InvalidAlgebra(format!(
                    "table of `{}` has entry {bad} outside sort of size {bound}",
                    sym.name
                )));
            }
        }
        Ok(FiniteAlgebra {
            sig,
            sizes,
            tables,
            labels: None,
        })
    }

    /// Builds every table by calling `op(symbol, args)` on each argument tuple.
    pub fn from_fn(
        sig: Signature,
        sizes: Vec<usize>,
        op: impl FnMut(usize, &[Elem]) -> Elem,
    ) -> Result<FiniteAlgebra> {
        Self::from_fn_shared(Arc::new(sig), sizes, op)
    }

    pub fn from_fn_shared(
        sig: Arc<Signature>,
        sizes: Vec<usize>,
        mut op: impl FnMut(usize, &[Elem]) -> Elem,
    ) -> Result<FiniteAlgebra> {
        if sizes.len() != sig.sort_count() {
            return Err(Error::InvalidAlgebra("wrong number of sizes".into()));
        }
        let mut tables = Vec::with_capacity(sig.symbols().len());
        for (si, sym) in sig.symbols().iter().enumerate() {
            let radices: Vec<usize> = sym.args.iter().map(|&a| sizes[a]).collect();
            let mut table = Vec::with_capacity(radices.iter().product());
            for_each_tuple(&radices, |args| table.push(op(si, args) as u32));
            tables.push(table);
        }
        Self::with_shared(sig, sizes, tables)
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<FiniteAlgebra> {
        if labels.len() != self.sizes.len()
            || labels.iter().zip(&self.sizes).any(|(l, &n)| l.len() != n)
        {
            return Err(Error::InvalidAlgebra("label lists do not match sort sizes".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> FiniteAlgebra {
        self.labels = None;
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn shared_signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, sort: usize) -> usize {
        self.sizes[sort]
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn sort_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn table(&self, symbol: usize) -> &[u32] {
        &self.tables[symbol]
    }

    pub fn tables(&self) -> &[Vec<u32>] {
        &self.tables
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// Display name of an element; falls back to its index.
    pub fn label(&self, sort: usize, e: Elem) -> String {
        match &self.labels {
            Some(l) => l[sort][e].clone(),
            None => e.to_string(),
        }
    }

    /// Row-major position of an argument tuple in the table of `symbol`.
    #[inline]
    pub fn offset(&self, symbol: usize, args: &[Elem]) -> usize {
        let sym = self.sig.symbol(symbol);
        debug_assert_eq!(sym.args.len(), args.len());
        let mut idx = 0;
        for (&sort, &a) in sym.args.iter().zip(args) {
            idx = idx * self.sizes[sort] + a;
        }
        idx
    }

    #[inline]
    pub fn apply(&self, symbol: usize, args: &[Elem]) -> Elem {
        self.tables[symbol][self.offset(symbol, args)] as Elem
    }

    /// Convenience for the common binary case.
    #[inline]
    pub fn apply2(&self, symbol: usize, a: Elem, b: Elem) -> Elem {
        let sym = self.sig.symbol(symbol);
        self.tables[symbol][a * self.sizes[sym.args[1]] + b] as Elem
    }

    /// Argument radices (sort sizes) of a symbol.
    pub fn radices(&self, symbol: usize) -> Vec<usize> {
        self.sig
            .symbol(symbol)
            .args
            .iter()
            .map(|&a| self.sizes[a])
            .collect()
    }

    /// Element tuples spanning all sorts, sort-major: `(sort, element)`.
    pub fn elements(&self) -> impl Iterator<Item = (usize, Elem)> + '_ {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(s, &n)| (0..n).map(move |e| (s, e)))
    }
}

/// Visits every tuple of the mixed-radix space, first coordinate most significant.
pub fn for_each_tuple(radices: &[usize], mut f: impl FnMut(&[Elem])) {
    if radices.iter().any(|&r| r == 0) {
        return;
    }
    let mut t = vec![0; radices.len()];
    loop {
        f(&t);
        let mut i = radices.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < radices[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3_plus() -> FiniteAlgebra {
        FiniteAlgebra::from_fn(Signature::single_sorted(&[("+", 2)]), vec![3], |_, a| {
            (a[0] + a[1]) % 3
        })
        .unwrap()
    }

    #[test]
    fn row_major_first_argument_most_significant() {
        let a = z3_plus();
        assert_eq!(a.table(0), &[0, 1, 2, 1, 2, 0, 2, 0, 1]);
        assert_eq!(a.offset(0, &[2, 1]), 7);
        assert_eq!(a.apply(0, &[2, 2]), 1);
        assert_eq!(a.apply2(0, 1, 2), 0);
    }

    #[test]
    fn validation() {
        let sig = Signature::single_sorted(&[("f", 1)]);
        assert!(FiniteAlgebra::new(sig.clone(), vec![0], vec![vec![]]).is_err());
        assert!(FiniteAlgebra::new(sig.clone(), vec![2], vec![vec![0]]).is_err());
        assert!(FiniteAlgebra::new(sig.clone(), vec![2], vec![vec![0, 2]]).is_err());
        assert!(FiniteAlgebra::new(sig, vec![2], vec![vec![1, 0]]).is_ok());
    }

    #[test]
    fn tuples_enumerate_in_order() {
        let mut seen = vec![];
        for_each_tuple(&[2, 3], |t| seen.push((t[0], t[1])));
        assert_eq!(seen, vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]);
        let mut count = 0;
        for_each_tuple(&[], |_| count += 1);
        assert_eq!(count, 1);
    }
}
