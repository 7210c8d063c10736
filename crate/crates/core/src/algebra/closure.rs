//! Subalgebra generation.
//!
//! Closure runs in semi-naive rounds: a round applies every symbol to the
//! argument tuples that contain at least one element discovered in the
//! previous round. Within a round symbols are taken in signature order and,
//! for a fixed symbol, tuples are grouped by the first position holding a new
//! element and then enumerated mixed-radix. The discovery order is therefore
//! breadth first and fully deterministic, which makes representative terms
//! shortest-first.

use std::collections::HashMap;
use std::hash::Hash;

use super::finite::{Elem, FiniteAlgebra};
use super::signature::Signature;
use super::term::Term;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A space in which closures are computed: an algebra, or a power of one.
pub(crate) trait Ambient {
    type Elem: Clone + Eq + Hash;
    fn signature(&self) -> &Signature;
    fn apply(&self, symbol: usize, args: &[&Self::Elem]) -> Self::Elem;
    /// Work units charged per application.
    fn cost(&self) -> u64 {
        1
    }
}

impl Ambient for FiniteAlgebra {
    type Elem = u32;

    fn signature(&self) -> &Signature {
        FiniteAlgebra::signature(self)
    }

    fn apply(&self, symbol: usize, args: &[&u32]) -> u32 {
        let sym = FiniteAlgebra::signature(self).symbol(symbol);
        let mut idx = 0;
        for (&sort, &&a) in sym.args.iter().zip(args) {
            idx = idx * self.size(sort) + a as usize;
        }
        self.table(symbol)[idx]
    }
}

/// How an element entered a closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Origin {
    /// The `i`-th generator of its sort.
    Generator(usize),
    /// Result of a symbol applied to earlier elements (positions per arg sort).
    App(usize, Vec<u32>),
}

pub(crate) struct Closure<E> {
    pub elems: Vec<Vec<E>>,
    pub origins: Vec<Vec<Origin>>,
    /// Position of every generator, per sort, in generator order.
    pub generators: Vec<Vec<u32>>,
    /// Operation tables over closure positions, when requested.
    pub tables: Option<Vec<Vec<u32>>>,
    /// Every element as `(sort, position)` in global discovery order; the
    /// arguments of an element always precede it.
    pub order: Vec<(u32, u32)>,
    arg_sorts: Vec<Vec<usize>>,
}

impl<E> Closure<E> {
    pub fn sizes(&self) -> Vec<usize> {
        self.elems.iter().map(Vec::len).collect()
    }

    /// Shortest-first representative term of every element, per sort.
    pub fn terms(&self) -> Vec<Vec<Term>> {
        let mut out: Vec<Vec<Option<Term>>> =
            self.elems.iter().map(|v| vec![None; v.len()]).collect();
        for sort in 0..self.elems.len() {
            for pos in 0..self.elems[sort].len() {
                self.build_term(sort, pos, &mut out);
            }
        }
        out.into_iter()
            .map(|v| v.into_iter().map(|t| t.expect("every term built")).collect())
            .collect()
    }

    fn build_term(&self, sort: usize, pos: usize, out: &mut Vec<Vec<Option<Term>>>) -> Term {
        if let Some(t) = &out[sort][pos] {
            return t.clone();
        }
        let t = match &self.origins[sort][pos] {
            Origin::Generator(i) => Term::var(sort, *i),
            Origin::App(s, args) => {
                let ch = args
                    .iter()
                    .zip(&self.arg_sorts[*s])
                    .map(|(&p, &srt)| self.build_term(srt, p as usize, out))
                    .collect();
                Term::App(*s, ch)
            }
        };
        out[sort][pos] = Some(t.clone());
        t
    }
}

pub(crate) struct CloseOptions {
    pub max_elements: usize,
    pub max_work: u64,
    pub record_tables: bool,
}

impl CloseOptions {
    pub fn from_budget(b: &Budget) -> CloseOptions {
        CloseOptions {
            max_elements: b.max_elements,
            max_work: b.max_assignments.saturating_mul(64),
            record_tables: false,
        }
    }
}

/// Closes `gens` (per sort) under every operation of `amb`.
pub(crate) fn close<A: Ambient>(
    amb: &A,
    gens: Vec<Vec<A::Elem>>,
    opts: &CloseOptions,
) -> Result<Closure<A::Elem>> {
    let sig = amb.signature().clone();
    let nsorts = sig.sort_count();
    assert_eq!(gens.len(), nsorts, "one generator list per sort");
    let mut elems: Vec<Vec<A::Elem>> = vec![Vec::new(); nsorts];
    let mut origins: Vec<Vec<Origin>> = vec![Vec::new(); nsorts];
    let mut index: Vec<HashMap<A::Elem, u32>> = vec![HashMap::new(); nsorts];
    let mut generators = vec![Vec::new(); nsorts];
    let mut order = Vec::new();
    for (s, gs) in gens.into_iter().enumerate() {
        for (i, g) in gs.into_iter().enumerate() {
            let (pos, _) = insert(&mut elems, &mut origins, &mut index, &mut order, s, g, || {
                Origin::Generator(i)
            });
            generators[s].push(pos);
        }
    }
    let mut total: usize = elems.iter().map(Vec::len).sum();
    if total > opts.max_elements {
        return Err(Error::BudgetExceeded {
            what: "closure elements",
            limit: opts.max_elements as u64,
        });
    }
    let mut recorded: Vec<(Vec<u32>, Vec<u32>)> = vec![(Vec::new(), Vec::new()); sig.symbols().len()];
    let mut work: u64 = 0;
    let mut prev = vec![0usize; nsorts];
    let mut first_round = true;
    loop {
        let start: Vec<usize> = elems.iter().map(Vec::len).collect();
        let mut grew = false;
        for (si, sym) in sig.symbols().iter().enumerate() {
            let k = sym.args.len();
            if k == 0 {
                if !first_round {
                    continue;
                }
                let r = amb.apply(si, &[]);
                let pos = insert(&mut elems, &mut origins, &mut index, &mut order, sym.out, r, || {
                    Origin::App(si, Vec::new())
                });
                if opts.record_tables {
                    recorded[si].1.push(pos.0);
                }
                if pos.1 {
                    grew = true;
                    total += 1;
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
                    if l >= h {
                        empty = true;
                    }
                    lo[j] = l;
                    hi[j] = h;
                }
                if empty {
                    continue;
                }
                let mut t = lo.clone();
                loop {
                    work += amb.cost();
                    if work > opts.max_work {
                        return Err(Error::BudgetExceeded {
                            what: "closure work",
                            limit: opts.max_work,
                        });
                    }
                    let r = {
                        let args: Vec<&A::Elem> = t
                            .iter()
                            .zip(&sym.args)
                            .map(|(&p, &srt)| &elems[srt][p])
                            .collect();
                        amb.apply(si, &args)
                    };
                    let (pos, fresh) = insert(&mut elems, &mut origins, &mut index, &mut order, sym.out, r, || {
                        Origin::App(si, t.iter().map(|&p| p as u32).collect())
                    });
                    if opts.record_tables {
                        recorded[si].0.extend(t.iter().map(|&p| p as u32));
                        recorded[si].1.push(pos);
                    }
                    if fresh {
                        grew = true;
                        total += 1;
                        if total > opts.max_elements {
                            return Err(Error::BudgetExceeded {
                                what: "closure elements",
                                limit: opts.max_elements as u64,
                            });
                        }
                    }
                    let mut j = k;
                    loop {
                        if j == 0 {
                            break;
                        }
                        j -= 1;
                        t[j] += 1;
                        if t[j] < hi[j] {
                            break;
                        }
                        t[j] = lo[j];
                        if j == 0 {
                            j = usize::MAX;
                            break;
                        }
                    }
                    if j == usize::MAX {
                        break;
                    }
                }
            }
        }
        first_round = false;
        if !grew {
            break;
        }
        prev = start;
    }
    let tables = if opts.record_tables {
        let sizes: Vec<usize> = elems.iter().map(Vec::len).collect();
        let mut tables = Vec::with_capacity(recorded.len());
        for (si, sym) in sig.symbols().iter().enumerate() {
            let len: usize = sym.args.iter().map(|&a| sizes[a]).product();
            let mut table = vec![u32::MAX; len];
            let k = sym.args.len();
            let (args, res) = &recorded[si];
            for (n, &r) in res.iter().enumerate() {
                let mut off = 0;
                for j in 0..k {
                    off = off * sizes[sym.args[j]] + args[n * k + j] as usize;
                }
                table[off] = r;
            }
            debug_assert!(table.iter().all(|&v| v != u32::MAX));
            tables.push(table);
        }
        Some(tables)
    } else {
        None
    };
    Ok(Closure {
        elems,
        origins,
        generators,
        tables,
        order,
        arg_sorts: sig.symbols().iter().map(|s| s.args.clone()).collect(),
    })
}

fn insert<E: Clone + Eq + Hash>(
    elems: &mut [Vec<E>],
    origins: &mut [Vec<Origin>],
    index: &mut [HashMap<E, u32>],
    order: &mut Vec<(u32, u32)>,
    sort: usize,
    e: E,
    origin: impl FnOnce() -> Origin,
) -> (u32, bool) {
    if let Some(&p) = index[sort].get(&e) {
        return (p, false);
    }
    let p = elems[sort].len() as u32;
    index[sort].insert(e.clone(), p);
    elems[sort].push(e);
    origins[sort].push(origin());
    order.push((sort as u32, p));
    (p, true)
}

/// A subuniverse given by its sorted element list in every sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubUniverse {
    subsets: Vec<Vec<Elem>>,
}

impl SubUniverse {
    /// Sorts and deduplicates each list; closure is not checked.
    pub fn new(mut subsets: Vec<Vec<Elem>>) -> SubUniverse {
        for s in &mut subsets {
            s.sort_unstable();
            s.dedup();
        }
        SubUniverse { subsets }
    }

    /// The whole carrier of `alg`.
    pub fn full(alg: &FiniteAlgebra) -> SubUniverse {
        SubUniverse {
            subsets: alg.sizes().iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    pub fn subsets(&self) -> &[Vec<Elem>] {
        &self.subsets
    }

    pub fn subset(&self, sort: usize) -> &[Elem] {
        &self.subsets[sort]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.subsets.iter().map(Vec::len).collect()
    }

    pub fn total_size(&self) -> usize {
        self.subsets.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, sort: usize, e: Elem) -> bool {
        self.subsets[sort].binary_search(&e).is_ok()
    }

    pub fn is_subset_of(&self, other: &SubUniverse) -> bool {
        self.subsets
            .iter()
            .enumerate()
            .all(|(s, v)| v.iter().all(|&e| other.contains(s, e)))
    }

    /// Whether every sort is nonempty.
    pub fn is_everywhere_nonempty(&self) -> bool {
        self.subsets.iter().all(|v| !v.is_empty())
    }
}

/// Whether `sub` is closed under every operation of `alg`.
pub fn is_subuniverse(alg: &FiniteAlgebra, sub: &SubUniverse) -> bool {
    let mut member: Vec<Vec<bool>> = alg.sizes().iter().map(|&n| vec![false; n]).collect();
    for (s, v) in sub.subsets().iter().enumerate() {
        for &e in v {
            if e >= alg.size(s) {
                return false;
            }
            member[s][e] = true;
        }
    }
    for (si, sym) in alg.signature().symbols().iter().enumerate() {
        let lists: Vec<&[Elem]> = sym.args.iter().map(|&a| sub.subset(a)).collect();
        let radices: Vec<usize> = lists.iter().map(|l| l.len()).collect();
        let mut ok = true;
        let mut args = vec![0; radices.len()];
        super::finite::for_each_tuple(&radices, |t| {
            if !ok {
                return;
            }
            for (j, &p) in t.iter().enumerate() {
                args[j] = lists[j][p];
            }
            if !member[sym.out][alg.apply(si, &args)] {
                ok = false;
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Reusable closure engine over the carrier of one algebra.
///
/// Membership is tracked with stamped arrays so repeated closures (as in
/// generator sweeps) cost nothing to reset.
pub struct DenseCloser<'a> {
    alg: &'a FiniteAlgebra,
    stamp: Vec<Vec<u32>>,
    current: u32,
    limit: usize,
}

impl<'a> DenseCloser<'a> {
    pub fn new(alg: &'a FiniteAlgebra, budget: &Budget) -> DenseCloser<'a> {
        DenseCloser {
            alg,
            stamp: alg.sizes().iter().map(|&n| vec![0; n]).collect(),
            current: 0,
            limit: budget.max_elements,
        }
    }

    /// Elements of the generated subuniverse, per sort, in discovery order.
    pub fn close(&mut self, gens: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
        let alg = self.alg;
        let nsorts = alg.sort_count();
        assert_eq!(gens.len(), nsorts, "one generator list per sort");
        self.current = self.current.wrapping_add(1);
        if self.current == 0 {
            for v in &mut self.stamp {
                v.iter_mut().for_each(|x| *x = 0);
            }
            self.current = 1;
        }
        let cur = self.current;
        let mut elems: Vec<Vec<Elem>> = vec![Vec::new(); nsorts];
        for (s, gs) in gens.iter().enumerate() {
            for &g in gs {
                if self.stamp[s][g] != cur {
                    self.stamp[s][g] = cur;
                    elems[s].push(g);
                }
            }
        }
        let mut total: usize = elems.iter().map(Vec::len).sum();
        let mut prev = vec![0usize; nsorts];
        let mut first_round = true;
        let sig = alg.signature();
        let mut args: Vec<Elem> = Vec::new();
        loop {
            let start: Vec<usize> = elems.iter().map(Vec::len).collect();
            for (si, sym) in sig.symbols().iter().enumerate() {
                let k = sym.args.len();
                let table = alg.table(si);
                if k == 0 {
                    if first_round {
                        let r = table[0] as usize;
                        if self.stamp[sym.out][r] != cur {
                            self.stamp[sym.out][r] = cur;
                            elems[sym.out].push(r);
                            total += 1;
                        }
                    }
                    continue;
                }
                // specialised loops for the common small arities
                if k == 1 {
                    let a = sym.args[0];
                    for p in prev[a]..start[a] {
                        let r = table[elems[a][p]] as usize;
                        if self.stamp[sym.out][r] != cur {
                            self.stamp[sym.out][r] = cur;
                            elems[sym.out].push(r);
                            total += 1;
                        }
                    }
                } else if k == 2 {
                    let (a, b) = (sym.args[0], sym.args[1]);
                    let nb = alg.size(b);
                    for p in 0..start[a] {
                        let lo = if p < prev[a] { prev[b] } else { 0 };
                        let x = elems[a][p] * nb;
                        for q in lo..start[b] {
                            let r = table[x + elems[b][q]] as usize;
                            if self.stamp[sym.out][r] != cur {
                                self.stamp[sym.out][r] = cur;
                                elems[sym.out].push(r);
                                total += 1;
                            }
                        }
                    }
                } else {
                    args.resize(k, 0);
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
                            for j in 0..k {
                                args[j] = elems[sym.args[j]][t[j]];
                            }
                            let r = table[alg.offset(si, &args)] as usize;
                            if self.stamp[sym.out][r] != cur {
                                self.stamp[sym.out][r] = cur;
                                elems[sym.out].push(r);
                                total += 1;
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
                if total > self.limit {
                    return Err(Error::BudgetExceeded {
                        what: "closure elements",
                        limit: self.limit as u64,
                    });
                }
            }
            first_round = false;
            let now: Vec<usize> = elems.iter().map(Vec::len).collect();
            if now == start {
                break;
            }
            prev = start;
        }
        Ok(elems)
    }

    /// The generated subuniverse as sorted lists.
    pub fn subuniverse(&mut self, gens: &[Vec<Elem>]) -> Result<SubUniverse> {
        Ok(SubUniverse::new(self.close(gens)?))
    }
}

/// Subuniverse of `alg` generated by `gens` (one list per sort).
pub fn generate_subalgebra(alg: &FiniteAlgebra, gens: &[Vec<Elem>]) -> Result<SubUniverse> {
    generate_subalgebra_with(alg, gens, &Budget::default())
}

pub fn generate_subalgebra_with(
    alg: &FiniteAlgebra,
    gens: &[Vec<Elem>],
    budget: &Budget,
) -> Result<SubUniverse> {
    check_gens(alg, gens)?;
    DenseCloser::new(alg, budget).subuniverse(gens)
}

fn check_gens(alg: &FiniteAlgebra, gens: &[Vec<Elem>]) -> Result<()> {
    if gens.len() != alg.sort_count() {
        return Err(Error::InvalidAlgebra(format!(
            "{} generator lists for {} sorts",
            gens.len(),
            alg.sort_count()
        )));
    }
    for (s, gs) in gens.iter().enumerate() {
        if let Some(&g) = gs.iter().find(|&&g| g >= alg.size(s)) {
            return Err(Error::InvalidAlgebra(format!(
                "generator {g} outside sort `{}`",
                alg.signature().sort_name(s)
            )));
        }
    }
    Ok(())
}

/// A generated subuniverse together with a term for each element.
#[derive(Clone, Debug)]
pub struct Generated {
    pub universe: SubUniverse,
    /// Elements per sort in discovery (breadth-first) order.
    pub discovery: Vec<Vec<Elem>>,
    /// `terms[s][i]` evaluates to `discovery[s][i]` when variable `(s, j)`
    /// is bound to the `j`-th generator of sort `s`.
    pub terms: Vec<Vec<Term>>,
}

impl Generated {
    pub fn term_for(&self, sort: usize, e: Elem) -> Option<&Term> {
        let i = self.discovery[sort].iter().position(|&x| x == e)?;
        Some(&self.terms[sort][i])
    }
}

/// Like [`generate_subalgebra`] but also records a shortest-first term for
/// every element.
pub fn generate_with_terms(
    alg: &FiniteAlgebra,
    gens: &[Vec<Elem>],
    budget: &Budget,
) -> Result<Generated> {
    check_gens(alg, gens)?;
    let g32: Vec<Vec<u32>> = gens
        .iter()
        .map(|v| v.iter().map(|&e| e as u32).collect())
        .collect();
    let c = close(alg, g32, &CloseOptions::from_budget(budget))?;
    let discovery: Vec<Vec<Elem>> = c
        .elems
        .iter()
        .map(|v| v.iter().map(|&e| e as Elem).collect())
        .collect();
    Ok(Generated {
        universe: SubUniverse::new(discovery.clone()),
        terms: c.terms(),
        discovery,
    })
}

/// The subalgebra on `sub`, with the inclusion maps (new index to old).
///
/// Fails if `sub` is not closed or leaves a sort empty.
pub fn subalgebra(
    alg: &FiniteAlgebra,
    sub: &SubUniverse,
) -> Result<(FiniteAlgebra, Vec<Vec<Elem>>)> {
    if let Some(s) = sub.subsets().iter().position(Vec::is_empty) {
        return Err(Error::EmptySortUnreachable(
            alg.signature().sort_name(s).to_string(),
        ));
    }
    if !is_subuniverse(alg, sub) {
        return Err(Error::InvalidAlgebra("subset is not closed under the operations".into()));
    }
    let mut back: Vec<Vec<u32>> = alg.sizes().iter().map(|&n| vec![u32::MAX; n]).collect();
    for (s, v) in sub.subsets().iter().enumerate() {
        for (i, &e) in v.iter().enumerate() {
            back[s][e] = i as u32;
        }
    }
    let incl: Vec<Vec<Elem>> = sub.subsets().to_vec();
    let mut args = Vec::new();
    let b = FiniteAlgebra::from_fn_shared(alg.shared_signature().clone(), sub.sizes(), |si, a| {
        let sym = alg.signature().symbol(si);
        args.clear();
        args.extend(a.iter().zip(&sym.args).map(|(&x, &srt)| incl[srt][x]));
        back[sym.out][alg.apply(si, &args)] as Elem
    })?;
    let b = match alg.labels() {
        Some(l) => b.with_labels(
            incl.iter()
                .enumerate()
                .map(|(s, v)| v.iter().map(|&e| l[s][e].clone()).collect())
                .collect(),
        )?,
        None => b,
    };
    Ok((b, incl))
}

/// A generating set found greedily: scanning each sort in index order, an
/// element is kept when it is not already generated by the kept ones.
pub fn greedy_generating_set(alg: &FiniteAlgebra, budget: &Budget) -> Result<Vec<Vec<Elem>>> {
    let mut closer = DenseCloser::new(alg, budget);
    let mut gens: Vec<Vec<Elem>> = vec![Vec::new(); alg.sort_count()];
    let mut have: Vec<Vec<bool>> = alg.sizes().iter().map(|&n| vec![false; n]).collect();
    for s in 0..alg.sort_count() {
        for e in 0..alg.size(s) {
            if have[s][e] {
                continue;
            }
            gens[s].push(e);
            let cl = closer.close(&gens)?;
            for (t, v) in cl.iter().enumerate() {
                for &x in v {
                    have[t][x] = true;
                }
            }
        }
    }
    Ok(gens)
}

/// A generating set of minimum total size, searched by increasing size
/// over lexicographic combinations of all elements; falls back to
/// [`greedy_generating_set`] after `max_closures` closures.
pub fn small_generating_set(alg: &FiniteAlgebra, budget: &Budget, max_closures: usize) -> Result<Vec<Vec<Elem>>> {
    let greedy = greedy_generating_set(alg, budget)?;
    let best = greedy.iter().map(Vec::len).sum::<usize>();
    let all: Vec<(usize, Elem)> = alg.elements().collect();
    let mut closer = DenseCloser::new(alg, budget);
    let mut tried = 0usize;
    for k in 1..best {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            tried += 1;
            if tried > max_closures {
                return Ok(greedy);
            }
            let mut gens: Vec<Vec<Elem>> = vec![Vec::new(); alg.sort_count()];
            for &i in &idx {
                gens[all[i].0].push(all[i].1);
            }
            let cl = closer.close(&gens)?;
            if cl.iter().zip(alg.sizes()).all(|(v, &n)| v.len() == n) {
                return Ok(gens);
            }
            // next combination
            let mut i = k;
            while i > 0 && idx[i - 1] == all.len() - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(greedy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6_plus() -> FiniteAlgebra {
        FiniteAlgebra::from_fn(Signature::single_sorted(&[("+", 2)]), vec![6], |_, a| {
            (a[0] + a[1]) % 6
        })
        .unwrap()
    }

    #[test]
    fn cyclic_subgroups() {
        let a = z6_plus();
        assert_eq!(generate_subalgebra(&a, &[vec![2]]).unwrap().subset(0), &[0, 2, 4]);
        assert_eq!(generate_subalgebra(&a, &[vec![3]]).unwrap().subset(0), &[0, 3]);
        assert_eq!(generate_subalgebra(&a, &[vec![1]]).unwrap().total_size(), 6);
        assert!(generate_subalgebra(&a, &[vec![]]).unwrap().subset(0).is_empty());
    }

    #[test]
    fn terms_evaluate_to_their_elements() {
        let a = z6_plus();
        let g = generate_with_terms(&a, &[vec![2]], &Budget::default()).unwrap();
        for (i, &e) in g.discovery[0].iter().enumerate() {
            let env = super::super::term::Assignment::new().with(super::super::term::Var { sort: 0, index: 0 }, 2);
            assert_eq!(super::super::term::eval_term(&a, &g.terms[0][i], &env).unwrap(), e);
        }
        assert_eq!(g.terms[0][0], Term::var(0, 0));
    }

    #[test]
    fn two_sorted_closure_reaches_other_sort() {
        // G = Z2 acting on S = {0,1,2} by swapping 0 and 1
        let a = FiniteAlgebra::from_fn(Signature::tau(), vec![2, 3], |_, x| {
            if x[0] == 1 && x[1] < 2 {
                1 - x[1]
            } else {
                x[1]
            }
        })
        .unwrap();
        let u = generate_subalgebra(&a, &[vec![1], vec![0]]).unwrap();
        assert_eq!(u.subsets(), &[vec![1], vec![0, 1]]);
        let (b, incl) = subalgebra(&a, &u).unwrap();
        assert_eq!(b.sizes(), &[1, 2]);
        assert_eq!(incl[1], vec![0, 1]);
        let empty = generate_subalgebra(&a, &[vec![1], vec![]]).unwrap();
        assert!(matches!(subalgebra(&a, &empty), Err(Error::EmptySortUnreachable(_))));
    }

    #[test]
    fn recorded_tables_match_the_algebra() {
        let a = z6_plus();
        let c = close(
            &a,
            vec![vec![2]],
            &CloseOptions {
                max_elements: 100,
                max_work: 1000,
                record_tables: true,
            },
        )
        .unwrap();
        let t = c.tables.as_ref().unwrap();
        let n = c.elems[0].len();
        for i in 0..n {
            for j in 0..n {
                let r = t[0][i * n + j] as usize;
                assert_eq!(c.elems[0][r], (c.elems[0][i] + c.elems[0][j]) % 6);
            }
        }
    }

    #[test]
    fn greedy_generators_generate() {
        let a = z6_plus();
        let g = greedy_generating_set(&a, &Budget::default()).unwrap();
        assert_eq!(g, vec![vec![0, 1]]);
        assert_eq!(generate_subalgebra(&a, &g).unwrap().total_size(), 6);
    }

    #[test]
    fn budget_is_enforced() {
        let a = z6_plus();
        let b = Budget {
            max_elements: 3,
            ..Budget::default()
        };
        assert!(matches!(
            generate_subalgebra_with(&a, &[vec![1]], &b),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
