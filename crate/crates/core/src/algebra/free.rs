//! Relatively free algebras of `V(A)`.
//!
//! The free algebra on given generators is the subalgebra of `A^N` generated
//! by the projection vectors, where `N` counts the sort-correct assignments
//! of the generators into `A`. Assignments are ordered lexicographically with
//! variables taken sort-major, so the last variable varies fastest.

use super::closure::{close, Ambient, CloseOptions, Origin};
use super::finite::{Elem, FiniteAlgebra};
use super::signature::Signature;
use super::term::{Assignment, Identity, Term, Var};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// `A^n` with elements stored as evaluation vectors.
pub(crate) struct Power<'a> {
    pub alg: &'a FiniteAlgebra,
    pub n: usize,
}

impl Ambient for Power<'_> {
    type Elem = Box<[u32]>;

    fn signature(&self) -> &Signature {
        self.alg.signature()
    }

    fn apply(&self, symbol: usize, args: &[&Box<[u32]>]) -> Box<[u32]> {
        let sym = self.alg.signature().symbol(symbol);
        let table = self.alg.table(symbol);
        match args.len() {
            0 => vec![table[0]; self.n].into_boxed_slice(),
            1 => args[0].iter().map(|&a| table[a as usize]).collect(),
            2 => {
                let nb = self.alg.size(sym.args[1]);
                args[0]
                    .iter()
                    .zip(args[1].iter())
                    .map(|(&a, &b)| table[a as usize * nb + b as usize])
                    .collect()
            }
            _ => (0..self.n)
                .map(|i| {
                    let mut idx = 0;
                    for (v, &srt) in args.iter().zip(&sym.args) {
                        idx = idx * self.alg.size(srt) + v[i] as usize;
                    }
                    table[idx]
                })
                .collect(),
        }
    }

    fn cost(&self) -> u64 {
        self.n as u64
    }
}

/// The `V(A)`-free algebra on a number of generators per sort.
#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    pub algebra: FiniteAlgebra,
    /// `generators[s][i]` is the element designated by variable `(s, i)`.
    pub generators: Vec<Vec<Elem>>,
    /// Shortest-first representative term of every element.
    pub terms: Vec<Vec<Term>>,
    /// Number of assignments, i.e. the exponent of the ambient power.
    pub exponent: usize,
    /// Evaluation vector of every element.
    pub vectors: Vec<Vec<Box<[u32]>>>,
    origins: Vec<Vec<Origin>>,
    order: Vec<(u32, u32)>,
}

/// A table entry of the free algebra that a candidate map fails to respect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub symbol: usize,
    pub args: Vec<Elem>,
}

impl FreeAlgebra {
    pub fn generator_counts(&self) -> Vec<usize> {
        self.generators.iter().map(Vec::len).collect()
    }

    /// Variables of the generators, sort-major.
    pub fn variables(&self) -> Vec<Var> {
        self.generators
            .iter()
            .enumerate()
            .flat_map(|(s, g)| (0..g.len()).map(move |i| Var::new(s, i)))
            .collect()
    }

    /// Images of every element under the term-evaluation map that sends
    /// generator `(s, i)` to `values[s][i]` in `target`.
    pub fn images(&self, target: &FiniteAlgebra, values: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
        let mut img: Vec<Vec<Elem>> = self
            .algebra
            .sizes()
            .iter()
            .map(|&n| vec![0; n])
            .collect();
        let sig = self.algebra.signature();
        let mut args = Vec::new();
        for &(s, p) in &self.order {
            let (s, p) = (s as usize, p as usize);
            img[s][p] = match &self.origins[s][p] {
                Origin::Generator(i) => values[s][*i],
                Origin::App(si, a) => {
                    args.clear();
                    args.extend(
                        a.iter()
                            .zip(&sig.symbol(*si).args)
                            .map(|(&q, &srt)| img[srt][q as usize]),
                    );
                    target.apply(*si, &args)
                }
            };
        }
        img
    }

    /// Whether the map sending generator `(s, i)` to `values[s][i]` extends to
    /// a homomorphism into `target`; returns the images or the first table
    /// entry (in table order) where it breaks.
    pub fn extend_map(
        &self,
        target: &FiniteAlgebra,
        values: &[Vec<Elem>],
    ) -> std::result::Result<Vec<Vec<Elem>>, Violation> {
        // generators sharing an element must share an image
        for (s, g) in self.generators.iter().enumerate() {
            for (i, &e) in g.iter().enumerate() {
                let first = g.iter().position(|&x| x == e).expect("present");
                if values[s][first] != values[s][i] {
                    return Err(Violation {
                        symbol: usize::MAX,
                        args: vec![s, i],
                    });
                }
            }
        }
        let img = self.images(target, values);
        let sig = self.algebra.signature();
        let mut timg = Vec::new();
        for (si, sym) in sig.symbols().iter().enumerate() {
            let table = self.algebra.table(si);
            let radices = self.algebra.radices(si);
            let mut bad = None;
            let mut n = 0;
            super::finite::for_each_tuple(&radices, |t| {
                if bad.is_none() {
                    timg.clear();
                    timg.extend(t.iter().zip(&sym.args).map(|(&x, &s)| img[s][x]));
                    if target.apply(si, &timg) != img[sym.out][table[n] as usize] {
                        bad = Some(t.to_vec());
                    }
                }
                n += 1;
            });
            if let Some(args) = bad {
                return Err(Violation { symbol: si, args });
            }
        }
        Ok(img)
    }

    /// The identity of `A` that a [`Violation`] breaks, with the failing
    /// assignment built from `values`.
    pub fn violated_identity(&self, v: &Violation, values: &[Vec<Elem>]) -> (Identity, Assignment) {
        let id = if v.symbol == usize::MAX {
            let (s, i) = (v.args[0], v.args[1]);
            let first = self.generators[s]
                .iter()
                .position(|&x| x == self.generators[s][i])
                .expect("present");
            Identity::new(Term::var(s, first), Term::var(s, i))
        } else {
            let sym = self.algebra.signature().symbol(v.symbol);
            let lhs = Term::App(
                v.symbol,
                v.args
                    .iter()
                    .zip(&sym.args)
                    .map(|(&a, &s)| self.terms[s][a].clone())
                    .collect(),
            );
            let r = self.algebra.apply(v.symbol, &v.args);
            Identity::new(lhs, self.terms[sym.out][r].clone())
        };
        let mut env = Assignment::new();
        for var in self.variables() {
            env.insert(var, values[var.sort][var.index]);
        }
        (id, env)
    }
}

/// Free algebra of `V(alg)` on `gens_per_sort[s]` generators of each sort.
pub fn free_algebra(alg: &FiniteAlgebra, gens_per_sort: &[usize]) -> Result<FreeAlgebra> {
    free_algebra_with(alg, gens_per_sort, &Budget::default())
}

pub fn free_algebra_with(
    alg: &FiniteAlgebra,
    gens_per_sort: &[usize],
    budget: &Budget,
) -> Result<FreeAlgebra> {
    if gens_per_sort.len() != alg.sort_count() {
        return Err(Error::SortMismatch(format!(
            "{} generator counts for {} sorts",
            gens_per_sort.len(),
            alg.sort_count()
        )));
    }
    let radices: Vec<usize> = gens_per_sort
        .iter()
        .enumerate()
        .flat_map(|(s, &k)| std::iter::repeat(alg.size(s)).take(k))
        .collect();
    let n = radices
        .iter()
        .try_fold(1usize, |acc, &r| acc.checked_mul(r))
        .filter(|&n| n as u64 <= budget.max_assignments)
        .ok_or(Error::BudgetExceeded {
            what: "free algebra assignments",
            limit: budget.max_assignments,
        })?;
    let mut gens: Vec<Vec<Box<[u32]>>> = vec![Vec::new(); alg.sort_count()];
    let mut stride = n;
    let mut var = 0;
    for (s, &k) in gens_per_sort.iter().enumerate() {
        for _ in 0..k {
            let r = radices[var];
            stride /= r;
            gens[s].push((0..n).map(|a| ((a / stride) % r) as u32).collect());
            var += 1;
        }
    }
    let amb = Power { alg, n };
    let opts = CloseOptions {
        max_elements: budget.max_elements,
        max_work: budget.max_assignments.saturating_mul(64),
        record_tables: true,
    };
    let c = close(&amb, gens, &opts)?;
    if let Some(s) = c.elems.iter().position(Vec::is_empty) {
        return Err(Error::EmptySortUnreachable(
            alg.signature().sort_name(s).to_string(),
        ));
    }
    let terms = c.terms();
    let sizes = c.sizes();
    let tables = c.tables.clone().expect("tables recorded");
    let labels: Vec<Vec<String>> = terms
        .iter()
        .map(|v| v.iter().map(|t| crate::terms::format_term(t, alg.signature())).collect())
        .collect();
    let algebra = FiniteAlgebra::with_shared(alg.shared_signature().clone(), sizes, tables)?
        .with_labels(labels)?;
    Ok(FreeAlgebra {
        algebra,
        generators: c
            .generators
            .iter()
            .map(|v| v.iter().map(|&p| p as Elem).collect())
            .collect(),
        terms,
        exponent: n,
        vectors: c.elems,
        origins: c.origins,
        order: c.order,
    })
}

/// A finite basis for the identities of `alg` in at most `n` variables of
/// each sort: every table entry of the free algebra on `n` generators per
/// sort, written with representative terms, plus the generator coincidences.
pub fn vn_basis(alg: &FiniteAlgebra, n: usize) -> Result<Vec<Identity>> {
    vn_basis_with(alg, &vec![n; alg.sort_count()], &Budget::default())
}

pub fn vn_basis_with(
    alg: &FiniteAlgebra,
    gens_per_sort: &[usize],
    budget: &Budget,
) -> Result<Vec<Identity>> {
    let f = free_algebra_with(alg, gens_per_sort, budget)?;
    Ok(basis_of(&f))
}

/// The identities described in [`vn_basis`] for an already built free algebra.
pub fn basis_of(f: &FreeAlgebra) -> Vec<Identity> {
    let mut out = Vec::new();
    for (s, g) in f.generators.iter().enumerate() {
        for (i, &e) in g.iter().enumerate() {
            let v = Term::var(s, i);
            if f.terms[s][e] != v {
                out.push(Identity::new(v, f.terms[s][e].clone()));
            }
        }
    }
    let sig = f.algebra.signature();
    for (si, sym) in sig.symbols().iter().enumerate() {
        let table = f.algebra.table(si);
        let mut n = 0;
        super::finite::for_each_tuple(&f.algebra.radices(si), |t| {
            let lhs = Term::App(
                si,
                t.iter()
                    .zip(&sym.args)
                    .map(|(&a, &s)| f.terms[s][a].clone())
                    .collect(),
            );
            let rhs = &f.terms[sym.out][table[n] as usize];
            if &lhs != rhs {
                out.push(Identity::new(lhs, rhs.clone()));
            }
            n += 1;
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::holds;

    fn z3() -> FiniteAlgebra {
        FiniteAlgebra::from_fn(Signature::single_sorted(&[("+", 2)]), vec![3], |_, a| {
            (a[0] + a[1]) % 3
        })
        .unwrap()
    }

    #[test]
    fn free_z3_module() {
        // ax + by over Z3, with 0 = 3x reachable
        let f = free_algebra(&z3(), &[2]).unwrap();
        assert_eq!(f.algebra.sizes(), &[9]);
        assert_eq!(f.exponent, 9);
        assert_eq!(f.generators, vec![vec![0, 1]]);
    }

    #[test]
    fn terms_evaluate_to_vectors() {
        let a = z3();
        let f = free_algebra(&a, &[2]).unwrap();
        for (i, t) in f.terms[0].iter().enumerate() {
            for k in 0..f.exponent {
                let env = Assignment::new()
                    .with(Var::new(0, 0), k / 3)
                    .with(Var::new(0, 1), k % 3);
                assert_eq!(
                    crate::algebra::eval_term(&a, t, &env).unwrap(),
                    f.vectors[0][i][k] as usize
                );
            }
        }
    }

    #[test]
    fn basis_identities_hold() {
        let a = z3();
        for id in vn_basis(&a, 2).unwrap() {
            assert!(holds(&a, &id).unwrap().is_holds(), "{id:?}");
        }
    }

    #[test]
    fn one_element_algebra() {
        let a = FiniteAlgebra::from_fn(Signature::single_sorted(&[("f", 1)]), vec![1], |_, _| 0)
            .unwrap();
        let f = free_algebra(&a, &[2]).unwrap();
        assert_eq!(f.algebra.sizes(), &[1]);
        let b = vn_basis(&a, 2).unwrap();
        assert!(b.contains(&Identity::new(Term::var(0, 1), Term::var(0, 0))));
    }

    #[test]
    fn extension_check() {
        let a = z3();
        let f = free_algebra(&a, &[1]).unwrap();
        // x ↦ 1 in Z3 extends; in a non-model it must fail
        assert!(f.extend_map(&a, &[vec![1]]).is_ok());
        let bad = FiniteAlgebra::from_fn(Signature::single_sorted(&[("+", 2)]), vec![2], |_, x| {
            1 - x[0]
        })
        .unwrap();
        let v = f.extend_map(&bad, &[vec![1]]).unwrap_err();
        let (id, env) = f.violated_identity(&v, &[vec![1]]);
        let l = crate::algebra::eval_term(&bad, &id.lhs, &env).unwrap();
        let r = crate::algebra::eval_term(&bad, &id.rhs, &env).unwrap();
        assert_ne!(l, r);
    }
}
