use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::finite::{Elem, FiniteAlgebra};
use super::signature::Signature;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A typed variable: `index` counts within its sort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub sort: usize,
    pub index: usize,
}

impl Var {
    pub fn new(sort: usize, index: usize) -> Var {
        Var { sort, index }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::terms::var_name(*self))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(usize, Vec<Term>),
}

impl Term {
    pub fn var(sort: usize, index: usize) -> Term {
        Term::Var(Var::new(sort, index))
    }

    pub fn app(symbol: usize, children: Vec<Term>) -> Term {
        Term::App(symbol, children)
    }

    /// Sort of the term, checking that every application is well sorted.
    pub fn sort(&self, sig: &Signature) -> Result<usize> {
        match self {
            Term::Var(v) => {
                if v.sort >= sig.sort_count() {
                    Err(Error::SortMismatch(format!("variable sort {} out of range", v.sort)))
                } else {
                    Ok(v.sort)
                }
            }
            Term::App(s, children) => {
                let sym = sig
                    .symbols()
                    .get(*s)
                    .ok_or_else(|| Error::UnknownSymbol(format!("#{s}")))?;
                if sym.args.len() != children.len() {
                    return Err(Error::ArityMismatch {
                        symbol: sym.name.clone(),
                        expected: sym.args.len(),
                        got: children.len(),
                    });
                }
                for (i, (c, &want)) in children.iter().zip(&sym.args).enumerate() {
                    let got = c.sort(sig)?;
                    if got != want {
                        return Err(Error::SortMismatch(format!(
                            "argument {i} of `{}` has sort {} but {} is required",
                            sym.name,
                            sig.sort_name(got),
                            sig.sort_name(want)
                        )));
                    }
                }
                Ok(sym.out)
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, ch) => ch.iter().for_each(|c| c.collect_vars(out)),
        }
    }

    /// Number of symbol occurrences plus variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, ch) => 1 + ch.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, ch) => 1 + ch.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Replaces variables according to `f`.
    pub fn substitute(&self, f: &impl Fn(Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::App(s, ch) => Term::App(*s, ch.iter().map(|c| c.substitute(f)).collect()),
        }
    }
}

/// An equation `lhs ≈ rhs` between terms of one sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Identity {
        Identity { lhs, rhs }
    }

    pub fn sort(&self, sig: &Signature) -> Result<usize> {
        let l = self.lhs.sort(sig)?;
        let r = self.rhs.sort(sig)?;
        if l != r {
            return Err(Error::SortMismatch(format!(
                "sides have sorts {} and {}",
                sig.sort_name(l),
                sig.sort_name(r)
            )));
        }
        Ok(l)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }
}

/// Values for typed variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment(pub BTreeMap<Var, Elem>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with(mut self, v: Var, e: Elem) -> Assignment {
        self.0.insert(v, e);
        self
    }

    pub fn get(&self, v: Var) -> Option<Elem> {
        self.0.get(&v).copied()
    }

    pub fn insert(&mut self, v: Var, e: Elem) {
        self.0.insert(v, e);
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}={e}")?;
        }
        write!(f, "}}")
    }
}

/// Evaluates `t` in `alg` under `env`.
pub fn eval_term(alg: &FiniteAlgebra, t: &Term, env: &Assignment) -> Result<Elem> {
    t.sort(alg.signature())?;
    eval_checked(alg, t, env)
}

fn eval_checked(alg: &FiniteAlgebra, t: &Term, env: &Assignment) -> Result<Elem> {
    match t {
        Term::Var(v) => {
            let e = env
                .get(*v)
                .ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
            if e >= alg.size(v.sort) {
                return Err(Error::SortMismatch(format!(
                    "{v} is bound to {e}, outside sort of size {}",
                    alg.size(v.sort)
                )));
            }
            Ok(e)
        }
        Term::App(s, ch) => {
            let mut args = Vec::with_capacity(ch.len());
            for c in ch {
                args.push(eval_checked(alg, c, env)?);
            }
            Ok(alg.apply(*s, &args))
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Instr {
    Load(u32),
    Apply(u32),
}

/// A term flattened to postfix code over numbered variable slots.
#[derive(Clone, Debug)]
pub(crate) struct CompiledTerm {
    code: Vec<Instr>,
}

impl CompiledTerm {
    pub(crate) fn compile(t: &Term, slot: &impl Fn(Var) -> usize) -> CompiledTerm {
        let mut code = Vec::with_capacity(t.size());
        fn go(t: &Term, slot: &impl Fn(Var) -> usize, code: &mut Vec<Instr>) {
            match t {
                Term::Var(v) => code.push(Instr::Load(slot(*v) as u32)),
                Term::App(s, ch) => {
                    for c in ch {
                        go(c, slot, code);
                    }
                    code.push(Instr::Apply(*s as u32));
                }
            }
        }
        go(t, slot, &mut code);
        CompiledTerm { code }
    }

    /// Evaluates with slot values `vals`, using `stack` as scratch space.
    #[inline]
    pub(crate) fn eval(&self, alg: &FiniteAlgebra, vals: &[Elem], stack: &mut Vec<Elem>) -> Elem {
        stack.clear();
        let sig = alg.signature();
        for ins in &self.code {
            match *ins {
                Instr::Load(i) => stack.push(vals[i as usize]),
                Instr::Apply(s) => {
                    let s = s as usize;
                    let sym = sig.symbol(s);
                    let k = sym.args.len();
                    let base = stack.len() - k;
                    let mut idx = 0;
                    for (j, &sort) in sym.args.iter().enumerate() {
                        idx = idx * alg.size(sort) + stack[base + j];
                    }
                    stack.truncate(base);
                    stack.push(alg.table(s)[idx] as Elem);
                }
            }
        }
        stack[0]
    }
}

/// Outcome of an exhaustive identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Holds,
    Fails(Assignment),
}

impl Check {
    pub fn is_holds(&self) -> bool {
        matches!(self, Check::Holds)
    }
}

/// Checks an identity over every assignment of its variables.
pub fn holds(alg: &FiniteAlgebra, id: &Identity) -> Result<Check> {
    holds_with(alg, id, &Budget::default())
}

pub fn holds_with(alg: &FiniteAlgebra, id: &Identity, budget: &Budget) -> Result<Check> {
    id.sort(alg.signature())?;
    let vars: Vec<Var> = id.vars().into_iter().collect();
    let radices: Vec<usize> = vars.iter().map(|v| alg.size(v.sort)).collect();
    let total = radices
        .iter()
        .try_fold(1u64, |acc, &r| acc.checked_mul(r as u64))
        .unwrap_or(u64::MAX);
    budget.check_assignments(total)?;
    let slot = |v: Var| vars.binary_search(&v).expect("variable collected");
    let lhs = CompiledTerm::compile(&id.lhs, &slot);
    let rhs = CompiledTerm::compile(&id.rhs, &slot);
    let mut vals = vec![0; vars.len()];
    let mut stack = Vec::new();
    loop {
        if lhs.eval(alg, &vals, &mut stack) != rhs.eval(alg, &vals, &mut stack) {
            let witness = vars.iter().copied().zip(vals.iter().copied()).collect();
            return Ok(Check::Fails(Assignment(witness)));
        }
        // odometer, last variable fastest
        let mut i = vals.len();
        loop {
            if i == 0 {
                return Ok(Check::Holds);
            }
            i -= 1;
            vals[i] += 1;
            if vals[i] < radices[i] {
                break;
            }
            vals[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn left_zero() -> FiniteAlgebra {
        // d(x, y) = x on three elements, f = successor mod 3
        FiniteAlgebra::from_fn(Signature::tau_star(), vec![3], |s, a| match s {
            0 => a[0],
            _ => (a[0] + 1) % 3,
        })
        .unwrap()
    }

    #[test]
    fn eval_var_returns_binding() {
        let a = left_zero();
        let env = Assignment::new().with(Var::new(0, 4), 2);
        assert_eq!(eval_term(&a, &Term::var(0, 4), &env).unwrap(), 2);
    }

    #[test]
    fn eval_errors() {
        let a = left_zero();
        let t = Term::app(1, vec![Term::var(0, 0)]);
        assert!(matches!(
            eval_term(&a, &t, &Assignment::new()),
            Err(Error::UnboundVariable(_))
        ));
        let bad = Term::app(1, vec![Term::var(0, 0), Term::var(0, 1)]);
        assert!(matches!(
            eval_term(&a, &bad, &Assignment::new()),
            Err(Error::ArityMismatch { .. })
        ));
        let env = Assignment::new().with(Var::new(0, 0), 7);
        assert!(matches!(eval_term(&a, &t, &env), Err(Error::SortMismatch(_))));
    }

    #[test]
    fn holds_reports_witness() {
        let a = left_zero();
        let x = Term::var(0, 0);
        let y = Term::var(0, 1);
        let idem = Identity::new(Term::app(0, vec![x.clone(), x.clone()]), x.clone());
        assert!(holds(&a, &idem).unwrap().is_holds());
        let comm = Identity::new(
            Term::app(0, vec![x.clone(), y.clone()]),
            Term::app(0, vec![y.clone(), x.clone()]),
        );
        match holds(&a, &comm).unwrap() {
            Check::Fails(w) => {
                let l = eval_term(&a, &comm.lhs, &w).unwrap();
                let r = eval_term(&a, &comm.rhs, &w).unwrap();
                assert_ne!(l, r);
            }
            Check::Holds => panic!("commutativity should fail"),
        }
    }

    #[test]
    fn holds_respects_budget() {
        let a = left_zero();
        let vars: Vec<Term> = (0..4).map(|i| Term::var(0, i)).collect();
        let id = Identity::new(
            Term::app(0, vec![vars[0].clone(), vars[1].clone()]),
            Term::app(0, vec![vars[2].clone(), vars[3].clone()]),
        );
        let tight = Budget {
            max_assignments: 80,
            ..Budget::default()
        };
        assert!(matches!(
            holds_with(&a, &id, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
