use std::fmt;

use crate::error::{Error, Result};

/// An operation symbol with its argument sorts and result sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub args: Vec<usize>,
    pub out: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, args: Vec<usize>, out: usize) -> Symbol {
        Symbol {
            name: name.into(),
            args,
            out,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

/// A multi-sorted signature: named sorts plus typed operation symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    sorts: Vec<String>,
    symbols: Vec<Symbol>,
}

/// Symbol of the infix binary operation of automatic algebras.
pub const DOT: &str = ".";

impl Signature {
    pub fn new(sorts: Vec<String>, symbols: Vec<Symbol>) -> Result<Signature> {
        if sorts.is_empty() {
            return Err(Error::InvalidAlgebra("signature needs at least one sort".into()));
        }
        for (i, s) in sorts.iter().enumerate() {
            if sorts[..i].contains(s) {
                return Err(Error::InvalidAlgebra(format!("duplicate sort name `{s}`")));
            }
        }
        for (i, sym) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|o| o.name == sym.name) {
                return Err(Error::InvalidAlgebra(format!(
                    "duplicate symbol name `{}`",
                    sym.name
                )));
            }
            if sym.out >= sorts.len() || sym.args.iter().any(|&a| a >= sorts.len()) {
                return Err(Error::InvalidAlgebra(format!(
                    "symbol `{}` refers to a sort out of range",
                    sym.name
                )));
            }
        }
        Ok(Signature { sorts, symbols })
    }

    /// One sort named `A` carrying the given `(name, arity)` symbols.
    pub fn single_sorted(symbols: &[(&str, usize)]) -> Signature {
        let symbols = symbols
            .iter()
            .map(|&(n, k)| Symbol::new(n, vec![0; k], 0))
            .collect();
        Signature::new(vec!["A".into()], symbols).expect("well-formed single-sorted signature")
    }

    /// The two-sorted action signature: sorts `G`, `S` and `s : G × S → S`.
    pub fn tau() -> Signature {
        Signature::new(
            vec!["G".into(), "S".into()],
            vec![Symbol::new("s", vec![0, 1], 1)],
        )
        .expect("well-formed")
    }

    /// The one-sorted counterpart of [`Signature::tau`]: binary `d`, unary `f`.
    pub fn tau_star() -> Signature {
        Signature::single_sorted(&[("d", 2), ("f", 1)])
    }

    /// The signature of automatic algebras: one binary symbol written infix as `.`.
    pub fn automatic() -> Signature {
        Signature::single_sorted(&[(DOT, 2)])
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    pub fn sort_names(&self) -> &[String] {
        &self.sorts
    }

    pub fn sort_name(&self, sort: usize) -> &str {
        &self.sorts[sort]
    }

    pub fn sort_index(&self, name: &str) -> Option<usize> {
        self.sorts.iter().position(|s| s == name)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &Symbol {
        &self.symbols[i]
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sorts {}; ", self.sorts.join(", "))?;
        for (i, sym) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let args: Vec<&str> = sym.args.iter().map(|&a| self.sorts[a].as_str()).collect();
            write!(f, "{}: {} -> {}", sym.name, args.join(" x "), self.sorts[sym.out])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_sorts() {
        assert!(Signature::new(vec!["A".into(), "A".into()], vec![]).is_err());
        assert!(Signature::new(vec!["A".into()], vec![Symbol::new("f", vec![1], 0)]).is_err());
        assert!(Signature::new(
            vec!["A".into()],
            vec![Symbol::new("f", vec![0], 0), Symbol::new("f", vec![], 0)]
        )
        .is_err());
        assert!(Signature::new(vec![], vec![]).is_err());
    }

    #[test]
    fn builtins() {
        let tau = Signature::tau();
        assert_eq!(tau.sort_count(), 2);
        assert_eq!(tau.symbol(0).args, vec![0, 1]);
        assert_eq!(tau.symbol(0).out, 1);
        let star = Signature::tau_star();
        assert_eq!(star.symbol_index("f"), Some(1));
        assert_eq!(star.symbol(0).arity(), 2);
        assert_eq!(Signature::automatic().symbol(0).name, DOT);
    }
}
