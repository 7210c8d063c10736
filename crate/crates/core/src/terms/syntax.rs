//! Concrete syntax for terms and identities.
//!
//! ```text
//! term     := operand [ "." term ]
//! operand  := "(" term ")" | "[" { var } "]" var | name "(" term { "," term } ")" | name
//! identity := term ( "=~" | "≈" ) term
//! ```
//!
//! `.` is right associative and denotes the binary symbol named `.`;
//! `[x0 x1 x2]y` abbreviates `x0 . (x1 . (x2 . y))`. A bare name is a
//! variable unless it names a nullary symbol.
//!
//! Canonical variable names carry their sort: `x<i>` (sort 0), `y<i>`
//! (sort 1), `z<i>` (sort 2), then `u`, `v`, `w`, and `s<k>v<i>` beyond.
//! Any other name gets its sort from the argument position it occupies
//! (sort 0 if unconstrained) and the smallest index of that sort not
//! otherwise used, in order of first occurrence.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::{Identity, Signature, Term, Var, DOT};
use crate::error::{Error, Result};

const LETTERS: [char; 6] = ['x', 'y', 'z', 'u', 'v', 'w'];

/// Canonical name of a typed variable.
pub fn var_name(v: Var) -> String {
    match LETTERS.get(v.sort) {
        Some(c) => format!("{c}{}", v.index),
        None => format!("s{}v{}", v.sort, v.index),
    }
}

fn canonical(name: &str, sig: &Signature) -> Option<Var> {
    let mut chars = name.chars();
    let first = chars.next()?;
    let rest = chars.as_str();
    let (sort, digits) = if first == 's' && rest.contains('v') {
        let (k, i) = rest.split_once('v')?;
        (parse_digits(k)?, i)
    } else {
        (LETTERS.iter().position(|&c| c == first)?, rest)
    };
    if LETTERS.get(sort).is_some() && first == 's' {
        return None;
    }
    let index = parse_digits(digits)?;
    (sort < sig.sort_count()).then_some(Var::new(sort, index))
}

fn parse_digits(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
        return None;
    }
    s.parse().ok()
}

#[derive(Clone, Debug)]
enum Raw {
    Name(String),
    App(usize, Vec<Raw>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    sig: &'a Signature,
    dot: Option<usize>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, sig: &'a Signature) -> Parser<'a> {
        Parser {
            src,
            pos: 0,
            sig,
            dot: sig.symbol_index(DOT),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_alphabetic() || c == '_' => {}
            _ => return self.err("expected a name"),
        }
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '\'' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn dot_symbol(&self) -> Result<usize> {
        let d = self.dot.ok_or_else(|| Error::UnknownSymbol(DOT.into()))?;
        let arity = self.sig.symbol(d).arity();
        if arity != 2 {
            return Err(Error::ArityMismatch {
                symbol: DOT.into(),
                expected: arity,
                got: 2,
            });
        }
        Ok(d)
    }

    fn term(&mut self) -> Result<Raw> {
        let left = self.operand()?;
        if self.eat('.') {
            let d = self.dot_symbol()?;
            let right = self.term()?;
            return Ok(Raw::App(d, vec![left, right]));
        }
        Ok(left)
    }

    fn operand(&mut self) -> Result<Raw> {
        if self.eat('(') {
            let t = self.term()?;
            self.expect(')')?;
            return Ok(t);
        }
        if self.eat('[') {
            let mut letters = Vec::new();
            while !self.eat(']') {
                if self.peek().is_none() {
                    return self.err("unterminated word");
                }
                letters.push(Raw::Name(self.ident()?));
            }
            let mut t = Raw::Name(self.ident()?);
            if !letters.is_empty() {
                let d = self.dot_symbol()?;
                for l in letters.into_iter().rev() {
                    t = Raw::App(d, vec![l, t]);
                }
            }
            return Ok(t);
        }
        let name = self.ident()?;
        if self.eat('(') {
            let s = self
                .sig
                .symbol_index(&name)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            let mut args = Vec::new();
            if !self.eat(')') {
                loop {
                    args.push(self.term()?);
                    if self.eat(')') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
            let arity = self.sig.symbol(s).arity();
            if args.len() != arity {
                return Err(Error::ArityMismatch {
                    symbol: name,
                    expected: arity,
                    got: args.len(),
                });
            }
            return Ok(Raw::App(s, args));
        }
        if let Some(s) = self.sig.symbol_index(&name) {
            if self.sig.symbol(s).arity() == 0 {
                return Ok(Raw::App(s, Vec::new()));
            }
        }
        Ok(Raw::Name(name))
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }
}

/// Resolves names to typed variables across one or more raw terms.
struct Typing<'a> {
    sig: &'a Signature,
    sorts: HashMap<String, usize>,
    order: Vec<String>,
}

impl<'a> Typing<'a> {
    fn constrain(&mut self, raw: &Raw, want: Option<usize>) -> Result<()> {
        match raw {
            Raw::Name(n) => {
                if let Some(v) = canonical(n, self.sig) {
                    if let Some(w) = want {
                        if w != v.sort {
                            return Err(Error::SortMismatch(format!(
                                "`{n}` has sort {} but {} is required",
                                self.sig.sort_name(v.sort),
                                self.sig.sort_name(w)
                            )));
                        }
                    }
                    return Ok(());
                }
                if !self.order.contains(n) {
                    self.order.push(n.clone());
                }
                if let Some(w) = want {
                    match self.sorts.get(n) {
                        Some(&s) if s != w => {
                            return Err(Error::SortMismatch(format!(
                                "`{n}` is used at sorts {} and {}",
                                self.sig.sort_name(s),
                                self.sig.sort_name(w)
                            )))
                        }
                        _ => {
                            self.sorts.insert(n.clone(), w);
                        }
                    }
                }
                Ok(())
            }
            Raw::App(s, args) => {
                let sym = self.sig.symbol(*s);
                if let Some(w) = want {
                    if sym.out != w {
                        return Err(Error::SortMismatch(format!(
                            "`{}` yields sort {} but {} is required",
                            sym.name,
                            self.sig.sort_name(sym.out),
                            self.sig.sort_name(w)
                        )));
                    }
                }
                for (a, &srt) in args.iter().zip(&sym.args) {
                    self.constrain(a, Some(srt))?;
                }
                Ok(())
            }
        }
    }

    /// Assigns indices to non-canonical names after all constraints are in.
    fn resolve(&self, raws: &[&Raw]) -> HashMap<String, Var> {
        let mut used: BTreeSet<Var> = BTreeSet::new();
        for r in raws {
            collect_canonical(r, self.sig, &mut used);
        }
        let mut out = HashMap::new();
        for n in &self.order {
            let sort = self.sorts.get(n).copied().unwrap_or(0);
            let index = (0..)
                .find(|&i| !used.contains(&Var::new(sort, i)))
                .expect("unbounded");
            let v = Var::new(sort, index);
            used.insert(v);
            out.insert(n.clone(), v);
        }
        out
    }
}

fn collect_canonical(raw: &Raw, sig: &Signature, out: &mut BTreeSet<Var>) {
    match raw {
        Raw::Name(n) => {
            if let Some(v) = canonical(n, sig) {
                out.insert(v);
            }
        }
        Raw::App(_, args) => args.iter().for_each(|a| collect_canonical(a, sig, out)),
    }
}

fn build(raw: &Raw, sig: &Signature, names: &HashMap<String, Var>) -> Term {
    match raw {
        Raw::Name(n) => Term::Var(canonical(n, sig).unwrap_or_else(|| names[n])),
        Raw::App(s, args) => Term::App(*s, args.iter().map(|a| build(a, sig, names)).collect()),
    }
}

fn typed(raws: &[&Raw], sig: &Signature) -> Result<Vec<Term>> {
    let mut ty = Typing {
        sig,
        sorts: HashMap::new(),
        order: Vec::new(),
    };
    for r in raws {
        ty.constrain(r, None)?;
    }
    let names = ty.resolve(raws);
    Ok(raws.iter().map(|r| build(r, sig, &names)).collect())
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser::new(text, sig);
    let raw = p.term()?;
    p.finish()?;
    let t = typed(&[&raw], sig)?.pop().expect("one term");
    t.sort(sig)?;
    Ok(t)
}

/// Parses `lhs =~ rhs` (or `lhs ≈ rhs`); names are shared between sides.
pub fn parse_identity(text: &str, sig: &Signature) -> Result<Identity> {
    let (l, r, split) = match (text.find("=~"), text.find('≈')) {
        (Some(i), _) => (&text[..i], &text[i + 2..], i + 2),
        (None, Some(i)) => (&text[..i], &text[i + '≈'.len_utf8()..], i + '≈'.len_utf8()),
        (None, None) => {
            return Err(Error::Syntax {
                pos: text.len(),
                msg: "expected `=~`".into(),
            })
        }
    };
    let mut pl = Parser::new(l, sig);
    let lraw = pl.term()?;
    pl.finish()?;
    let mut pr = Parser::new(r, sig);
    let rraw = pr.term().map_err(|e| shift(e, split))?;
    pr.finish().map_err(|e| shift(e, split))?;
    let mut ts = typed(&[&lraw, &rraw], sig)?;
    let rhs = ts.pop().expect("two terms");
    let lhs = ts.pop().expect("two terms");
    let id = Identity::new(lhs, rhs);
    id.sort(sig)?;
    Ok(id)
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos: pos + by, msg },
        other => other,
    }
}

/// One identity per line; blank lines and `#` comments are skipped.
pub fn parse_identities(text: &str, sig: &Signature) -> Result<Vec<Identity>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_identity(line, sig).map_err(|e| match e {
            Error::Syntax { pos, msg } => Error::Syntax {
                pos,
                msg: format!("line {}: {msg}", n + 1),
            },
            other => other,
        })?);
    }
    Ok(out)
}

pub fn format_term(t: &Term, sig: &Signature) -> String {
    let mut s = String::new();
    write_term(t, sig, &mut s);
    s
}

fn is_dot(t: &Term, sig: &Signature) -> bool {
    matches!(t, Term::App(s, a) if a.len() == 2 && sig.symbol(*s).name == DOT)
}

fn write_term(t: &Term, sig: &Signature, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&var_name(*v)),
        Term::App(s, args) if is_dot(t, sig) => {
            let _ = s;
            for (i, a) in args.iter().enumerate() {
                if i == 1 {
                    out.push_str(" . ");
                }
                if is_dot(a, sig) {
                    out.push('(');
                    write_term(a, sig, out);
                    out.push(')');
                } else {
                    write_term(a, sig, out);
                }
            }
        }
        Term::App(s, args) => {
            out.push_str(&sig.symbol(*s).name);
            if args.is_empty() {
                return;
            }
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_term(a, sig, out);
            }
            out.push(')');
        }
    }
}

pub fn format_identity(id: &Identity, sig: &Signature) -> String {
    format!("{} =~ {}", format_term(&id.lhs, sig), format_term(&id.rhs, sig))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_terms() {
        let sig = Signature::tau_star();
        let t = parse_term("d(f(x0),x1)", &sig).unwrap();
        assert_eq!(
            t,
            Term::app(0, vec![Term::app(1, vec![Term::var(0, 0)]), Term::var(0, 1)])
        );
        assert_eq!(format_term(&t, &sig), "d(f(x0),x1)");
    }

    #[test]
    fn dot_is_right_associative() {
        let sig = Signature::automatic();
        let a = parse_term("x0 . x1 . x2", &sig).unwrap();
        let b = parse_term("x0 . (x1 . x2)", &sig).unwrap();
        assert_eq!(a, b);
        assert_eq!(format_term(&a, &sig), "x0 . (x1 . x2)");
        let c = parse_term("(x0 . x1) . x2", &sig).unwrap();
        assert_eq!(format_term(&c, &sig), "(x0 . x1) . x2");
    }

    #[test]
    fn word_sugar() {
        let sig = Signature::automatic();
        let a = parse_term("[x0 x1 x2]y", &sig).unwrap();
        assert_eq!(format_term(&a, &sig), "x0 . (x1 . (x2 . x3))");
        assert_eq!(parse_term("[]y", &sig).unwrap(), Term::var(0, 0));
    }

    #[test]
    fn sorts_inferred_from_context() {
        let sig = Signature::tau();
        let t = parse_term("s(g, s(h, p))", &sig).unwrap();
        assert_eq!(format_term(&t, &sig), "s(x0,s(x1,y0))");
        let id = parse_identity("p =~ s(x0, p)", &sig).unwrap();
        assert_eq!(id.lhs, Term::var(1, 0));
        assert!(matches!(parse_term("s(y0, y1)", &sig), Err(Error::SortMismatch(_))));
        assert!(matches!(parse_term("s(a, a)", &sig), Err(Error::SortMismatch(_))));
    }

    #[test]
    fn fresh_indices_avoid_canonical_names() {
        let sig = Signature::tau_star();
        let t = parse_term("d(foo, x0)", &sig).unwrap();
        assert_eq!(format_term(&t, &sig), "d(x1,x0)");
    }

    #[test]
    fn errors() {
        let sig = Signature::tau_star();
        assert!(matches!(parse_term("g(x0)", &sig), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_term("d(x0)", &sig), Err(Error::ArityMismatch { .. })));
        assert!(matches!(parse_term("d(x0,", &sig), Err(Error::Syntax { .. })));
        assert!(matches!(parse_term("x0 . x1", &sig), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_term("x0 x1", &sig), Err(Error::Syntax { pos: 3, .. })));
    }

    #[test]
    fn identity_files() {
        let sig = Signature::tau_star();
        let ids = parse_identities("# laws\nd(x,x) =~ x\n\nd(f(x0),x1) ≈ d(x0,x1)\n", &sig).unwrap();
        assert_eq!(ids.len(), 2);
        assert_eq!(format_identity(&ids[0], &sig), "d(x0,x0) =~ x0");
        let e = parse_identities("d(x,x) =~ x\nd(x =~ x\n", &sig).unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }

    #[test]
    fn canonical_names() {
        let sig = Signature::new(
            (0..8).map(|i| format!("S{i}")).collect(),
            vec![],
        )
        .unwrap();
        for sort in 0..8 {
            let v = Var::new(sort, 12);
            assert_eq!(canonical(&var_name(v), &sig), Some(v));
        }
        assert_eq!(canonical("x01", &sig), None);
        assert_eq!(canonical("s1v2", &sig), None);
    }
}
