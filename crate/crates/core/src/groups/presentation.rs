use std::fmt;

use super::FiniteGroup;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A letter is `2i` for generator `i` and `2i + 1` for its inverse.
pub type Letter = usize;

#[inline]
pub fn inverse_letter(l: Letter) -> Letter {
    l ^ 1
}

pub fn invert_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|&l| inverse_letter(l)).collect()
}

/// Cancels adjacent inverse pairs.
pub fn free_reduce(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&inverse_letter(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction followed by cancelling inverse letters at the two ends.
pub fn cyclic_reduce(w: &[Letter]) -> Vec<Letter> {
    let w = free_reduce(w);
    let (mut i, mut j) = (0, w.len());
    while j - i >= 2 && w[i] == inverse_letter(w[j - 1]) {
        i += 1;
        j -= 1;
    }
    w[i..j].to_vec()
}

pub fn power_word(w: &[Letter], k: i64) -> Vec<Letter> {
    let base = if k < 0 { invert_word(w) } else { w.to_vec() };
    base.iter()
        .copied()
        .cycle()
        .take(base.len() * k.unsigned_abs() as usize)
        .collect()
}

/// `[x, y] = x⁻¹y⁻¹xy` as a plain word.
pub fn commutator_word(x: &[Letter], y: &[Letter]) -> Vec<Letter> {
    let mut w = invert_word(x);
    w.extend(invert_word(y));
    w.extend_from_slice(x);
    w.extend_from_slice(y);
    w
}

/// Left-normed commutator `[[w1, w2], ..., wk]` expanded to a plain word.
pub fn left_normed_word(ws: &[Vec<Letter>]) -> Vec<Letter> {
    assert!(ws.len() >= 2, "a commutator needs at least two entries");
    ws[1..]
        .iter()
        .fold(ws[0].clone(), |acc, w| commutator_word(&acc, w))
}

/// Evaluates a word in `g` with generator `i` sent to `images[i]`.
pub fn eval_word(g: &FiniteGroup, images: &[usize], w: &[Letter]) -> usize {
    w.iter().fold(g.identity(), |acc, &l| {
        let x = images[l / 2];
        g.mul(acc, if l % 2 == 0 { x } else { g.inv(x) })
    })
}

/// A finite presentation: named generators and relator words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Vec<Letter>>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Vec<Letter>>) -> Result<GroupPresentation> {
        let k = generators.len();
        if let Some(r) = relators.iter().find(|r| r.iter().any(|&l| l / 2 >= k)) {
            return Err(Error::InvalidGroup(format!(
                "relator {r:?} uses a generator outside 0..{k}"
            )));
        }
        Ok(GroupPresentation {
            generators,
            relators,
        })
    }

    /// Parses `gens: a b; rels: a^2, b^2, [a,b,b];`.
    ///
    /// Words are products of factors separated by spaces or `*`; a factor is
    /// a generator, a parenthesised word or a commutator `[w1, ..., wk]`,
    /// optionally raised to an integer power.
    pub fn parse(text: &str) -> Result<GroupPresentation> {
        let mut gens: Option<Vec<String>> = None;
        let mut rels: Option<(usize, &str)> = None;
        let mut offset = 0;
        for part in text.split(';') {
            let trimmed = part.trim();
            let lead = part.len() - part.trim_start().len();
            if let Some(rest) = trimmed.strip_prefix("gens:") {
                gens = Some(rest.split_whitespace().map(str::to_string).collect());
            } else if let Some(rest) = trimmed.strip_prefix("rels:") {
                rels = Some((offset + lead + 5, rest));
            } else if !trimmed.is_empty() {
                return Err(Error::Syntax {
                    pos: offset + lead,
                    msg: "expected `gens:` or `rels:`".into(),
                });
            }
            offset += part.len() + 1;
        }
        let gens = gens.ok_or_else(|| Error::Syntax {
            pos: 0,
            msg: "missing `gens:`".into(),
        })?;
        for (i, g) in gens.iter().enumerate() {
            let ok = g.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && g.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok || gens[..i].contains(g) {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: format!("bad generator name `{g}`"),
                });
            }
        }
        let mut relators = Vec::new();
        if let Some((base, src)) = rels {
            let mut p = WordParser {
                src: src.as_bytes(),
                pos: 0,
                base,
                gens: &gens,
            };
            p.skip_ws();
            if p.pos < p.src.len() {
                loop {
                    relators.push(p.word()?);
                    p.skip_ws();
                    match p.peek() {
                        Some(b',') => p.pos += 1,
                        None => break,
                        Some(_) => return Err(p.error("expected `,`")),
                    }
                }
            }
        }
        GroupPresentation::new(gens, relators)
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Vec<Letter>] {
        &self.relators
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "e".into();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&self.generators[w[i] / 2]);
            let k = (j - i) as i64 * if w[i] % 2 == 0 { 1 } else { -1 };
            if k != 1 {
                out.push_str(&format!("^{k}"));
            }
            i = j;
        }
        out
    }

    /// Whether every relator evaluates to the identity under `images`.
    pub fn relators_hold(&self, g: &FiniteGroup, images: &[usize]) -> Option<usize> {
        self.relators
            .iter()
            .position(|r| eval_word(g, images, r) != g.identity())
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens: {}; rels: ", self.generators.join(" "))?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if r.is_empty() {
                write!(f, "1")?;
            } else {
                write!(f, "{}", self.format_word(r))?;
            }
        }
        write!(f, ";")
    }
}

struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
    gens: &'a [String],
}

impl WordParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.base + self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn word(&mut self) -> Result<Vec<Letter>> {
        let mut w = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') if !w.is_empty() => {
                    self.pos += 1;
                    continue;
                }
                Some(c) if c == b'(' || c == b'[' || c.is_ascii_alphabetic() || c == b'_' || c == b'1' => {}
                _ => break,
            }
            w.extend(self.factor()?);
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Vec<Letter>> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                w
            }
            Some(b'[') => {
                self.pos += 1;
                let mut parts = vec![self.word()?];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            parts.push(self.word()?);
                        }
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected `,` or `]`")),
                    }
                }
                if parts.len() < 2 {
                    return Err(self.error("a commutator needs at least two entries"));
                }
                left_normed_word(&parts)
            }
            Some(b'1') => {
                self.pos += 1;
                Vec::new()
            }
            _ => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let i = self.gens.iter().position(|g| g == name).ok_or_else(|| Error::Syntax {
                    pos: self.base + start,
                    msg: format!("unknown generator `{name}`"),
                })?;
                vec![2 * i]
            }
        };
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            if self.peek() == Some(b'-') {
                self.pos += 1;
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let k: i64 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.error("expected an integer exponent"))?;
            Ok(power_word(&base, k))
        } else {
            Ok(base)
        }
    }
}

/// The two-generator presentation with relators `a_i^p` and every
/// left-normed commutator of weight `c + 1` in `a1, a2`.
pub fn presentation_hpc(p: u64, c: usize) -> GroupPresentation {
    let gens = vec!["a1".to_string(), "a2".to_string()];
    let mut rels = vec![power_word(&[0], p as i64), power_word(&[2], p as i64)];
    for t in 0..1usize << (c + 1) {
        let parts: Vec<Vec<Letter>> = (0..=c)
            .map(|k| vec![2 * ((t >> (c - k)) & 1)])
            .collect();
        rels.push(left_normed_word(&parts));
    }
    GroupPresentation::new(gens, rels).expect("valid generators")
}

/// The vector space `F_q^n`; element index `Σ d_i q^(n-1-i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VectorSpaceFq {
    pub n: usize,
    pub q: u64,
}

impl VectorSpaceFq {
    pub fn new(n: usize, q: u64) -> Result<VectorSpaceFq> {
        if !super::series::is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(VectorSpaceFq { n, q })
    }

    pub fn size(&self) -> usize {
        (self.q as usize).pow(self.n as u32)
    }

    pub fn digits(&self, mut v: usize) -> Vec<u64> {
        let mut d = vec![0; self.n];
        for i in (0..self.n).rev() {
            d[i] = v as u64 % self.q;
            v /= self.q as usize;
        }
        d
    }

    pub fn index(&self, d: &[u64]) -> usize {
        d.iter().fold(0, |acc, &x| acc * self.q as usize + x as usize)
    }

    pub fn add(&self, v: usize, w: usize) -> usize {
        let (a, b) = (self.digits(v), self.digits(w));
        self.index(&a.iter().zip(&b).map(|(x, y)| (x + y) % self.q).collect::<Vec<_>>())
    }

    pub fn neg(&self, v: usize) -> usize {
        let a = self.digits(v);
        self.index(&a.iter().map(|x| (self.q - x) % self.q).collect::<Vec<_>>())
    }

    pub fn sub(&self, v: usize, w: usize) -> usize {
        self.add(v, self.neg(w))
    }

    /// Basis vector `e_i` (0-based `i`).
    pub fn basis(&self, i: usize) -> usize {
        let mut d = vec![0; self.n];
        d[i] = 1;
        self.index(&d)
    }

    /// Membership in `V_i`, the span of all basis vectors except `e_i`.
    pub fn in_hyperplane(&self, v: usize, i: usize) -> bool {
        self.digits(v)[i] == 0
    }

    /// Membership in `V_1 ∪ ... ∪ V_n`: some coordinate vanishes.
    pub fn in_some_hyperplane(&self, v: usize) -> bool {
        self.digits(v).contains(&0)
    }

    pub fn label(&self, v: usize) -> String {
        self.digits(v).iter().map(|d| d.to_string()).collect()
    }

    /// The additive group, labelled by digit strings.
    pub fn group(&self) -> FiniteGroup {
        let n = self.size();
        let mult = (0..n * n).map(|i| self.add(i / n, i % n) as u32).collect();
        FiniteGroup::from_parts(n, mult, 0)
            .with_labels((0..n).map(|v| self.label(v)).collect())
            .expect("one label per vector")
    }
}

/// Presentation of `G_{V,p,c}` together with the space indexing its
/// generators: generator `i` is `[v]` for the vector with index `i`.
#[derive(Clone, Debug)]
pub struct GvPresentation {
    pub presentation: GroupPresentation,
    pub space: VectorSpaceFq,
}

/// Generators `[v]` for `v ∈ F_q^n`; relators `[v]^p`, every left-normed
/// commutator of weight `c + 1`, and `[[v],[w]]` whenever `v - w` lies in
/// some `V_i`. The relator count is capped by `budget.max_elements`.
pub fn presentation_gvpc(n: usize, q: u64, p: u64, c: usize, budget: &Budget) -> Result<GvPresentation> {
    let space = VectorSpaceFq::new(n, q)?;
    if !super::series::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let k = space.size();
    let count = (k as u128).checked_pow(c as u32 + 1).unwrap_or(u128::MAX) + (k * k) as u128;
    if count > budget.max_elements as u128 {
        return Err(Error::BudgetExceeded {
            what: "relators",
            limit: budget.max_elements as u64,
        });
    }
    let gens = (0..k).map(|v| format!("v{}", space.label(v))).collect();
    let mut rels: Vec<Vec<Letter>> = (0..k).map(|v| power_word(&[2 * v], p as i64)).collect();
    let mut t = vec![0usize; c + 1];
    loop {
        let parts: Vec<Vec<Letter>> = t.iter().map(|&v| vec![2 * v]).collect();
        rels.push(left_normed_word(&parts));
        let mut i = c + 1;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < k {
                break;
            }
            t[i] = 0;
        }
        if t.iter().all(|&x| x == 0) {
            break;
        }
    }
    for v in 0..k {
        for w in v..k {
            if space.in_some_hyperplane(space.sub(v, w)) {
                rels.push(commutator_word(&[2 * v], &[2 * w]));
            }
        }
    }
    Ok(GvPresentation {
        presentation: GroupPresentation::new(gens, rels)?,
        space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_utilities() {
        assert_eq!(free_reduce(&[0, 1, 2, 0, 1]), vec![2]);
        assert_eq!(cyclic_reduce(&[1, 2, 0]), vec![2]);
        assert_eq!(power_word(&[0, 2], -2), vec![3, 1, 3, 1]);
        assert_eq!(commutator_word(&[0], &[2]), vec![1, 3, 0, 2]);
    }

    #[test]
    fn parse_round_trip() {
        let p = GroupPresentation::parse("gens: a b; rels: a^2, b^2, [a,b,b];").unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relators().len(), 3);
        assert_eq!(p.relators()[0], vec![0, 0]);
        assert_eq!(p.relators()[2], left_normed_word(&[vec![0], vec![2], vec![2]]));
        let q = GroupPresentation::parse(&p.to_string()).unwrap();
        assert_eq!(p, q);
        let r = GroupPresentation::parse("gens: x y; rels: (x*y)^-3 x^-1, 1;").unwrap();
        assert_eq!(r.relators()[0], vec![3, 1, 3, 1, 3, 1, 1]);
        assert!(r.relators()[1].is_empty());
        assert!(GroupPresentation::parse("gens: a; rels: b;").is_err());
        assert!(GroupPresentation::parse("gens: a; rels: [a];").is_err());
        assert!(GroupPresentation::parse("rels: a;").is_err());
    }

    #[test]
    fn hpc_relator_counts() {
        let h = presentation_hpc(2, 1);
        assert_eq!(h.relators().len(), 4 + 2);
        assert_eq!(h.relators()[0], vec![0, 0]);
        assert!(h.relators()[2..].iter().all(|r| r.len() == 4));
        for c in 1..5 {
            assert_eq!(presentation_hpc(3, c).relators().len(), 2 + (1 << (c + 1)));
        }
    }

    #[test]
    fn vector_space() {
        let v = VectorSpaceFq::new(3, 3).unwrap();
        assert_eq!(v.size(), 27);
        assert_eq!(v.digits(5), vec![0, 1, 2]);
        assert_eq!(v.index(&[0, 1, 2]), 5);
        assert_eq!(v.basis(0), 9);
        assert_eq!(v.add(5, 5), v.index(&[0, 2, 1]));
        assert_eq!(v.sub(5, 5), 0);
        assert!(v.in_hyperplane(5, 0));
        assert!(!v.in_some_hyperplane(v.index(&[1, 1, 2])));
        assert!(VectorSpaceFq::new(2, 4).is_err());
        assert!(v.group().is_abelian());
    }

    #[test]
    fn gvpc_difference_relators() {
        let g = presentation_gvpc(2, 2, 3, 1, &Budget::default()).unwrap();
        let p = &g.presentation;
        assert_eq!(p.generator_count(), 4);
        assert_eq!(p.generators()[3], "v11");
        // skip the power and weight-2 commutator families
        let has = |v: usize, w: usize| {
            p.relators()[4 + 16..]
                .iter()
                .any(|r| *r == commutator_word(&[2 * v], &[2 * w]))
        };
        // 00-11 and 01-10 differ in every coordinate
        assert!(!has(0, 3) && !has(1, 2));
        assert!(has(0, 1) && has(0, 2) && has(1, 3) && has(2, 3) && has(1, 1));
        let small = Budget {
            max_elements: 10,
            ..Budget::default()
        };
        assert!(matches!(
            presentation_gvpc(2, 2, 3, 3, &small),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
