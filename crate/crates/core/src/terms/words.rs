//! Word terms over the automatic signature and the identity families Δ, Ψ
//! and Ψ₀ built from them.

use std::collections::HashMap;
use std::fmt;

use crate::algebra::{Elem, FiniteAlgebra, Identity, Signature, Term, Var, DOT};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A word over the variables `x0, x1, …`; the empty word is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    pub letters: Vec<usize>,
}

impl Word {
    pub fn new(letters: Vec<usize>) -> Word {
        Word { letters }
    }

    pub fn empty() -> Word {
        Word::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Renames letters in order of first occurrence: `x3 x1 x3` becomes `x0 x1 x0`.
    pub fn canonical(&self) -> Word {
        let mut map = HashMap::new();
        Word::new(
            self.letters
                .iter()
                .map(|&l| {
                    let n = map.len();
                    *map.entry(l).or_insert(n)
                })
                .collect(),
        )
    }

    /// Number of distinct letters.
    pub fn variable_count(&self) -> usize {
        let mut v = self.letters.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    }

    pub fn variables(&self) -> Vec<usize> {
        let mut v = self.letters.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        for l in &self.letters {
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

fn dot_index(sig: &Signature) -> usize {
    sig.symbol_index(DOT).expect("automatic signature has `.`")
}

/// `[w]y`: `[ε]y = y` and `[x w′]y = x · [w′]y`, over [`Signature::automatic`].
pub fn word_term(w: &Word, y: Var) -> Term {
    let d = dot_index(&Signature::automatic());
    w.letters
        .iter()
        .rev()
        .fold(Term::Var(y), |acc, &l| Term::App(d, vec![Term::var(0, l), acc]))
}

/// Reads a term of shape `[w]y` back into `(w, y)`.
pub fn as_word_term(t: &Term, sig: &Signature) -> Result<(Word, Var)> {
    let d = sig.symbol_index(DOT).ok_or(Error::NotAWordTerm)?;
    let mut letters = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Var(y) => return Ok((Word::new(letters), *y)),
            Term::App(s, args) if *s == d && args.len() == 2 => match &args[0] {
                Term::Var(x) => {
                    letters.push(x.index);
                    cur = &args[1];
                }
                _ => return Err(Error::NotAWordTerm),
            },
            _ => return Err(Error::NotAWordTerm),
        }
    }
}

/// Reinterprets `[w]y` over the two-sorted signature: letters become
/// variables of the first sort, `y` becomes `y0` of the second, and every
/// `·` becomes `s`.
pub fn sharp(t: &Term) -> Result<Term> {
    let (w, _) = as_word_term(t, &Signature::automatic())?;
    Ok(sharp_word(&w))
}

/// `[w]y♯` for `y = y0`.
pub fn sharp_word(w: &Word) -> Term {
    w.letters
        .iter()
        .rev()
        .fold(Term::var(1, 0), |acc, &l| Term::App(0, vec![Term::var(0, l), acc]))
}

/// The term `𝟎 = z · z` for the variable `x<z>`.
pub fn zero_term(z: usize) -> Term {
    let d = dot_index(&Signature::automatic());
    Term::App(d, vec![Term::var(0, z), Term::var(0, z)])
}

/// `𝟎·x ≈ 𝟎`, `x·𝟎 ≈ 𝟎`, `x·x ≈ 𝟎`, `(x·y)·z ≈ 𝟎` and
/// `[x0 … xn]x0 ≈ 𝟎` for `0 ≤ n ≤ N`. The variable of `𝟎` follows all others.
pub fn delta_identities(n_max: usize) -> Vec<Identity> {
    let d = dot_index(&Signature::automatic());
    let x = |i| Term::var(0, i);
    let dot = |a, b| Term::App(d, vec![a, b]);
    let mut out = vec![
        Identity::new(dot(zero_term(1), x(0)), zero_term(1)),
        Identity::new(dot(x(0), zero_term(1)), zero_term(1)),
        Identity::new(dot(x(0), x(0)), zero_term(1)),
        Identity::new(dot(dot(x(0), x(1)), x(2)), zero_term(3)),
    ];
    for n in 0..=n_max {
        let w = Word::new((0..=n).collect());
        out.push(Identity::new(word_term(&w, Var::new(0, 0)), zero_term(n + 1)));
    }
    out
}

/// All canonical words of length at most `max_len`, in lexicographic order.
pub fn canonical_words(max_len: usize) -> Vec<Word> {
    fn extend(cur: &mut Vec<usize>, distinct: usize, max_len: usize, out: &mut Vec<Word>) {
        out.push(Word::new(cur.clone()));
        if cur.len() == max_len {
            return;
        }
        for l in 0..=distinct {
            cur.push(l);
            extend(cur, distinct.max(l + 1), max_len, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 0, max_len, &mut out);
    out
}

/// Words of bounded length grouped by the function their sharp term
/// induces on a zero-adjoined two-sorted action algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiClasses {
    pub max_len: usize,
    /// Classes of canonical words, each sorted, ordered by first member.
    pub classes: Vec<Vec<Word>>,
    /// Words whose sharp term is constantly zero.
    pub zero_words: Vec<Word>,
}

impl PsiClasses {
    /// Every unordered pair of distinct words sharing a class.
    pub fn pairs(&self) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        for c in &self.classes {
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    out.push((c[i].clone(), c[j].clone()));
                }
            }
        }
        out
    }

    pub fn class_of(&self, w: &Word) -> Option<usize> {
        let c = w.canonical();
        self.classes.iter().position(|cl| cl.contains(&c))
    }

    /// `[w]y ≈ [w′]y` for each pair, with `y` numbered after the letters.
    pub fn psi_identities(&self) -> Vec<Identity> {
        let y = Var::new(0, self.max_len);
        self.pairs()
            .into_iter()
            .map(|(a, b)| Identity::new(word_term(&a, y), word_term(&b, y)))
            .collect()
    }

    /// `[w]y ≈ 𝟎` for each zero word.
    pub fn psi0_identities(&self) -> Vec<Identity> {
        let y = Var::new(0, self.max_len);
        self.zero_words
            .iter()
            .map(|w| Identity::new(word_term(w, y), zero_term(self.max_len + 1)))
            .collect()
    }
}

/// Checks that `zeros = (0_G, 0_S)` are absorbing for `s` in a τ-algebra.
pub fn check_zero_adjoined(alg: &FiniteAlgebra, zeros: Option<(Elem, Elem)>) -> Result<(Elem, Elem)> {
    let (zg, zs) = zeros.ok_or_else(|| Error::NotZeroAdjoined)?;
    if alg.signature() != &Signature::tau() || zg >= alg.size(0) || zs >= alg.size(1) {
        return Err(Error::NotZeroAdjoined);
    }
    let ok = (0..alg.size(1)).all(|y| alg.apply2(0, zg, y) == zs)
        && (0..alg.size(0)).all(|x| alg.apply2(0, x, zs) == zs);
    if ok {
        Ok((zg, zs))
    } else {
        Err(Error::NotZeroAdjoined)
    }
}

/// Groups all canonical words of length at most `max_len` by the function
/// `[w]y♯` induces on `alg` (a zero-adjoined τ-algebra with the given
/// zeros), and lists the words whose function is constantly zero.
///
/// Words with fewer letters compare against longer ones through trailing
/// variables the longer function ignores; pairs equal only up to a
/// renaming of one side are not detected.
pub fn psi_classes(
    alg: &FiniteAlgebra,
    zeros: Option<(Elem, Elem)>,
    max_len: usize,
    budget: &Budget,
) -> Result<PsiClasses> {
    let (_, zs) = check_zero_adjoined(alg, zeros)?;
    let (ng, ns) = (alg.size(0), alg.size(1));
    let words = canonical_words(max_len);
    for w in &words {
        let len = (ng as u64)
            .checked_pow(w.variable_count() as u32)
            .and_then(|n| n.checked_mul(ns as u64))
            .unwrap_or(u64::MAX);
        budget.check_assignments(len)?;
    }
    use rayon::prelude::*;
    let keys: Vec<(usize, Vec<u32>)> = words
        .par_iter()
        .map(|w| reduced_vector(alg, w))
        .collect();
    let mut index: HashMap<&(usize, Vec<u32>), usize> = HashMap::new();
    let mut classes: Vec<Vec<Word>> = Vec::new();
    let mut zero_words = Vec::new();
    for (w, key) in words.iter().zip(&keys) {
        if key.1.iter().all(|&v| v as usize == zs) {
            zero_words.push(w.clone());
        }
        match index.get(key) {
            Some(&c) => classes[c].push(w.clone()),
            None => {
                index.insert(key, classes.len());
                classes.push(vec![w.clone()]);
            }
        }
    }
    Ok(PsiClasses {
        max_len,
        classes,
        zero_words,
    })
}

/// Evaluation vector of `[w]y♯` over `(x0, …, x_{m-1}, y)`, last slot
/// fastest, with trailing ignored variables projected away.
fn reduced_vector(alg: &FiniteAlgebra, w: &Word) -> (usize, Vec<u32>) {
    let (ng, ns) = (alg.size(0), alg.size(1));
    let m = w.variable_count();
    let table = alg.table(0);
    let total = ng.pow(m as u32) * ns;
    let mut vec = Vec::with_capacity(total);
    let mut xs = vec![0usize; m];
    for idx in 0..total {
        let mut rest = idx / ns;
        for i in (0..m).rev() {
            xs[i] = rest % ng;
            rest /= ng;
        }
        let mut y = idx % ns;
        for &l in w.letters.iter().rev() {
            y = table[xs[l] * ns + y] as usize;
        }
        vec.push(y as u32);
    }
    let mut m = m;
    while m > 0 {
        let block = ns;
        let outer = vec.len() / (ng * block);
        let independent = (0..outer).all(|o| {
            let base = o * ng * block;
            (1..ng).all(|g| vec[base + g * block..base + (g + 1) * block] == vec[base..base + block])
        });
        if !independent {
            break;
        }
        vec = (0..outer)
            .flat_map(|o| vec[o * ng * block..o * ng * block + block].to_vec())
            .collect();
        m -= 1;
    }
    (m, vec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{format_term, parse_term};

    #[test]
    fn word_terms() {
        let sig = Signature::automatic();
        let y = Var::new(0, 9);
        assert_eq!(word_term(&Word::empty(), y), Term::Var(y));
        let t = word_term(&Word::new(vec![1, 2, 3]), y);
        assert_eq!(format_term(&t, &sig), "x1 . (x2 . (x3 . x9))");
        assert_eq!(parse_term("[x1 x2 x3]x9", &sig).unwrap(), t);
        let rep = word_term(&Word::new(vec![0, 0]), y);
        assert_eq!(format_term(&rep, &sig), "x0 . (x0 . x9)");
    }

    #[test]
    fn sharp_translation() {
        let tau = Signature::tau();
        let t = word_term(&Word::new(vec![1, 2, 3]), Var::new(0, 0));
        assert_eq!(format_term(&sharp(&t).unwrap(), &tau), "s(x1,s(x2,s(x3,y0)))");
        assert_eq!(sharp(&Term::var(0, 4)).unwrap(), Term::var(1, 0));
        let bad = parse_term("(x0 . x1) . x2", &Signature::automatic()).unwrap();
        assert!(matches!(sharp(&bad), Err(Error::NotAWordTerm)));
    }

    #[test]
    fn delta_family() {
        let sig = Signature::automatic();
        let d0 = delta_identities(0);
        assert_eq!(d0.len(), 5);
        assert_eq!(crate::terms::format_identity(&d0[4], &sig), "x0 . x0 =~ x1 . x1");
        let d2 = delta_identities(2);
        assert_eq!(
            crate::terms::format_identity(&d2[6], &sig),
            "x0 . (x1 . (x2 . x0)) =~ x3 . x3"
        );
    }

    #[test]
    fn canonical_word_counts() {
        // sums of Bell numbers
        assert_eq!(canonical_words(0).len(), 1);
        assert_eq!(canonical_words(4).len(), 1 + 1 + 2 + 5 + 15);
        let w = canonical_words(3);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(Word::new(vec![3, 1, 3]).canonical(), Word::new(vec![0, 1, 0]));
    }
}
