//! Variety membership for finite algebras.
//!
//! `B ∈ V(A)` iff the free algebra of `V(A)` on a generating set of `B` maps
//! onto `B` by sending free generators to those generators. A positive
//! answer carries a [`MembershipCertificate`], a negative one an identity of
//! `A` that fails in `B`.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::closure::{close, small_generating_set, CloseOptions, DenseCloser};
use super::congruence::{is_congruence, quotient, Congruence, Homomorphism};
use super::finite::{Elem, FiniteAlgebra};
use super::free::{free_algebra_with, FreeAlgebra, Power};
use super::term::{Assignment, Identity};
use crate::budget::{Budget, Progress, Silent};
use crate::error::{Error, Result};

/// `B ↪ S/θ` where `S ≤ A^m` is generated by explicit tuples.
///
/// Positions in `S` follow the deterministic closure order of the
/// generators, so every stage can be recomputed and checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub exponent: usize,
    /// Generator tuples per sort, each of length `exponent`.
    pub generators: Vec<Vec<Vec<u32>>>,
    /// Congruence of `S`, indexed by closure position.
    pub congruence: Congruence,
    /// Injective homomorphism from `B` into `S/θ`, as block numbers.
    pub embedding: Homomorphism,
}

impl MembershipCertificate {
    /// The subalgebra `S ≤ A^m` generated by the certificate tuples, with
    /// the tuple of every element.
    pub fn subalgebra(
        &self,
        a: &FiniteAlgebra,
        budget: &Budget,
    ) -> Result<(FiniteAlgebra, Vec<Vec<Box<[u32]>>>)> {
        if self.generators.len() != a.sort_count() {
            return Err(Error::CertificateRejected("one generator list per sort expected".into()));
        }
        for (s, gs) in self.generators.iter().enumerate() {
            for g in gs {
                if g.len() != self.exponent {
                    return Err(Error::CertificateRejected("generator tuple of wrong length".into()));
                }
                if g.iter().any(|&x| x as usize >= a.size(s)) {
                    return Err(Error::CertificateRejected("generator tuple outside A".into()));
                }
            }
        }
        let gens = self
            .generators
            .iter()
            .map(|v| v.iter().map(|g| g.clone().into_boxed_slice()).collect())
            .collect();
        let opts = CloseOptions {
            max_elements: budget.max_elements,
            max_work: budget.max_assignments.saturating_mul(64),
            record_tables: true,
        };
        let c = close(&Power { alg: a, n: self.exponent }, gens, &opts)?;
        if let Some(s) = c.elems.iter().position(Vec::is_empty) {
            return Err(Error::EmptySortUnreachable(a.signature().sort_name(s).to_string()));
        }
        let s = FiniteAlgebra::with_shared(
            a.shared_signature().clone(),
            c.sizes(),
            c.tables.clone().expect("recorded"),
        )?;
        Ok((s, c.elems))
    }
}

/// Checks the three stages of a certificate for `B ∈ V(A)`.
pub fn verify_certificate(
    cert: &MembershipCertificate,
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
) -> Result<()> {
    verify_certificate_with(cert, a, b, &Budget::default())
}

pub fn verify_certificate_with(
    cert: &MembershipCertificate,
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    budget: &Budget,
) -> Result<()> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch);
    }
    let (s, _) = cert.subalgebra(a, budget)?;
    let parts = cert.congruence.partitions();
    if parts.len() != s.sort_count() || parts.iter().zip(s.sizes()).any(|(p, &n)| p.len() != n) {
        return Err(Error::CertificateRejected(
            "congruence does not match the generated subalgebra".into(),
        ));
    }
    if !is_congruence(&s, parts) {
        return Err(Error::CertificateRejected("relation is not a congruence".into()));
    }
    let (q, _) = quotient(&s, &cert.congruence)?;
    cert.embedding
        .verify(b, &q)
        .map_err(|e| Error::CertificateRejected(format!("embedding: {e}")))?;
    if !cert.embedding.is_injective() {
        return Err(Error::CertificateRejected("embedding is not injective".into()));
    }
    Ok(())
}

/// Outcome of a membership test.
#[derive(Clone, Debug)]
pub enum Membership {
    Member(MembershipCertificate),
    /// An identity of `A` with an assignment into `B` falsifying it.
    NotMember {
        identity: Identity,
        assignment: Assignment,
    },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }

    pub fn certificate(&self) -> Option<&MembershipCertificate> {
        match self {
            Membership::Member(c) => Some(c),
            Membership::NotMember { .. } => None,
        }
    }
}

/// Free algebras of `V(A)` cached by generator counts.
pub struct VarietyOracle<'a> {
    a: &'a FiniteAlgebra,
    budget: Budget,
    cache: Mutex<HashMap<Vec<usize>, Arc<FreeAlgebra>>>,
}

impl<'a> VarietyOracle<'a> {
    pub fn new(a: &'a FiniteAlgebra, budget: Budget) -> VarietyOracle<'a> {
        VarietyOracle {
            a,
            budget,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.a
    }

    pub fn free(&self, counts: &[usize]) -> Result<Arc<FreeAlgebra>> {
        if let Some(f) = self.cache.lock().expect("cache lock").get(counts) {
            return Ok(f.clone());
        }
        let f = Arc::new(free_algebra_with(self.a, counts, &self.budget)?);
        self.cache
            .lock()
            .expect("cache lock")
            .entry(counts.to_vec())
            .or_insert(f.clone());
        Ok(f)
    }

    /// Whether the subalgebra of `b` generated by `gens` lies in `V(A)`;
    /// on failure, the violated identity of `A`.
    pub fn check_generated(
        &self,
        b: &FiniteAlgebra,
        gens: &[Vec<Elem>],
    ) -> Result<std::result::Result<Vec<Vec<Elem>>, (Identity, Assignment)>> {
        if b.signature() != self.a.signature() {
            return Err(Error::SignatureMismatch);
        }
        let counts: Vec<usize> = gens.iter().map(Vec::len).collect();
        let f = self.free(&counts)?;
        Ok(f.extend_map(b, gens)
            .map_err(|v| f.violated_identity(&v, gens)))
    }

    /// Full decision with a certificate, using `gens` as generators of `b`.
    pub fn decide_with(&self, b: &FiniteAlgebra, gens: &[Vec<Elem>]) -> Result<Membership> {
        let counts: Vec<usize> = gens.iter().map(Vec::len).collect();
        let f = self.free(&counts)?;
        let img = match f.extend_map(b, gens) {
            Ok(img) => img,
            Err(v) => {
                let (identity, assignment) = f.violated_identity(&v, gens);
                return Ok(Membership::NotMember {
                    identity,
                    assignment,
                });
            }
        };
        let mut pre: Vec<Vec<Option<Elem>>> = b.sizes().iter().map(|&n| vec![None; n]).collect();
        for (s, v) in img.iter().enumerate() {
            for (x, &y) in v.iter().enumerate() {
                pre[s][y].get_or_insert(x);
            }
        }
        if pre.iter().flatten().any(Option::is_none) {
            return Err(Error::InvalidAlgebra("generators do not generate the algebra".into()));
        }
        let congruence = Congruence::new(img);
        let embedding = Homomorphism::new(
            pre.iter()
                .enumerate()
                .map(|(s, v)| v.iter().map(|x| congruence.block(s, x.expect("checked"))).collect())
                .collect(),
        );
        let generators = f
            .generators
            .iter()
            .enumerate()
            .map(|(s, g)| g.iter().map(|&p| f.vectors[s][p].to_vec()).collect())
            .collect();
        Ok(Membership::Member(MembershipCertificate {
            exponent: f.exponent,
            generators,
            congruence,
            embedding,
        }))
    }

    /// Full decision, generating `b` by as few elements as a bounded search
    /// finds: the free algebra grows exponentially in their number.
    pub fn decide(&self, b: &FiniteAlgebra) -> Result<Membership> {
        let gens = small_generating_set(b, &self.budget, 20_000)?;
        self.decide_with(b, &gens)
    }
}

/// Decides `B ∈ V(A)`.
pub fn in_variety(b: &FiniteAlgebra, a: &FiniteAlgebra) -> Result<Membership> {
    in_variety_with(b, a, &Budget::default())
}

pub fn in_variety_with(b: &FiniteAlgebra, a: &FiniteAlgebra, budget: &Budget) -> Result<Membership> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch);
    }
    VarietyOracle::new(a, *budget).decide(b)
}

/// A generated subalgebra outside `V(A)`.
#[derive(Clone, Debug)]
pub struct VnCounterexample {
    pub generators: Vec<Vec<Elem>>,
    pub identity: Identity,
    pub assignment: Assignment,
}

#[derive(Clone, Debug)]
pub struct VnOutcome {
    pub member: bool,
    /// Generator choices enumerated.
    pub choices: u64,
    /// Distinct subuniverses checked against the variety.
    pub distinct: usize,
    pub counterexample: Option<VnCounterexample>,
}

/// Whether every subalgebra of `B` generated by at most `n` elements per
/// sort lies in `V(A)`.
///
/// Only generator sets of exactly `min(n, |B_s|)` elements per sort are
/// enumerated: a smaller set generates a subalgebra of one obtained by
/// adding elements, and varieties are closed under subalgebras. Choices are
/// taken lexicographically (sort-major) and their closures deduplicated.
pub fn in_vn(b: &FiniteAlgebra, a: &FiniteAlgebra, n: usize) -> Result<VnOutcome> {
    in_vn_with(b, a, &vec![n; b.sort_count()], &Budget::default(), &Silent)
}

pub fn in_vn_with(
    b: &FiniteAlgebra,
    a: &FiniteAlgebra,
    n_per_sort: &[usize],
    budget: &Budget,
    progress: &dyn Progress,
) -> Result<VnOutcome> {
    let oracle = VarietyOracle::new(a, *budget);
    in_vn_oracle(b, &oracle, n_per_sort, budget, progress)
}

/// [`in_vn_with`] against a shared oracle, reusing its cached free algebras.
pub fn in_vn_oracle(
    b: &FiniteAlgebra,
    oracle: &VarietyOracle<'_>,
    n_per_sort: &[usize],
    budget: &Budget,
    progress: &dyn Progress,
) -> Result<VnOutcome> {
    if b.signature() != oracle.algebra().signature() {
        return Err(Error::SignatureMismatch);
    }
    if n_per_sort.len() != b.sort_count() || n_per_sort.iter().any(|&n| n == 0) {
        return Err(Error::InvalidAlgebra("need a positive bound for every sort".into()));
    }
    let ks: Vec<usize> = n_per_sort
        .iter()
        .zip(b.sizes())
        .map(|(&n, &size)| n.min(size))
        .collect();
    let per_sort: Vec<u64> = ks
        .iter()
        .zip(b.sizes())
        .map(|(&k, &size)| binomial(size as u64, k as u64))
        .collect();
    let total = per_sort
        .iter()
        .try_fold(1u64, |acc, &c| acc.checked_mul(c))
        .unwrap_or(u64::MAX);
    budget.check_assignments(total)?;

    const CHUNK: u64 = 4096;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut reps: Vec<Vec<Vec<Elem>>> = Vec::new();
    let mut start = 0u64;
    while start < total {
        let end = (start + CHUNK).min(total);
        let chunk: Vec<Result<(Vec<Vec<Elem>>, Vec<u64>)>> = (start..end)
            .into_par_iter()
            .map_init(
                || DenseCloser::new(b, budget),
                |closer, idx| {
                    let gens = unrank_choice(idx, &ks, &per_sort, b.sizes());
                    let cl = closer.close(&gens)?;
                    Ok((gens, bitset(b, &cl)))
                },
            )
            .collect();
        for r in chunk {
            let (gens, bits) = r?;
            if seen.insert(bits) {
                reps.push(gens);
            }
        }
        progress.report("in_vn closures", end, Some(total));
        start = end;
    }
    let checks: Vec<Result<Option<(Identity, Assignment)>>> = reps
        .par_iter()
        .map(|gens| Ok(oracle.check_generated(b, gens)?.err()))
        .collect();
    let mut counterexample = None;
    for (gens, r) in reps.iter().zip(checks) {
        if let Some((identity, assignment)) = r? {
            counterexample = Some(VnCounterexample {
                generators: gens.clone(),
                identity,
                assignment,
            });
            break;
        }
    }
    progress.report("in_vn checks", reps.len() as u64, Some(reps.len() as u64));
    Ok(VnOutcome {
        member: counterexample.is_none(),
        choices: total,
        distinct: reps.len(),
        counterexample,
    })
}

/// Result of [`holds_bounded`].
#[derive(Clone, Debug)]
pub struct BoundedCheck {
    /// Assignments tried (multisets of values per sort).
    pub assignments: u64,
    /// Sizes of the free algebra whose table entries are the identities.
    pub free_sizes: Vec<usize>,
    pub counterexample: Option<(Identity, Assignment)>,
}

impl BoundedCheck {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Whether `B` satisfies every identity of `A` in at most `n_s` variables
/// of sort `s`, that is every identity of [`basis_of`](super::basis_of) for
/// the free algebra on those generators. Each assignment is tested with
/// [`FreeAlgebra::extend_map`]; values are taken as multisets per sort, as
/// permuting generators of one sort is an automorphism of the free algebra.
pub fn holds_bounded(
    b: &FiniteAlgebra,
    a: &FiniteAlgebra,
    n_per_sort: &[usize],
    budget: &Budget,
    progress: &dyn Progress,
) -> Result<BoundedCheck> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch);
    }
    let f = free_algebra_with(a, n_per_sort, budget)?;
    let per_sort: Vec<u64> = n_per_sort
        .iter()
        .zip(b.sizes())
        .map(|(&n, &m)| if n == 0 { 1 } else { binomial((m + n - 1) as u64, n as u64) })
        .collect();
    let total = per_sort
        .iter()
        .try_fold(1u64, |acc, &c| acc.checked_mul(c))
        .unwrap_or(u64::MAX);
    budget.check_assignments(total)?;
    let unrank = |mut idx: u64| -> Vec<Vec<Elem>> {
        let mut ranks = vec![0u64; per_sort.len()];
        for s in (0..per_sort.len()).rev() {
            ranks[s] = idx % per_sort[s];
            idx /= per_sort[s];
        }
        ranks
            .iter()
            .enumerate()
            .map(|(s, &r)| {
                let n = n_per_sort[s];
                if n == 0 {
                    return Vec::new();
                }
                unrank_subset(r, b.size(s) + n - 1, n)
                    .into_iter()
                    .enumerate()
                    .map(|(i, x)| x - i)
                    .collect()
            })
            .collect()
    };
    const CHUNK: u64 = 1 << 14;
    let mut start = 0;
    let mut counterexample = None;
    while start < total && counterexample.is_none() {
        let end = (start + CHUNK).min(total);
        counterexample = (start..end).into_par_iter().find_map_first(|idx| {
            let values = unrank(idx);
            f.extend_map(b, &values)
                .err()
                .map(|v| f.violated_identity(&v, &values))
        });
        progress.report("bounded identities", end, Some(total));
        start = end;
    }
    Ok(BoundedCheck {
        assignments: total,
        free_sizes: f.algebra.sizes().to_vec(),
        counterexample,
    })
}

fn bitset(b: &FiniteAlgebra, cl: &[Vec<Elem>]) -> Vec<u64> {
    let mut offsets = Vec::with_capacity(b.sort_count());
    let mut acc = 0;
    for &n in b.sizes() {
        offsets.push(acc);
        acc += n;
    }
    let mut bits = vec![0u64; acc.div_ceil(64)];
    for (s, v) in cl.iter().enumerate() {
        for &e in v {
            let i = offsets[s] + e;
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    r as u64
}

/// The `idx`-th choice in sort-major lexicographic order of `k_s`-subsets.
fn unrank_choice(mut idx: u64, ks: &[usize], per_sort: &[u64], sizes: &[usize]) -> Vec<Vec<Elem>> {
    let mut ranks = vec![0u64; ks.len()];
    for s in (0..ks.len()).rev() {
        ranks[s] = idx % per_sort[s];
        idx /= per_sort[s];
    }
    ks.iter()
        .zip(sizes)
        .zip(ranks)
        .map(|((&k, &n), r)| unrank_subset(r, n, k))
        .collect()
}

/// The `r`-th `k`-subset of `0..n` in lexicographic order.
pub(crate) fn unrank_subset(mut r: u64, n: usize, k: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for i in 0..k {
        let mut x = next;
        loop {
            let c = binomial((n - x - 1) as u64, (k - i - 1) as u64);
            if r < c {
                break;
            }
            r -= c;
            x += 1;
        }
        out.push(x);
        next = x + 1;
    }
    out
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
    fn subsets_unrank_in_order() {
        let all: Vec<Vec<usize>> = (0..binomial(5, 3)).map(|r| unrank_subset(r, 5, 3)).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cyclic_groups_in_variety_of_z6() {
        let z6 = zn(6);
        for n in [1, 2, 3, 6] {
            let m = in_variety(&zn(n), &z6).unwrap();
            let cert = m.certificate().expect("member");
            verify_certificate(cert, &z6, &zn(n)).unwrap();
        }
        match in_variety(&zn(4), &z6).unwrap() {
            Membership::NotMember {
                identity,
                assignment,
            } => {
                let b = zn(4);
                let l = crate::algebra::eval_term(&b, &identity.lhs, &assignment).unwrap();
                let r = crate::algebra::eval_term(&b, &identity.rhs, &assignment).unwrap();
                assert_ne!(l, r);
                assert!(crate::algebra::holds(&z6, &identity).unwrap().is_holds());
            }
            Membership::Member(_) => panic!("Z4 is not in V(Z6)"),
        }
    }

    #[test]
    fn tampered_certificate_rejected() {
        let z6 = zn(6);
        let mut cert = in_variety(&zn(3), &z6).unwrap().certificate().unwrap().clone();
        cert.embedding.maps[0][2] = cert.embedding.maps[0][1];
        assert!(verify_certificate(&cert, &z6, &zn(3)).is_err());
    }

    #[test]
    fn vn_of_member_and_nonmember() {
        let z6 = zn(6);
        assert!(in_vn(&zn(3), &z6, 1).unwrap().member);
        let out = in_vn(&zn(4), &z6, 1).unwrap();
        assert!(!out.member);
        assert!(out.counterexample.is_some());
        assert_eq!(out.choices, 4);
    }
}
