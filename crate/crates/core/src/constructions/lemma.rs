use std::collections::{HashMap, HashSet};
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::{adjoin_zero, build_action_algebra, build_l, strip_zero, BuildB, TwoSortedActionAlgebra};
use crate::algebra::{
    binomial, in_variety_with, is_congruence, is_subuniverse, power, product_elem, quotient, subalgebra,
    unrank_subset, verify_certificate_with, Congruence, DenseCloser, Elem, FiniteAlgebra, Homomorphism,
    Membership, MembershipCertificate, SubUniverse,
};
use crate::budget::{Budget, Progress};
use crate::error::{Error, Result};
use crate::groups::{
    group_in_variety, in_ap_aq, subgroup_generated, verify_group_certificate, ApAqOutcome, FiniteGroup,
    GroupAction, GroupVarietyCertificate,
};

/// Largest operation table materialized while checking a chain.
const MAX_TABLE: u128 = 1 << 26;

/// One verified link of a membership chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStage {
    pub name: &'static str,
    pub detail: String,
}

/// The part of a certificate that depends only on `C1`: `H = ⟨C1⟩`, its
/// `A_p A_q` test, `H ∈ V(G)` and `L(H, 1) ∈ V(L(G, 1))`.
#[derive(Clone, Debug)]
pub struct GroupChain {
    pub c1: Vec<Elem>,
    /// Elements of `H` in `P`, sorted; position is the index in `h`.
    pub h_elems: Vec<usize>,
    pub h: FiniteGroup,
    pub apaq: ApAqOutcome,
    pub group_cert: GroupVarietyCertificate,
    pub stages: Vec<ChainStage>,
}

/// `D ↪ L(H, r) ↪ L(H^k, 1) = L(H, 1)^k`, with `L(H, 1) ∈ V(A)` from the chain.
#[derive(Clone, Debug)]
pub struct StructuralCertificate {
    pub chain: Arc<GroupChain>,
    pub r: usize,
    /// Orbit representatives `t_i`: `C2` is the disjoint union of the `H·t_i`.
    pub coset_reps: Vec<usize>,
    pub power: usize,
    /// `D → L(H, r)` on positions of `D`.
    pub embedding: Homomorphism,
}

#[derive(Clone, Debug)]
pub enum MembershipProof {
    Structural(StructuralCertificate),
    /// Every product in `D` is zero; `D ↪ (A⁰)^k` with images given as
    /// big-endian coordinate codes.
    Null { exponent: usize, embedding: Homomorphism },
    /// `D ≤ (D⁻)⁰` and a proof that `D⁻ ∈ V(A)`.
    ZeroAdjoined { stripped: SubUniverse, inner: Box<MembershipProof> },
    Generic(MembershipCertificate),
    Undecided(String),
}

impl MembershipProof {
    pub fn is_decided(&self) -> bool {
        match self {
            MembershipProof::Undecided(_) => false,
            MembershipProof::ZeroAdjoined { inner, .. } => inner.is_decided(),
            _ => true,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MembershipProof::Structural(_) => "structural",
            MembershipProof::Null { .. } => "null",
            MembershipProof::ZeroAdjoined { inner, .. } => inner.kind(),
            MembershipProof::Generic(_) => "generic",
            MembershipProof::Undecided(_) => "undecided",
        }
    }
}

/// Outcome of a sweep over the `(n, n)`-generated subalgebras.
#[derive(Clone, Debug, Default)]
pub struct SweepSummary {
    pub choices: u64,
    pub subalgebras: usize,
    pub structural: usize,
    pub null: usize,
    pub generic: usize,
    pub undecided: Vec<(SubUniverse, String)>,
}

impl SweepSummary {
    pub fn all_decided(&self) -> bool {
        self.undecided.is_empty()
    }
}

type Decided<T> = std::result::Result<Arc<T>, String>;
type Slot<T> = Arc<OnceLock<Result<Decided<T>>>>;

struct LTarget {
    l: FiniteAlgebra,
    power: usize,
}

fn slot<K: Eq + Hash + Clone, T>(map: &Mutex<HashMap<K, Slot<T>>>, key: &K) -> Slot<T> {
    map.lock().expect("cache lock").entry(key.clone()).or_default().clone()
}

fn budget_reason(e: Error) -> Result<String> {
    match e {
        Error::BudgetExceeded { what, limit } => Ok(format!("{what} limit {limit} exceeded")),
        e => Err(e),
    }
}

fn encode(coords: &[usize], base: usize) -> usize {
    coords.iter().fold(0, |acc, &c| acc * base + c)
}

fn fits(sizes: &[u128], budget: &Budget) -> bool {
    let total: u128 = sizes.iter().sum();
    let table: u128 = sizes.iter().product();
    total <= budget.max_elements as u128 && table <= MAX_TABLE
}

/// Membership of subalgebras of `B(n, ℓ)` (and of `B(n, ℓ)⁰`) in `V(A)`
/// (and `V(A⁰)`) for `A = A(G, S, α)`, with results shared per `C1`.
pub struct Prover<'a> {
    b: &'a BuildB,
    b0: FiniteAlgebra,
    a: TwoSortedActionAlgebra,
    a0: FiniteAlgebra,
    g: Arc<FiniteGroup>,
    m_max: usize,
    budget: Budget,
    delta_r: ChainStage,
    chains: Mutex<HashMap<Vec<Elem>, Slot<GroupChain>>>,
    targets: Mutex<HashMap<(Vec<Elem>, usize), Slot<LTarget>>>,
}

impl<'a> Prover<'a> {
    pub fn new(b: &'a BuildB, act: &GroupAction, m_max: usize, budget: Budget) -> Result<Prover<'a>> {
        let g = act.shared_group().clone();
        let a = build_action_algebra(&g, act)?;
        let a0 = adjoin_zero(&a.algebra)?.algebra;
        let b0 = adjoin_zero(&b.algebra.algebra)?.algebra;
        let delta_r = delta_r_stage(&a.algebra, &g, act, &budget)?;
        Ok(Prover {
            b,
            b0,
            a,
            a0,
            g,
            m_max,
            budget,
            delta_r,
            chains: Mutex::new(HashMap::new()),
            targets: Mutex::new(HashMap::new()),
        })
    }

    pub fn action_algebra(&self) -> &FiniteAlgebra {
        &self.a.algebra
    }

    pub fn zero_adjoined_action_algebra(&self) -> &FiniteAlgebra {
        &self.a0
    }

    pub fn witness(&self) -> &FiniteAlgebra {
        &self.b.algebra.algebra
    }

    pub fn zero_adjoined_witness(&self) -> &FiniteAlgebra {
        &self.b0
    }

    /// The `(Δ, R)` embedding of `L(G, 1)` into `A^S`.
    pub fn delta_r_stage(&self) -> &ChainStage {
        &self.delta_r
    }

    /// The `C1`-dependent chain, or the reason it could not be completed.
    pub fn chain(&self, c1: &[Elem]) -> Result<Decided<GroupChain>> {
        let key = c1.to_vec();
        slot(&self.chains, &key).get_or_init(|| self.group_chain(&key)).clone()
    }

    fn group_chain(&self, c1: &[Elem]) -> Result<Decided<GroupChain>> {
        let pg = &*self.b.p_group;
        let gens: Vec<usize> = c1.iter().map(|&i| self.b.x[i]).collect();
        let h_elems = subgroup_generated(pg, &gens);
        let (h, _) = pg.subgroup(&h_elems)?;
        let (p, q) = (self.b.config.p, self.b.config.q);
        let apaq = in_ap_aq(&h, p, q)?;
        if !apaq.member {
            return Err(Error::WitnessCheckFailed(format!(
                "subgroup of order {} generated by C1 is not in A_{p}A_{q}",
                h.size()
            )));
        }
        let cert = match group_in_variety(&h, &self.g, self.m_max, &self.budget) {
            Ok(Some(c)) => c,
            Ok(None) => {
                return Ok(Err(format!(
                    "H of order {} is not a quotient of a subgroup of G^m for m <= {}; \
                     A_{p}A_{q} ⊆ V(G) is assumed but not certified",
                    h.size(),
                    self.m_max
                )))
            }
            Err(e) => return Ok(Err(budget_reason(e)?)),
        };
        verify_group_certificate(&h, &self.g, &cert)?;
        let mut stages = vec![
            ChainStage {
                name: "H in ApAq",
                detail: format!("|H| = {}, verbal subgroup of order {}", h.size(), apaq.n.len()),
            },
            ChainStage {
                name: "H in V(G)",
                detail: format!(
                    "H is a quotient of a subgroup of order {} of G^{}",
                    cert.subgroup_order, cert.m
                ),
            },
        ];
        match self.lift_to_l(&h, &cert) {
            Ok(st) => stages.extend(st),
            Err(e) => return Ok(Err(budget_reason(e)?)),
        }
        Ok(Ok(Arc::new(GroupChain {
            c1: c1.to_vec(),
            h_elems,
            h,
            apaq,
            group_cert: cert,
            stages,
        })))
    }

    /// `L(S, 1) ≤ L(G^m, 1) = L(G, 1)^m` and `L(S, 1)/(θ_N, θ_N) ≅ L(H, 1)`.
    fn lift_to_l(&self, h: &FiniteGroup, cert: &GroupVarietyCertificate) -> Result<Vec<ChainStage>> {
        let g = &*self.g;
        let m = cert.m;
        let gm_size = (g.size() as u128).pow(m as u32);
        if !fits(&[gm_size, gm_size], &self.budget) {
            return Err(Error::BudgetExceeded {
                what: "power size",
                limit: self.budget.max_elements as u64,
            });
        }
        let mut gm = g.clone();
        for _ in 1..m {
            gm = FiniteGroup::direct_product(&gm, g);
        }
        let lgm = build_l(&gm, 1)?.algebra;
        let lg = build_l(g, 1)?.algebra;
        let pw = power(&lg, m)?;
        if pw.sizes() != lgm.sizes() || pw.tables() != lgm.tables() {
            return Err(Error::CertificateRejected("L(G^m, 1) differs from L(G, 1)^m".into()));
        }
        let gens: Vec<usize> = cert.tuple.iter().map(|t| encode(t, g.size())).collect();
        let mut phi = vec![usize::MAX; gm.size()];
        phi[gm.identity()] = h.identity();
        let mut queue = vec![gm.identity()];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (&t, &img) in gens.iter().zip(&cert.images) {
                let y = gm.mul(x, t);
                let z = h.mul(phi[x], img);
                if phi[y] == usize::MAX {
                    phi[y] = z;
                    queue.push(y);
                } else if phi[y] != z {
                    return Err(Error::CertificateRejected("generator map is not well defined".into()));
                }
            }
            i += 1;
        }
        queue.sort_unstable();
        let sub = SubUniverse::new(vec![queue.clone(), queue]);
        let (ls, incl) = subalgebra(&lgm, &sub)?;
        let parts: Vec<Vec<usize>> = incl.iter().map(|v| v.iter().map(|&x| phi[x]).collect()).collect();
        if !is_congruence(&ls, &parts) {
            return Err(Error::CertificateRejected("(θ_N, θ_N) is not a congruence".into()));
        }
        let theta = Congruence::new(parts.clone());
        let (qa, _) = quotient(&ls, &theta)?;
        let lh = build_l(h, 1)?.algebra;
        let maps = (0..2)
            .map(|s| {
                let mut mp = vec![0; theta.block_count(s)];
                for (i, &hv) in parts[s].iter().enumerate() {
                    mp[theta.block(s, i)] = hv;
                }
                mp
            })
            .collect();
        let iso = Homomorphism::new(maps);
        iso.verify(&qa, &lh)?;
        if !iso.is_injective() || !iso.is_surjective(&lh) {
            return Err(Error::CertificateRejected("quotient is not isomorphic to L(H, 1)".into()));
        }
        Ok(vec![
            ChainStage {
                name: "L(G^m,1) = L(G,1)^m",
                detail: format!("tables equal for m = {m}"),
            },
            ChainStage {
                name: "L(S,1) <= L(G^m,1)",
                detail: format!("closed subuniverse of order {} in each sort", ls.size(0)),
            },
            ChainStage {
                name: "L(S,1)/(θN,θN) = L(H,1)",
                detail: format!("isomorphism onto L(H,1), |H| = {}", h.size()),
            },
        ])
    }

    fn target(&self, chain: &GroupChain, r: usize) -> Result<Decided<LTarget>> {
        let key = (chain.c1.clone(), r);
        slot(&self.targets, &key).get_or_init(|| self.l_target(chain, r)).clone()
    }

    /// `L(H, r)` together with a verified embedding into `L(H^k, 1)`, which is
    /// checked to equal `L(H, 1)^k`. Copy `i` goes to the right coset of the
    /// diagonal with representative `(1, digits of i)`.
    fn l_target(&self, chain: &GroupChain, r: usize) -> Result<Decided<LTarget>> {
        let h = &chain.h;
        let n = h.size();
        if n == 1 && r > 1 {
            return Ok(Err("trivial H with r > 1 has no diagonal coset embedding".into()));
        }
        let (mut k, mut cap) = (1usize, 1usize);
        while cap < r {
            k += 1;
            cap = cap.saturating_mul(n);
        }
        let hk_size = (n as u128).pow(k as u32);
        if !fits(&[hk_size, hk_size], &self.budget) {
            return Ok(Err(format!("L(H^{k}, 1) with |H| = {n} exceeds the table limit")));
        }
        let mut hk = h.clone();
        for _ in 1..k {
            hk = FiniteGroup::direct_product(&hk, h);
        }
        let lhk = build_l(&hk, 1)?.algebra;
        if k > 1 {
            let pw = power(&build_l(h, 1)?.algebra, k)?;
            if pw.sizes() != lhk.sizes() || pw.tables() != lhk.tables() {
                return Err(Error::CertificateRejected("L(H^k, 1) differs from L(H, 1)^k".into()));
            }
        }
        let lhr = build_l(h, r)?.algebra;
        let diag = |x: usize| encode(&vec![x; k], n);
        let mut coords = vec![0; k];
        let sort2 = (0..r * n)
            .map(|y| {
                let (mut i, kk) = (y / n, y % n);
                coords[0] = kk;
                for j in (1..k).rev() {
                    coords[j] = h.mul(kk, i % n);
                    i /= n;
                }
                encode(&coords, n)
            })
            .collect();
        let emb = Homomorphism::new(vec![(0..n).map(diag).collect(), sort2]);
        emb.verify(&lhr, &lhk)?;
        if !emb.is_injective() {
            return Err(Error::CertificateRejected("L(H, r) → L(H^k, 1) is not injective".into()));
        }
        Ok(Ok(Arc::new(LTarget { l: lhr, power: k })))
    }

    /// Proves `D ∈ V(A)` for an everywhere-nonempty subuniverse `D` of
    /// `B(n, ℓ)` whose first sort is a proper subset of `X`.
    pub fn prove(&self, d: &SubUniverse) -> Result<MembershipProof> {
        let b = &self.b.algebra.algebra;
        if !d.is_everywhere_nonempty() {
            return Err(Error::InvalidAlgebra("subuniverse has an empty sort".into()));
        }
        let c1 = d.subset(0);
        if c1.len() >= self.b.x.len() {
            return self.fallback(b, &self.a.algebra, d, "C1 is all of X".into());
        }
        let chain = match self.chain(c1)? {
            Ok(c) => c,
            Err(reason) => return self.fallback(b, &self.a.algebra, d, reason),
        };
        let pg = &*self.b.p_group;
        let n = chain.h.size();
        let c2 = d.subset(1);
        let mut in_c2 = vec![false; pg.size()];
        for &y in c2 {
            in_c2[y] = true;
        }
        let mut place = vec![usize::MAX; pg.size()];
        let mut reps = Vec::new();
        for &y in c2 {
            if place[y] != usize::MAX {
                continue;
            }
            let i = reps.len();
            reps.push(y);
            for (hi, &hv) in chain.h_elems.iter().enumerate() {
                let z = pg.mul(hv, y);
                if !in_c2[z] || place[z] != usize::MAX {
                    return Err(Error::CosetDivisionFailure(format!(
                        "orbit of {} under H is not a coset inside C2",
                        pg.label(y)
                    )));
                }
                place[z] = i * n + hi;
            }
        }
        let r = reps.len();
        if r * n != c2.len() {
            return Err(Error::CosetDivisionFailure(format!("|C2| = {} is not r·{n}", c2.len())));
        }
        let target = match self.target(&chain, r)? {
            Ok(t) => t,
            Err(reason) => return self.fallback(b, &self.a.algebra, d, reason),
        };
        let (dalg, incl) = subalgebra(b, d)?;
        let sort1 = incl[0]
            .iter()
            .map(|&c| {
                chain
                    .h_elems
                    .binary_search(&self.b.x[c])
                    .map_err(|_| Error::WitnessCheckFailed("generator outside H".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let sort2 = incl[1].iter().map(|&y| place[y]).collect();
        let embedding = Homomorphism::new(vec![sort1, sort2]);
        embedding.verify(&dalg, &target.l)?;
        if !embedding.is_injective() {
            return Err(Error::CertificateRejected("D → L(H, r) is not injective".into()));
        }
        Ok(MembershipProof::Structural(StructuralCertificate {
            chain,
            r,
            coset_reps: reps,
            power: target.power,
            embedding,
        }))
    }

    /// Proves `D ∈ V(A⁰)` for an everywhere-nonempty subuniverse `D` of
    /// `B(n, ℓ)⁰`.
    pub fn prove_zero(&self, d: &SubUniverse) -> Result<MembershipProof> {
        let zeros = (self.b.x.len(), self.b.p_group.size());
        if !d.is_everywhere_nonempty() {
            return Err(Error::InvalidAlgebra("subuniverse has an empty sort".into()));
        }
        if d.subset(0) == [zeros.0] || d.subset(1) == [zeros.1] {
            return self.null_embedding(d);
        }
        let stripped = strip_zero(d, zeros).ok_or_else(|| Error::InvalidAlgebra("nothing left after stripping zeros".into()))?;
        if !is_subuniverse(&self.b.algebra.algebra, &stripped) {
            return Err(Error::InvalidAlgebra("zero-stripped set is not a subuniverse of B".into()));
        }
        let inner = self.prove(&stripped)?;
        if !inner.is_decided() && d.total_size() <= 6 {
            return self.generic(&self.b0, &self.a0, d);
        }
        Ok(MembershipProof::ZeroAdjoined {
            stripped,
            inner: Box::new(inner),
        })
    }

    /// `D` with all products zero embeds in `(A⁰)^k`: zero goes to the zero
    /// vector and the other elements to distinct nonzero vectors.
    fn null_embedding(&self, d: &SubUniverse) -> Result<MembershipProof> {
        let (dalg, incl) = subalgebra(&self.b0, d)?;
        let zero = [self.b0.size(0) - 1, self.b0.size(1) - 1];
        let base = [self.a0.size(0), self.a0.size(1)];
        let azero = [base[0] - 1, base[1] - 1];
        let mut k = 1;
        while (0..2).any(|s| (base[s] as u128).pow(k as u32) <= incl[s].len() as u128) {
            k += 1;
        }
        let maps: Vec<Vec<usize>> = (0..2)
            .map(|s| {
                let zv = encode(&vec![azero[s]; k], base[s]);
                let mut next = 0;
                incl[s]
                    .iter()
                    .map(|&e| {
                        if e == zero[s] {
                            return zv;
                        }
                        if next == zv {
                            next += 1;
                        }
                        next += 1;
                        next - 1
                    })
                    .collect()
            })
            .collect();
        let decode = |mut v: usize, s: usize| {
            let mut c = vec![0; k];
            for j in (0..k).rev() {
                c[j] = v % base[s];
                v /= base[s];
            }
            c
        };
        for x in 0..dalg.size(0) {
            for y in 0..dalg.size(1) {
                let (cx, cy) = (decode(maps[0][x], 0), decode(maps[1][y], 1));
                let prod: Vec<usize> = cx.iter().zip(&cy).map(|(&u, &v)| self.a0.apply2(0, u, v)).collect();
                if encode(&prod, base[1]) != maps[1][dalg.apply2(0, x, y)] {
                    return Err(Error::CertificateRejected("null embedding is not a homomorphism".into()));
                }
            }
        }
        let embedding = Homomorphism::new(maps);
        if !embedding.is_injective() {
            return Err(Error::CertificateRejected("null embedding is not injective".into()));
        }
        Ok(MembershipProof::Null { exponent: k, embedding })
    }

    fn fallback(&self, b: &FiniteAlgebra, a: &FiniteAlgebra, d: &SubUniverse, reason: String) -> Result<MembershipProof> {
        if d.total_size() <= 6 {
            self.generic(b, a, d)
        } else {
            Ok(MembershipProof::Undecided(reason))
        }
    }

    fn generic(&self, b: &FiniteAlgebra, a: &FiniteAlgebra, d: &SubUniverse) -> Result<MembershipProof> {
        let (dalg, _) = subalgebra(b, d)?;
        match in_variety_with(&dalg, a, &self.budget)? {
            Membership::Member(c) => Ok(MembershipProof::Generic(c)),
            Membership::NotMember { identity, .. } => Err(Error::WitnessCheckFailed(format!(
                "subalgebra violates an identity of A: {identity:?}"
            ))),
        }
    }

    /// Re-checks a proof produced by [`Prover::prove`] or
    /// [`Prover::prove_zero`] for the same `D`.
    pub fn verify(&self, d: &SubUniverse, proof: &MembershipProof, zero: bool) -> Result<()> {
        let b = if zero { &self.b0 } else { &self.b.algebra.algebra };
        let reject = |m: &str| Err(Error::CertificateRejected(m.into()));
        match proof {
            MembershipProof::Undecided(r) => Err(Error::CertificateRejected(format!("undecided: {r}"))),
            MembershipProof::Generic(c) => {
                let (dalg, _) = subalgebra(b, d)?;
                verify_certificate_with(c, if zero { &self.a0 } else { &self.a.algebra }, &dalg, &self.budget)
            }
            MembershipProof::Null { exponent, embedding } => match self.null_embedding(d)? {
                MembershipProof::Null { exponent: e, embedding: m } if e == *exponent && &m == embedding => Ok(()),
                _ => reject("null embedding differs"),
            },
            MembershipProof::ZeroAdjoined { stripped, inner } => {
                let z = (self.b.x.len(), self.b.p_group.size());
                if !zero || strip_zero(d, z).as_ref() != Some(stripped) {
                    return reject("stripped subuniverse differs");
                }
                self.verify(stripped, inner, false)
            }
            MembershipProof::Structural(cert) => {
                if zero {
                    return reject("structural proofs apply to B, not B⁰");
                }
                verify_group_certificate(&cert.chain.h, &self.g, &cert.chain.group_cert)?;
                self.lift_to_l(&cert.chain.h, &cert.chain.group_cert)?;
                let target = match self.l_target(&cert.chain, cert.r)? {
                    Ok(t) => t,
                    Err(r) => return Err(Error::CertificateRejected(r)),
                };
                if cert.chain.c1 != d.subset(0) || target.power != cert.power {
                    return reject("certificate belongs to another subalgebra");
                }
                let (dalg, _) = subalgebra(b, d)?;
                cert.embedding.verify(&dalg, &target.l)?;
                if !cert.embedding.is_injective() {
                    return reject("embedding is not injective");
                }
                Ok(())
            }
        }
    }

    /// Proves membership for every everywhere-nonempty subalgebra of `B`
    /// (or `B⁰` when `zero`) generated by at most `n` elements per sort.
    pub fn sweep(&self, n: usize, zero: bool, progress: &dyn Progress) -> Result<SweepSummary> {
        let alg = if zero { &self.b0 } else { &self.b.algebra.algebra };
        let (choices, subs) = nn_generated_subuniverses(alg, &[n, n], &self.budget, progress)?;
        let proofs: Vec<Result<MembershipProof>> = subs
            .par_iter()
            .map(|d| if zero { self.prove_zero(d) } else { self.prove(d) })
            .collect();
        let mut out = SweepSummary {
            choices,
            subalgebras: subs.len(),
            ..SweepSummary::default()
        };
        for (d, p) in subs.into_iter().zip(proofs) {
            match p? {
                MembershipProof::Undecided(r) => out.undecided.push((d, r)),
                MembershipProof::ZeroAdjoined { inner, .. } if !inner.is_decided() => {
                    let MembershipProof::Undecided(r) = *inner else { unreachable!() };
                    out.undecided.push((d, r));
                }
                p => match p.kind() {
                    "structural" => out.structural += 1,
                    "null" => out.null += 1,
                    _ => out.generic += 1,
                },
            }
        }
        progress.report("membership sweep", out.subalgebras as u64, Some(out.subalgebras as u64));
        Ok(out)
    }
}

/// `L(G, 1) → A^S`, `g ↦ (Δ(g), R(g))`, checked elementwise and, when the
/// power fits the budget, with [`Homomorphism::verify`] on `A^S`.
fn delta_r_stage(a: &FiniteAlgebra, g: &FiniteGroup, act: &GroupAction, budget: &Budget) -> Result<ChainStage> {
    let (ng, ns) = (g.size(), act.set_size());
    for x in 0..ng {
        for y in 0..ng {
            let xy = g.mul(x, y);
            if (0..ns).any(|s| act.act(x, act.act(y, s)) != act.act(xy, s)) {
                return Err(Error::ActionMismatch("action law fails".into()));
            }
        }
    }
    let rows: Vec<Vec<usize>> = (0..ng).map(|x| (0..ns).map(|s| act.act(x, s)).collect()).collect();
    if rows.iter().collect::<HashSet<_>>().len() != ng {
        return Err(Error::ActionMismatch("action is not faithful, so (Δ, R) is not injective".into()));
    }
    let sizes = [(ng as u128).pow(ns as u32), (ns as u128).pow(ns as u32)];
    if !fits(&sizes, budget) {
        return Ok(ChainStage {
            name: "(Δ,R): L(G,1) ↪ A^S",
            detail: "action law and faithfulness checked elementwise".into(),
        });
    }
    let factors = vec![a; ns];
    let pw = power(a, ns)?;
    let l = build_l(g, 1)?.algebra;
    let hom = Homomorphism::new(vec![
        (0..ng).map(|x| product_elem(&factors, 0, &vec![x; ns])).collect(),
        rows.iter().map(|r| product_elem(&factors, 1, r)).collect(),
    ]);
    hom.verify(&l, &pw)?;
    if !hom.is_injective() {
        return Err(Error::ActionMismatch("(Δ, R) is not injective".into()));
    }
    Ok(ChainStage {
        name: "(Δ,R): L(G,1) ↪ A^S",
        detail: format!("homomorphism into A^{ns} verified, injective"),
    })
}

/// Distinct subuniverses generated by `1..=n_s` elements of each sort, in
/// order of first appearance when generator choices are taken sort-major,
/// by size, then lexicographically. Also returns the number of choices.
pub fn nn_generated_subuniverses(
    alg: &FiniteAlgebra,
    n_per_sort: &[usize],
    budget: &Budget,
    progress: &dyn Progress,
) -> Result<(u64, Vec<SubUniverse>)> {
    if n_per_sort.len() != alg.sort_count() {
        return Err(Error::InvalidAlgebra("need a bound for every sort".into()));
    }
    let counts: Vec<Vec<u64>> = n_per_sort
        .iter()
        .zip(alg.sizes())
        .map(|(&n, &size)| (1..=n.min(size)).map(|k| binomial(size as u64, k as u64)).collect())
        .collect();
    let per_sort: Vec<u64> = counts.iter().map(|c| c.iter().sum()).collect();
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
                let mut r = r;
                let mut k = 0;
                while r >= counts[s][k] {
                    r -= counts[s][k];
                    k += 1;
                }
                unrank_subset(r, alg.size(s), k + 1)
            })
            .collect()
    };
    let mut offsets = Vec::with_capacity(alg.sort_count());
    let mut width = 0;
    for &n in alg.sizes() {
        offsets.push(width);
        width += n;
    }
    const CHUNK: u64 = 4096;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        let chunk: Vec<Result<(Vec<Vec<Elem>>, Vec<u64>)>> = (start..end)
            .into_par_iter()
            .map_init(
                || DenseCloser::new(alg, budget),
                |closer, idx| {
                    let cl = closer.close(&unrank(idx))?;
                    let mut bits = vec![0u64; width.div_ceil(64)];
                    for (s, v) in cl.iter().enumerate() {
                        for &e in v {
                            let i = offsets[s] + e;
                            bits[i / 64] |= 1 << (i % 64);
                        }
                    }
                    Ok((cl, bits))
                },
            )
            .collect();
        for r in chunk {
            let (cl, bits) = r?;
            if seen.insert(bits) {
                out.push(SubUniverse::new(cl));
            }
        }
        progress.report("generated subalgebras", end, Some(total));
        start = end;
    }
    Ok((total, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Silent;
    use crate::constructions::{build_b, BuildBConfig};
    use crate::groups::FiniteGroup;

    fn setup() -> (BuildB, GroupAction) {
        let b = build_b(&BuildBConfig::new(2, 4, 3, 2)).unwrap();
        let (_, act) = FiniteGroup::symmetric(3);
        (b, act)
    }

    #[test]
    fn delta_r_embeds_l_g_1() {
        let (b, act) = setup();
        let pr = Prover::new(&b, &act, 3, Budget::default()).unwrap();
        assert!(pr.delta_r_stage().detail.contains("verified"));
    }

    #[test]
    fn single_reflection_gives_two_element_h() {
        let (b, act) = setup();
        let pr = Prover::new(&b, &act, 3, Budget::default()).unwrap();
        let d = SubUniverse::new(vec![vec![0], (0..b.p_group.size()).collect()]);
        let MembershipProof::Structural(c) = pr.prove(&d).unwrap() else { panic!() };
        assert_eq!(c.chain.h.size(), 2);
        assert_eq!(c.r, b.p_group.size() / 2);
        assert_eq!(c.chain.group_cert.m, 1);
        pr.verify(&d, &MembershipProof::Structural(c), false).unwrap();
    }

    #[test]
    fn third_generator_gives_order_three() {
        let (b, act) = setup();
        let pr = Prover::new(&b, &act, 3, Budget::default()).unwrap();
        let one = b.p_group.identity();
        let d = crate::algebra::generate_subalgebra(&b.algebra.algebra, &[vec![2], vec![one]]).unwrap();
        let p = pr.prove(&d).unwrap();
        let MembershipProof::Structural(c) = &p else { panic!() };
        assert_eq!(c.chain.h.size(), 3);
        assert!(c.chain.h.is_abelian());
        assert_eq!(c.r, 1);
    }

    #[test]
    fn zero_variants() {
        let (b, act) = setup();
        let pr = Prover::new(&b, &act, 3, Budget::default()).unwrap();
        let (z1, z2) = (3, b.p_group.size());
        let null = SubUniverse::new(vec![vec![z1], vec![0, 5, z2]]);
        let p = pr.prove_zero(&null).unwrap();
        assert_eq!(p.kind(), "null");
        pr.verify(&null, &p, true).unwrap();
        let d = crate::algebra::generate_subalgebra(pr.zero_adjoined_witness(), &[vec![0, z1], vec![0]]).unwrap();
        let p = pr.prove_zero(&d).unwrap();
        assert!(matches!(p, MembershipProof::ZeroAdjoined { .. }));
        pr.verify(&d, &p, true).unwrap();
    }

    #[test]
    fn full_first_sort_is_undecided() {
        let (b, act) = setup();
        let pr = Prover::new(&b, &act, 3, Budget::default()).unwrap();
        let d = SubUniverse::full(&b.algebra.algebra);
        assert!(!pr.prove(&d).unwrap().is_decided());
    }

    #[test]
    fn sweep_enumeration_on_small_algebra() {
        let (g, act) = FiniteGroup::symmetric(3);
        let a = build_action_algebra(&g, &act).unwrap().algebra;
        let (choices, subs) = nn_generated_subuniverses(&a, &[1, 1], &Budget::default(), &Silent).unwrap();
        assert_eq!(choices, 18);
        // ⟨g⟩ acting on one point: orbit of the point under a cyclic group
        assert!(subs.iter().all(|s| s.subset(0).len() == 1));
        assert!(subs.len() <= 18);
    }
}
