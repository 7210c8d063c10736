use std::time::Instant;

use rayon::prelude::*;

use crate::algebra::{
    direct_product, find_isomorphism, free_algebra_with, generate_subalgebra_with, holds_with, in_variety_with,
    product_coords, product_elem, subalgebra, verify_certificate_with, vn_basis_with, Elem, FiniteAlgebra,
    Homomorphism, Membership,
};
use crate::budget::{Budget, Silent};
use crate::constructions::{
    adjoin_zero, automatic_from_action, build_action_algebra, build_b, build_l, nn_generated_subuniverses,
    omega_tau_star_identities, square, star, BuildBConfig, Prover,
};
use crate::error::{Error, Result};
use crate::groups::{
    in_ap_aq, presentation_hpc, subgroup_generated, todd_coxeter, FiniteGroup, GroupAction,
};
use crate::terms::format_identity;
use crate::Signature;

use super::boozer::{boozer_fragment_check, FragmentConfig};
use super::report::ScenarioReport;
use super::suite::{random_faithful_actions, MAX_STAR_SIZE};

pub const SCENARIO_IDS: &[&str] = &[
    "s3-sizes",
    "omega-tau-star",
    "star-square-roundtrips",
    "star-subalgebras",
    "functor-checks",
    "dihedral-ladder",
    "apaq",
    "build-b",
    "subalgebra-membership",
    "free-oracles",
    "delta-psi",
];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Scenario ids to run; empty means all.
    pub scenarios: Vec<String>,
    pub budget: Budget,
    pub suite_size: usize,
    pub max_group_order: usize,
    pub m_max: usize,
    /// Largest `|A1| + |A2|` for the exhaustive subset checks on `A*`.
    pub small_total: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            scenarios: Vec::new(),
            // exhaustive four-variable checks on the largest suite stars
            budget: Budget {
                max_assignments: (MAX_STAR_SIZE as u64).pow(4),
                ..Budget::default()
            },
            suite_size: 20,
            max_group_order: 12,
            m_max: 3,
            small_total: 8,
        }
    }
}

/// Runs the selected scenarios (concurrently) and returns their reports in
/// the order of [`SCENARIO_IDS`].
pub fn verify_suite(cfg: &VerifyConfig) -> Result<Vec<ScenarioReport>> {
    for id in &cfg.scenarios {
        if !SCENARIO_IDS.contains(&id.as_str()) {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("unknown scenario `{id}`"),
            });
        }
    }
    let ids: Vec<&str> = SCENARIO_IDS
        .iter()
        .copied()
        .filter(|id| cfg.scenarios.is_empty() || cfg.scenarios.iter().any(|s| s == id))
        .collect();
    Ok(ids.par_iter().map(|id| run_scenario(id, cfg)).collect())
}

/// One scenario by id. Errors become failed assertions, budget exhaustion
/// a skip.
pub fn run_scenario(id: &str, cfg: &VerifyConfig) -> ScenarioReport {
    let start = Instant::now();
    let mut rep = ScenarioReport::new(id);
    let r = match id {
        "s3-sizes" => s3_sizes(&mut rep),
        "omega-tau-star" => omega_tau_star(cfg, &mut rep),
        "star-square-roundtrips" => roundtrips(cfg, &mut rep),
        "star-subalgebras" => star_subalgebras(cfg, &mut rep),
        "functor-checks" => functor_checks(cfg, &mut rep),
        "dihedral-ladder" => dihedral_ladder(cfg, &mut rep),
        "apaq" => apaq(&mut rep),
        "build-b" => build_b_scenario(cfg, &mut rep),
        "subalgebra-membership" => membership(cfg, &mut rep),
        "free-oracles" => free_oracles(cfg, &mut rep),
        "delta-psi" => delta_psi(cfg, &mut rep),
        other => Err(Error::Syntax {
            pos: 0,
            msg: format!("unknown scenario `{other}`"),
        }),
    };
    if let Err(e) = r {
        rep.absorb("scenario error", e);
    }
    rep.elapsed = start.elapsed();
    rep
}

fn s3() -> (GroupAction, FiniteAlgebra) {
    let (g, act) = FiniteGroup::symmetric(3);
    let a = build_action_algebra(&g, &act).expect("S3 action").algebra;
    (act, a)
}

fn s3_sizes(rep: &mut ScenarioReport) -> Result<()> {
    let (act, a) = s3();
    rep.param("G", "S3").param("S", "{1,2,3}");
    rep.check("|A(G,S)*|", "S3", 18, star(&a)?.algebra.total_size());
    rep.check("|(A(G,S)0)*|", "S3", 28, star(&adjoin_zero(&a)?.algebra)?.algebra.total_size());
    rep.check("|Auto(G,S)|", "S3", 10, automatic_from_action(&act)?.size());
    Ok(())
}

fn suite(cfg: &VerifyConfig, rep: &mut ScenarioReport) -> Result<Vec<(String, FiniteAlgebra)>> {
    rep.param("seed", cfg.seed)
        .param("suite size", cfg.suite_size)
        .param("max order", cfg.max_group_order);
    random_faithful_actions(cfg.seed, cfg.suite_size, cfg.max_group_order)?
        .into_iter()
        .map(|m| Ok((m.name, build_action_algebra(m.action.group(), &m.action)?.algebra)))
        .collect()
}

fn omega_tau_star(cfg: &VerifyConfig, rep: &mut ScenarioReport) -> Result<()> {
    let ids = omega_tau_star_identities();
    let budget = cfg.budget;
    let sig = Signature::tau_star();
    for (name, a) in suite(cfg, rep)? {
        let st = star(&a)?.algebra;
        let mut bad = Vec::new();
        for id in &ids {
            if !holds_with(&st, id, &budget)?.is_holds() {
                bad.push(format_identity(id, &sig));
            }
        }
        let inputs = format!("{name}, |A*|={}", st.total_size());
        rep.claim("three defining identities hold exhaustively", &inputs, bad.is_empty(), bad.join("; "));
    }
    Ok(())
}

fn roundtrips(cfg: &VerifyConfig, rep: &mut ScenarioReport) -> Result<()> {
    for (name, a) in suite(cfg, rep)? {
        let c = star(&a)?.algebra;
        let sq = square(&c)?.algebra;
        rep.claim("(A*)□ ≅ A", &name, find_isomorphism(&sq, &a)?.is_some(), "no isomorphism");
        let back = star(&sq)?.algebra;
        rep.claim("(C□)* ≅ C for C = A*", &name, find_isomorphism(&back, &c)?.is_some(), "no isomorphism");
    }
    // d = min on a chain, f = identity: idempotent but not rectangular
    let chain = FiniteAlgebra::from_fn(Signature::tau_star(), vec![3], |sym, x| if sym == 0 { x[0].min(x[1]) } else { x[0] })?;
    let observed = match square(&chain) {
        Err(Error::NotInOmegaTauStar { identity, .. }) => format!("rejected at {identity}"),
        Err(e) => format!("other error: {e}"),
        Ok(_) => "accepted".into(),
    };
    rep.check(
        "square rejects a τ*-algebra outside the variety",
        "d = min on 3-chain, f = id",
        format!("rejected at {}", format_identity(&omega_tau_star_identities()[1], &Signature::tau_star())),
        observed,
    );
    Ok(())
}

fn bits(m: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| m >> i & 1 == 1)
}

/// Closure of a subset of a single-sorted algebra with at most 32 elements.
fn mask_closure(c: &FiniteAlgebra, mut m: u32) -> u32 {
    loop {
        let mut next = m;
        for (si, sym) in c.signature().symbols().iter().enumerate() {
            match sym.arity() {
                1 => bits(m).for_each(|x| next |= 1 << c.apply(si, &[x])),
                2 => bits(m).for_each(|x| bits(m).for_each(|y| next |= 1 << c.apply2(si, x, y))),
                _ => unreachable!("τ* is unary and binary"),
            }
        }
        if next == m {
            return m;
        }
        m = next;
    }
}

/// Second-sort closure of `(m1, m2)` in a τ-algebra.
fn tau_closure(a: &FiniteAlgebra, m1: u32, mut m2: u32) -> u32 {
    loop {
        let mut next = m2;
        bits(m1).for_each(|g| bits(m2).for_each(|y| next |= 1 << a.apply2(0, g, y)));
        if next == m2 {
            return m2;
        }
        m2 = next;
    }
}

/// Suite algebras with `|A1| + |A2| ≤ small_total`, their zero-adjoined
/// versions and all their `(1,1)`-generated subalgebras of that size,
/// without repetition.
fn small_algebras(cfg: &VerifyConfig, rep: &mut ScenarioReport) -> Result<Vec<(String, FiniteAlgebra)>> {
    let mut out: Vec<(String, FiniteAlgebra)> = Vec::new();
    let mut push = |name: String, a: FiniteAlgebra| {
        if a.total_size() <= cfg.small_total && !out.iter().any(|(_, b)| b.tables() == a.tables() && b.sizes() == a.sizes()) {
            out.push((name, a));
        }
    };
    for (name, a) in suite(cfg, rep)? {
        let (_, subs) = nn_generated_subuniverses(&a, &[1, 1], &cfg.budget, &Silent)?;
        for (i, d) in subs.iter().enumerate() {
            if d.total_size() <= cfg.small_total {
                push(format!("{name}/sub{i}"), subalgebra(&a, d)?.0);
            }
        }
        push(format!("{name}0"), adjoin_zero(&a)?.algebra);
        push(name, a);
    }
    Ok(out)
}

fn star_subalgebras(cfg: &VerifyConfig, rep: &mut ScenarioReport) -> Result<()> {
    let algs = small_algebras(cfg, rep)?;
    let (mut f1_subsets, mut f1_bad, mut gen_bad, mut f2_subs, mut f2_bad) = (0u64, Vec::new(), Vec::new(), 0u64, Vec::new());
    for (name, a) in &algs {
        let st = star(a)?;
        let c = &st.algebra;
        let (n1, n2) = (a.size(0), a.size(1));
        let n = c.size(0);
        let full = (1u64 << n) as u32 - 1 + if n == 32 { 0 } else { 0 };
        let proj = |m: u32| {
            bits(m).fold((0u32, 0u32), |(p1, p2), x| {
                let (g, s) = st.split(x);
                (p1 | 1 << g, p2 | 1 << s)
            })
        };
        let pairs = |m1: u32, m2: u32| {
            bits(m1).fold(0u32, |acc, g| bits(m2).fold(acc, |acc, s| acc | 1 << st.pair(g, s)))
        };
        let mut min_c = usize::MAX;
        let mut star_subs = 0u64;
        for y in 1..=full {
            f1_subsets += 1;
            let cl = mask_closure(c, y);
            let (p1, p2) = proj(y);
            if cl != pairs(p1, tau_closure(a, p1, p2)) && f1_bad.is_empty() {
                f1_bad.push(format!("{name}, Y={y:#b}"));
            }
            if cl == full {
                min_c = min_c.min(y.count_ones() as usize);
            }
            if cl == y {
                star_subs += 1;
                let (q1, q2) = proj(y);
                if (y != pairs(q1, q2) || tau_closure(a, q1, q2) != q2) && f2_bad.is_empty() {
                    f2_bad.push(format!("{name}, U={y:#b}"));
                }
            }
        }
        let full1 = (1u32 << n1) - 1;
        let mut min_a2 = usize::MAX;
        let mut tau_subs = 0u64;
        for m1 in 1..=full1 {
            for m2 in 1..(1u32 << n2) {
                let cl = tau_closure(a, m1, m2);
                if m1 == full1 && cl == (1u32 << n2) - 1 {
                    min_a2 = min_a2.min(m2.count_ones() as usize);
                }
                if cl == m2 {
                    tau_subs += 1;
                }
            }
        }
        let min_a = n1.max(min_a2);
        if min_a != min_c && gen_bad.is_empty() {
            gen_bad.push(format!("{name}: A is ({min_a},{min_a})-generated, A* needs {min_c}"));
        }
        f2_subs += star_subs;
        if star_subs != tau_subs && f2_bad.is_empty() {
            f2_bad.push(format!("{name}: {star_subs} subalgebras of A*, {tau_subs} of A"));
        }
    }
    let inputs = format!("{} algebras", algs.len());
    rep.claim(
        &format!("<Y> in A* equals <pi1 Y, pi2 Y>* ({f1_subsets} subsets)"),
        &inputs,
        f1_bad.is_empty(),
        f1_bad.join("; "),
    );
    rep.claim("A (n,n)-generated iff A* n-generated, every n", &inputs, gen_bad.is_empty(), gen_bad.join("; "));
    rep.claim(
        &format!("subalgebras of A* are B* for subalgebras B of A ({f2_subs} subalgebras)"),
        &inputs,
        f2_bad.is_empty(),
        f2_bad.join("; "),
    );
    Ok(())
}

fn member_checked(b: &FiniteAlgebra, a: &FiniteAlgebra, budget: &Budget) -> Result<(bool, String)> {
    Ok(match in_variety_with(b, a, budget)? {
        Membership::Member(cert) => match verify_certificate_with(&cert, a, b, budget) {
            Ok(()) => (true, String::new()),
            Err(e) => (false, format!("certificate rejected: {e}")),
        },
        Membership::NotMember { identity, .. } => (false, format!("violates {}", format_identity(&identity, a.signature()))),
    })
}

/// Extends a homomorphism to the zero-adjoined algebras, zeros last.
fn extend_zero(h: &Homomorphism, dom: &FiniteAlgebra, cod: &FiniteAlgebra) -> Homomorphism {
    Homomorphism::new(
        (0..2)
            .map(|s| (0..dom.size(s)).map(|e| h.map(s, e)).chain([cod.size(s)]).collect())
            .collect(),
    )
}

fn functor_checks(cfg: &VerifyConfig, rep: &mut ScenarioReport) -> Result<()> {
    let b = &cfg.budget;
    let (_, a) = s3();
    let l = build_l(&FiniteGroup::cyclic(2), 1)?.algebra;
    let (ok, why) = member_checked(&l, &a, b)?;
    rep.claim("L(C2,1) in V(A(S3))", "certificate verified", ok, why);
    for n in [2usize, 3] {
        let cn = FiniteGroup::cyclic(n);
        let (l1, l2) = (build_l(&cn, 1)?.algebra, build_l(&cn, 2)?.algebra);
        let inputs = format!("n={n}, certificate verified");
        let (ok, why) = member_checked(&l2, &l1, b)?;
        rep.claim("L(Cn,2) in V(L(Cn,1))", &inputs, ok, why);
        let (ok, why) = member_checked(&star(&l2)?.algebra, &star(&l1)?.algebra, b)?;
        rep.claim("L(Cn,2)* in V(L(Cn,1)*)", &inputs, ok, why);
        let (ok, why) = member_checked(&adjoin_zero(&l2)?.algebra, &adjoin_zero(&l1)?.algebra, b)?;
        rep.claim("L(Cn,2)0 in V(L(Cn,1)0)", &inputs, ok, why);
    }

    let algs = small_algebras(cfg, rep)?;
    let (mut subs, mut bad) = (0usize, Vec::new());
    for (name, a) in &algs {
        let a0 = adjoin_zero(a)?.algebra;
        let (_, ds) = nn_generated_subuniverses(a, &[1, 1], b, &Silent)?;
        for d in &ds {
            subs += 1;
            let (dalg, incl) = subalgebra(a, d)?;
            let h = extend_zero(&Homomorphism::new(incl), &dalg, a);
            let d0 = adjoin_zero(&dalg)?.algebra;
            if let Err(e) = h.verify(&d0, &a0).and_then(|_| h.is_injective().then_some(()).ok_or(Error::NotAHomomorphism("not injective".into()))) {
                bad.push(format!("{name}: subalgebra inclusion: {e}"));
            }
        }
        let factors = [a, a];
        let p = direct_product(&factors)?;
        let p0 = adjoin_zero(&p)?.algebra;
        let z0 = [&a0, &a0];
        let pz = direct_product(&z0)?;
        let embed = Homomorphism::new(
            (0..2)
                .map(|s| {
                    (0..p.size(s))
                        .map(|e| product_elem(&z0, s, &product_coords(&factors, s, e)))
                        .chain([product_elem(&z0, s, &[a.size(s), a.size(s)])])
                        .collect()
                })
                .collect(),
        );
        if let Err(e) = embed.verify(&p0, &pz) {
            bad.push(format!("{name}: (AxA)0 -> A0xA0: {e}"));
        } else if !embed.is_injective() {
            bad.push(format!("{name}: (AxA)0 -> A0xA0 not injective"));
        }
        let proj = Homomorphism::new(
            (0..2)
                .map(|s| (0..p.size(s)).map(|e| product_coords(&factors, s, e)[0]).collect::<Vec<Elem>>())
                .collect(),
        );
        let r = proj.verify(&p, a).and_then(|_| extend_zero(&proj, &p, a).verify(&p0, &a0));
        if let Err(e) = r {
            bad.push(format!("{name}: projection: {e}"));
        }
    }
    rep.claim(
        &format!("zero adjunction preserves embeddings, products and homomorphisms ({} algebras, {subs} subalgebras)", algs.len()),
        "small suite algebras",
        bad.is_empty(),
        bad.join("; "),
    );
    Ok(())
}

fn find_element(g: &FiniteGroup, act: &GroupAction, perm: &[usize]) -> usize {
    (0..g.size())
        .find(|&x| (0..perm.len()).all(|i| act.act(x, i) == perm[i]))
        .expect("permutation lies in the group")
}

fn dihedral_ladder(cfg: &VerifyConfig, rep: &mut ScenarioReport) -> Result<()> {
    for c in 1..=4usize {
        let pres = presentation_hpc(2, c);
        let (h, _) = todd_coxeter(&pres, cfg.budget.coset_limit)?;
        let order = 1usize << (c + 1);
        rep.check("|H_{2,c}| by coset enumeration", &format!("c={c}"), order, h.size());
        // two reflections of the 2^c-gon generate the dihedral group of that order
        let m = 1usize << c;
        let (d, gens) = if m == 2 {
            // the 2-gon acts on its vertices through C2 only
            let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
            (v4, [2, 1])
        } else {
            let (d, act) = FiniteGroup::dihedral(m);
            let r1: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
            let r2: Vec<usize> = (0..m).map(|i| (m + 1 - i) % m).collect();
            let gens = [find_element(&d, &act, &r1), find_element(&d, &act, &r2)];
            (d, gens)
        };
        let quotient = pres.relators_hold(&d, &gens).is_none() && subgroup_generated(&d, &gens).len() == order;
        rep.claim("dihedral group of that order is a quotient", &format!("c={c}"), quotient, "relators or generation fail");
    }
    let (h, _) = todd_coxeter(&presentation_hpc(3, 2), cfg.budget.coset_limit)?;
    rep.check("|H_{3,2}| by coset enumeration", "p=3 c=2", 27, h.size());
    // Heisenberg group mod 3: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')
    let idx = |a: usize, b: usize, c: usize| (a % 3) * 9 + (b % 3) * 3 + c % 3;
    let mut mult = Vec::with_capacity(27 * 27);
    for x in 0..27 {
        for y in 0..27 {
            let (a, b, c) = (x / 9, x / 3 % 3, x % 3);
            let (a2, b2, c2) = (y / 9, y / 3 % 3, y % 3);
            mult.push(idx(a + a2, b + b2, c + c2 + a * b2) as u32);
        }
    }
    let heis = FiniteGroup::from_table(27, mult)?;
    let gens = [idx(1, 0, 0), idx(0, 1, 0)];
    let quotient = presentation_hpc(3, 2).relators_hold(&heis, &gens).is_none() && subgroup_generated(&heis, &gens).len() == 27;
    rep.claim("Heisenberg group mod 3 is a quotient", "p=3 c=2", quotient, "relators or generation fail");
    Ok(())
}

fn apaq(rep: &mut ScenarioReport) -> Result<()> {
    let (s3, _) = FiniteGroup::symmetric(3);
    let o = in_ap_aq(&s3, 3, 2)?;
    rep.check("S3 in A3 A2", "p=3 q=2", true, o.member);
    rep.check("|N| for S3", "p=3 q=2", 3, o.n.len());
    rep.check("S3 in A2 A2", "p=2 q=2", false, in_ap_aq(&s3, 2, 2)?.member);
    let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
    rep.check("C2xC2 in A2 A2", "p=2 q=2", true, in_ap_aq(&v4, 2, 2)?.member);
    rep.check("C2xC2 in A3 A2", "p=3 q=2", true, in_ap_aq(&v4, 3, 2)?.member);
    Ok(())
}

fn build_b_scenario(cfg: &VerifyConfig, rep: &mut ScenarioReport) -> Result<()> {
    rep.param("n", 2).param("p", 3).param("q", 2);
    for ell in [4usize, 20] {
        let mut bc = BuildBConfig::new(2, ell, 3, 2);
        bc.budget = cfg.budget;
        let b = build_b(&bc)?;
        let inputs = format!("l={ell}");
        let (n1, n2) = b.algebra.sizes();
        rep.check("nilpotency class c", &inputs, 1, b.c);
        rep.check("|G_{V,p,c}|", &inputs, 81, b.gv_order);
        rep.check("sizes of B", &inputs, "(3, 324)", format!("({n1}, {n2})"));
        rep.claim("|P| >= l", &inputs, n2 >= ell, n2);
        let one = b.p_group.identity();
        let gen = generate_subalgebra_with(&b.algebra.algebra, &[(0..n1).collect(), vec![one]], &cfg.budget)?;
        rep.claim("B generated by (X, {1})", &inputs, gen.sizes() == vec![n1, n2], format!("{:?}", gen.sizes()));
        rep.claim("X generates P", &inputs, b.fnpq.generates, "no");
        let orders: Vec<String> = b.fnpq.subsets.iter().map(|s| format!("{}{}", s.order, if s.member { "" } else { "!" })).collect();
        rep.claim(
            "every n-subset of X generates a group in A_p A_q",
            &format!("{inputs}, orders {}", orders.join(",")),
            b.fnpq.subsets.iter().all(|s| s.member),
            "a subset fails",
        );
    }
    Ok(())
}

fn membership(cfg: &VerifyConfig, rep: &mut ScenarioReport) -> Result<()> {
    rep.param("n", 2).param("l", 4).param("m_max", cfg.m_max);
    let mut bc = BuildBConfig::new(2, 4, 3, 2);
    bc.budget = cfg.budget;
    let b = build_b(&bc)?;
    let (act, _) = s3();
    let prover = Prover::new(&b, &act, cfg.m_max, cfg.budget)?;
    rep.note(format!("{}: {}", prover.delta_r_stage().name, prover.delta_r_stage().detail));
    for (zero, what) in [(false, "B(2,4)"), (true, "B(2,4)0")] {
        let s = prover.sweep(2, zero, &Silent)?;
        rep.note(format!(
            "{what}: {} choices, {} subalgebras: {} structural, {} null, {} generic",
            s.choices, s.subalgebras, s.structural, s.null, s.generic
        ));
        let first = s.undecided.first().map(|(_, r)| r.clone()).unwrap_or_default();
        rep.check("(2,2)-generated subalgebras left undecided", what, 0, format!("{}{}", s.undecided.len(), if first.is_empty() { String::new() } else { format!(" ({first})") }));
    }
    Ok(())
}

fn free_oracles(cfg: &VerifyConfig, rep: &mut ScenarioReport) -> Result<()> {
    let (act, a) = s3();
    let st = star(&a)?.algebra;
    rep.check("|F(A(S3)*, 1)|", "", 6, free_algebra_with(&st, &[1], &cfg.budget)?.algebra.total_size());
    let auto = automatic_from_action(&act)?;
    rep.check("|F(Auto(S3), 1)|", "", 2, free_algebra_with(&auto.algebra, &[1], &cfg.budget)?.algebra.total_size());
    let basis = vn_basis_with(&st, &[1], &cfg.budget)?;
    let mut ok = true;
    for id in &basis {
        ok &= holds_with(&st, id, &cfg.budget)?.is_holds();
    }
    rep.claim(&format!("vn_basis(A(S3)*, 1) holds in A(S3)* ({} identities)", basis.len()), "", ok, "an identity fails");
    Ok(())
}

fn delta_psi(cfg: &VerifyConfig, rep: &mut ScenarioReport) -> Result<()> {
    let (act, _) = s3();
    let auto = automatic_from_action(&act)?;
    let mut wc = BuildBConfig::new(2, 4, 3, 2);
    wc.budget = cfg.budget;
    let fc = FragmentConfig {
        witness: Some(wc),
        budget: cfg.budget,
        ..FragmentConfig::default()
    };
    let inner = boozer_fragment_check(&auto, "Auto(S3)", &fc)?;
    rep.parameters = inner.parameters;
    rep.assertions = inner.assertions;
    rep.notes = inner.notes;
    // S3 has no laws among words of length 4, so longer words exercise Ψ
    let long = FragmentConfig {
        max_len: 7,
        witness: None,
        ..fc
    };
    let inner = boozer_fragment_check(&auto, "Auto(S3), L=7", &long)?;
    rep.assertions.extend(inner.assertions);
    rep.notes.extend(inner.notes.into_iter().map(|n| format!("L=7: {n}")));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_scenarios_pass() {
        let cfg = VerifyConfig::default();
        for id in ["s3-sizes", "apaq", "dihedral-ladder", "free-oracles"] {
            let r = run_scenario(id, &cfg);
            assert!(!r.failed(), "{}", r.render());
            assert!(r.skipped.is_none());
        }
    }

    #[test]
    fn unknown_scenario_rejected() {
        let cfg = VerifyConfig {
            scenarios: vec!["nope".into()],
            ..VerifyConfig::default()
        };
        assert!(verify_suite(&cfg).is_err());
    }
}
