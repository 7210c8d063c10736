use crate::algebra::{holds_with, Identity, Var};
use crate::budget::Budget;
use crate::constructions::{adjoin_zero, automatic_from_zero_adjoined, build_b, AutomaticAlgebra, BuildBConfig};
use crate::error::Result;
use crate::terms::{delta_identities, format_identity, psi_classes, sharp, word_term, Word};

use super::report::ScenarioReport;

#[derive(Clone, Debug)]
pub struct FragmentConfig {
    /// Longest word in the Ψ classes.
    pub max_len: usize,
    /// Largest index in `Δ(N)`.
    pub n_max: usize,
    /// When set, the fragment is also checked on the automatic algebra of
    /// `B(n, ℓ)⁰`, which must satisfy the identities in at most `n`
    /// variables.
    pub witness: Option<BuildBConfig>,
    pub budget: Budget,
}

impl Default for FragmentConfig {
    fn default() -> Self {
        FragmentConfig {
            max_len: 4,
            n_max: 4,
            witness: None,
            budget: Budget::default(),
        }
    }
}

/// `[x^7]y ≈ [x]y`.
fn seventh_power() -> Identity {
    let y = Var::new(0, 1);
    Identity::new(word_term(&Word::new(vec![0; 7]), y), word_term(&Word::new(vec![0]), y))
}

/// Checks every identity of the family in `alg` and records one assertion
/// naming the first failure, if any.
fn check_family(
    rep: &mut ScenarioReport,
    label: &str,
    target: &str,
    alg: &AutomaticAlgebra,
    ids: &[Identity],
    budget: &Budget,
) -> Result<()> {
    let sig = alg.algebra.signature();
    let mut failed = Vec::new();
    for id in ids {
        if !alg.holds(id, budget)?.is_holds() {
            failed.push(format_identity(id, sig));
        }
    }
    let detail = format!("{} of {} fail, first: {}", failed.len(), ids.len(), failed.first().map_or("", |s| s));
    rep.claim(&format!("{label}: all {} identities hold", ids.len()), target, failed.is_empty(), detail);
    Ok(())
}

/// The `Δ(N)` identities, the `Ψ` classes of words of length at most `L`
/// and `[x^7]y ≈ [x]y` on `Auto(G, S, σ)`, then optionally on a witness.
pub fn boozer_fragment_check(auto: &AutomaticAlgebra, name: &str, cfg: &FragmentConfig) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("delta-psi");
    rep.param("algebra", name).param("L", cfg.max_len).param("N", cfg.n_max);
    let b = &cfg.budget;
    let delta = delta_identities(cfg.n_max);
    check_family(&mut rep, "Delta(N)", name, auto, &delta, b)?;

    let two = auto.two_sorted();
    let psi = psi_classes(&two.algebra, two.zeros, cfg.max_len, b)?;
    let (psi_ids, psi0_ids) = (psi.psi_identities(), psi.psi0_identities());
    rep.note(format!(
        "{} word classes, {} Psi pairs, {} zero words",
        psi.classes.len(),
        psi_ids.len(),
        psi.zero_words.len()
    ));
    check_family(&mut rep, "Psi", name, auto, &psi_ids, b)?;
    check_family(&mut rep, "Psi0", name, auto, &psi0_ids, b)?;
    let total = (0..auto.g_size).all(|x| (0..auto.s_size).all(|y| auto.algebra.apply2(0, x, auto.g_size + y) != auto.zero()));
    if total {
        rep.check("zero words (total action)", name, 0, psi.zero_words.len());
    }
    if cfg.max_len >= 7 {
        let (c7, c1) = (psi.class_of(&Word::new(vec![0; 7])), psi.class_of(&Word::new(vec![0])));
        rep.claim("[x^7]y and [x]y share a Psi class", name, c7.is_some() && c7 == c1, format!("{c7:?} vs {c1:?}"));
    }
    let seventh = seventh_power();
    rep.claim("[x^7]y = [x]y", name, auto.holds(&seventh, b)?.is_holds(), "fails");
    let sharp_id = Identity::new(sharp(&seventh.lhs)?, sharp(&seventh.rhs)?);
    rep.claim(
        "sharp form of [x^7]y = [x]y",
        &format!("two-sorted {name}"),
        holds_with(&two.algebra, &sharp_id, b)?.is_holds(),
        "fails",
    );

    if let Some(wc) = &cfg.witness {
        let bb = build_b(wc)?;
        let c = automatic_from_zero_adjoined(&adjoin_zero(&bb.algebra.algebra)?)?;
        let label = format!("C = Auto(B({},{})0)", wc.n, wc.ell);
        rep.param("witness", &label).param("witness size", c.size());
        check_family(&mut rep, "Delta(N)", &label, &c, &delta, b)?;
        let all: Vec<Identity> = psi_ids.iter().chain(&psi0_ids).cloned().chain([seventh]).collect();
        let (few, many): (Vec<Identity>, Vec<Identity>) = all.into_iter().partition(|id| id.vars().len() <= wc.n);
        check_family(&mut rep, &format!("identities in <= {} variables", wc.n), &label, &c, &few, b)?;
        let mut failing = 0;
        for id in &many {
            if !c.holds(id, b)?.is_holds() {
                failing += 1;
            }
        }
        rep.note(format!(
            "{label}: {failing} of {} identities in more than {} variables fail",
            many.len(),
            wc.n
        ));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::automatic_from_action;
    use crate::groups::FiniteGroup;

    #[test]
    fn s3_fragment_passes() {
        let (_, act) = FiniteGroup::symmetric(3);
        let auto = automatic_from_action(&act).unwrap();
        let rep = boozer_fragment_check(&auto, "Auto(S3)", &FragmentConfig::default()).unwrap();
        assert!(!rep.failed(), "{}", rep.render());
    }
}
