use std::sync::Arc;

use serde_json::json;

use super::TwoSortedActionAlgebra;
use crate::algebra::{generate_subalgebra_with, FiniteAlgebra, Signature};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groups::{
    check_fnpq_witness, extend_generator_map, is_prime, presentation_gvpc, semidirect_product, todd_coxeter,
    FiniteGroup, FnpqReport, VectorSpaceFq,
};

/// Parameters of [`build_b`].
#[derive(Clone, Copy, Debug)]
pub struct BuildBConfig {
    pub n: usize,
    pub ell: usize,
    pub p: u64,
    pub q: u64,
    pub max_c: usize,
    pub budget: Budget,
}

impl BuildBConfig {
    pub fn new(n: usize, ell: usize, p: u64, q: u64) -> BuildBConfig {
        BuildBConfig {
            n,
            ell,
            p,
            q,
            max_c: 6,
            budget: Budget::default(),
        }
    }
}

/// `B(n, ℓ)`: the subalgebra of `L(P, 1)` with universes `X` and `P`.
#[derive(Clone, Debug)]
pub struct BuildB {
    pub algebra: TwoSortedActionAlgebra,
    pub config: BuildBConfig,
    pub c: usize,
    pub gv_order: usize,
    pub space: VectorSpaceFq,
    /// `P = G_{V,p,c} ⋊ V`, element `(g, v)` at index `g·|V| + v`.
    pub p_group: Arc<FiniteGroup>,
    /// `X = {e1, ..., en, [0]}` as elements of `P`; sort-1 element `i` is `x[i]`.
    pub x: Vec<usize>,
    pub fnpq: FnpqReport,
}

/// Iterates `c = 1, 2, ...` until `|G_{V,p,c}| >= ℓ`, forms `P`, checks
/// that `X` witnesses `P ∈ F_{n,p,q}`, and returns `B(n, ℓ)` after checking
/// that it is generated by `(X, {1})` and that `|P| >= ℓ`.
pub fn build_b(cfg: &BuildBConfig) -> Result<BuildB> {
    for r in [cfg.p, cfg.q] {
        if !is_prime(r) {
            return Err(Error::NotPrime(r));
        }
    }
    if cfg.p == cfg.q {
        return Err(Error::InvalidGroup("p and q must differ".into()));
    }
    if cfg.n < 2 || cfg.ell == 0 {
        return Err(Error::InvalidGroup("need n >= 2 and ℓ > 0".into()));
    }
    let mut found = None;
    for c in 1..=cfg.max_c {
        let gv = presentation_gvpc(cfg.n, cfg.q, cfg.p, c, &cfg.budget)?;
        let (g, table) = todd_coxeter(&gv.presentation, cfg.budget.coset_limit)?;
        if g.size() >= cfg.ell {
            found = Some((c, gv, g, table));
            break;
        }
    }
    let (c, gv, g, table) = found.ok_or(Error::BudgetExceeded {
        what: "nilpotency class",
        limit: cfg.max_c as u64,
    })?;
    let space = gv.space;
    let v = space.group();
    let phi = (0..space.size())
        .map(|x| {
            let genmap: Vec<usize> = (0..space.size()).map(|u| space.add(u, x)).collect();
            extend_generator_map(&g, &table, &gv.presentation, &genmap)
        })
        .collect::<Result<Vec<_>>>()?;
    let p_group = semidirect_product(&g, &v, &phi)?;
    let nv = space.size();
    let mut x: Vec<usize> = (0..cfg.n).map(|i| g.identity() * nv + space.basis(i)).collect();
    x.push(table.image(0, 0) * nv);
    let fnpq = check_fnpq_witness(&p_group, &x, cfg.n, cfg.p, cfg.q)?;
    if !fnpq.holds() {
        return Err(Error::WitnessCheckFailed(format!("{fnpq:?}")));
    }
    let np = p_group.size();
    let algebra = FiniteAlgebra::from_fn(Signature::tau(), vec![x.len(), np], |_, a| p_group.mul(x[a[0]], a[1]))?;
    let mut x_labels: Vec<String> = (1..=cfg.n).map(|i| format!("e{i}")).collect();
    x_labels.push("[0]".into());
    let algebra = algebra.with_labels(vec![x_labels, (0..np).map(|y| p_group.label(y)).collect()])?;
    let gens = vec![(0..x.len()).collect(), vec![p_group.identity()]];
    let generated = generate_subalgebra_with(&algebra, &gens, &cfg.budget)?;
    if generated.sizes() != algebra.sizes() {
        return Err(Error::WitnessCheckFailed("(X, {1}) does not generate B".into()));
    }
    if np < cfg.ell {
        return Err(Error::WitnessCheckFailed(format!("|P| = {np} < ℓ = {}", cfg.ell)));
    }
    let provenance = json!({
        "construction": "build_B",
        "n": cfg.n,
        "ell": cfg.ell,
        "p": cfg.p,
        "q": cfg.q,
        "c": c,
        "gv_order": g.size(),
        "p_order": np,
    });
    Ok(BuildB {
        algebra: TwoSortedActionAlgebra {
            algebra,
            group: None,
            faithful: None,
            zeros: None,
            provenance,
        },
        config: *cfg,
        c,
        gv_order: g.size(),
        space,
        p_group: Arc::new(p_group),
        x,
        fnpq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_instance() {
        let b = build_b(&BuildBConfig::new(2, 4, 3, 2)).unwrap();
        assert_eq!(b.c, 1);
        assert_eq!(b.gv_order, 81);
        assert_eq!(b.algebra.sizes(), (3, 324));
        assert!(b.fnpq.holds());
        assert_eq!(b.fnpq.subsets.len(), 3);
        // ⟨e1, e2⟩ = V
        assert_eq!(b.fnpq.subsets[2].order, 4);
    }

    #[test]
    fn bad_parameters() {
        assert!(build_b(&BuildBConfig::new(2, 4, 3, 3)).is_err());
        assert_eq!(build_b(&BuildBConfig::new(2, 4, 4, 3)).unwrap_err(), Error::NotPrime(4));
        let mut cfg = BuildBConfig::new(2, 10_000, 3, 2);
        cfg.max_c = 1;
        assert!(matches!(build_b(&cfg), Err(Error::BudgetExceeded { .. })));
    }
}
