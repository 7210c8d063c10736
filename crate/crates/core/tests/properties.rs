use finvar_core::algebra::{
    find_isomorphism, holds, holds_bounded, read_algebra, vn_basis_with, write_algebra, FiniteAlgebra,
};
use finvar_core::constructions::{adjoin_zero, build_automatic, square, star, strip_zero};
use finvar_core::groups::{todd_coxeter, GroupPresentation};
use finvar_core::terms::{delta_identities, format_identity, parse_identity};
use finvar_core::{Budget, Signature, Silent, SubUniverse};
use proptest::prelude::*;

/// A τ-algebra from a flat table of `n1·n2` entries below `n2`.
fn tau_algebra() -> impl Strategy<Value = FiniteAlgebra> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(n1, n2)| {
        proptest::collection::vec(0..n2, n1 * n2).prop_map(move |t| {
            FiniteAlgebra::from_fn(Signature::tau(), vec![n1, n2], |_, a| t[a[0] * n2 + a[1]]).unwrap()
        })
    })
}

/// Partial maps `σ_a` on a set of size `ns`, one per element of `G`.
fn partial_maps() -> impl Strategy<Value = (usize, usize, Vec<Vec<(usize, usize)>>)> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(ng, ns)| {
        proptest::collection::vec(proptest::collection::vec(proptest::option::of(0..ns), ns), ng).prop_map(move |rows| {
            let sigma = rows
                .into_iter()
                .map(|r| r.into_iter().enumerate().filter_map(|(s, v)| v.map(|v| (s, v))).collect())
                .collect();
            (ng, ns, sigma)
        })
    })
}

const AUTO_IDS: &[&str] = &[
    "x0 . (x1 . y0) =~ x1 . (x0 . y0)",
    "x0 . (x0 . y0) =~ x0 . y0",
    "x0 . (x0 . (x0 . y0)) =~ x0 . y0",
    "x0 . (x1 . (x0 . y0)) =~ x1 . (x0 . (x1 . y0))",
    "x0 . (x1 . y0) =~ x0 . (x1 . y1)",
    "(x0 . x1) . x2 =~ x2 . x2",
    "x0 . x1 =~ x1 . x0",
    "x0 . (x1 . x2) =~ x1 . (x0 . x2)",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn square_inverts_star(a in tau_algebra()) {
        let st = star(&a).unwrap();
        let sq = square(&st.algebra).unwrap();
        prop_assert!(find_isomorphism(&sq.algebra, &a).unwrap().is_some());
    }

    #[test]
    fn zero_strip_recovers_full(a in tau_algebra()) {
        let z = adjoin_zero(&a).unwrap();
        let zeros = z.zeros.unwrap();
        let full = SubUniverse::full(&z.algebra);
        let stripped = strip_zero(&full, zeros).unwrap();
        prop_assert_eq!(stripped.sizes(), a.sizes().to_vec());
    }

    #[test]
    fn algebra_json_roundtrip(a in tau_algebra()) {
        let back = read_algebra(&write_algebra(&a)).unwrap();
        prop_assert_eq!(back.tables(), a.tables());
        prop_assert_eq!(back.sizes(), a.sizes());
    }

    #[test]
    fn reduced_automatic_check_matches_exhaustive((ng, ns, sigma) in partial_maps()) {
        let auto = build_automatic(
            (0..ng).map(|i| format!("g{i}")).collect(),
            (0..ns).map(|i| format!("s{i}")).collect(),
            &sigma,
        ).unwrap();
        let sig = Signature::automatic();
        let ids = delta_identities(2)
            .into_iter()
            .chain(AUTO_IDS.iter().map(|t| parse_identity(t, &sig).unwrap()));
        for id in ids {
            let fast = auto.holds(&id, &Budget::default()).unwrap().is_holds();
            let slow = holds(&auto.algebra, &id).unwrap().is_holds();
            prop_assert_eq!(fast, slow, "{}", format_identity(&id, &sig));
        }
    }

    #[test]
    fn bounded_check_matches_basis(b in tau_algebra(), a in tau_algebra()) {
        let r = holds_bounded(&b, &a, &[1, 1], &Budget::default(), &Silent).unwrap();
        let basis = vn_basis_with(&a, &[1, 1], &Budget::default()).unwrap();
        let direct = basis.iter().all(|id| holds(&b, id).unwrap().is_holds());
        prop_assert_eq!(r.holds(), direct);
        if let Some((id, _)) = r.counterexample {
            prop_assert!(!holds(&b, &id).unwrap().is_holds());
            prop_assert!(holds(&a, &id).unwrap().is_holds());
        }
    }

    #[test]
    fn dihedral_presentations(n in 2usize..=12) {
        let pres = GroupPresentation::parse(&format!("gens: a b; rels: a^{n}, b^2, (a*b)^2;")).unwrap();
        let (g, _) = todd_coxeter(&pres, 100_000).unwrap();
        prop_assert_eq!(g.size(), 2 * n);
    }

    #[test]
    fn cyclic_presentations(n in 1usize..=40) {
        let pres = GroupPresentation::parse(&format!("gens: a; rels: a^{n};")).unwrap();
        prop_assert_eq!(todd_coxeter(&pres, 100_000).unwrap().0.size(), n);
    }
}
