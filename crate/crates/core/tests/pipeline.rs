use finvar_core::constructions::{build_b, nn_generated_subuniverses, BuildBConfig, Prover};
use finvar_core::groups::FiniteGroup;
use finvar_core::verify::{growth_csv, growth_experiment, render_reports, verify_suite, Flavor, GrowthConfig, VerifyConfig};
use finvar_core::{Budget, Silent};

#[test]
fn proofs_recheck_independently() {
    let b = build_b(&BuildBConfig::new(2, 4, 3, 2)).unwrap();
    let (_, act) = FiniteGroup::symmetric(3);
    let prover = Prover::new(&b, &act, 3, Budget::default()).unwrap();
    let (_, subs) = nn_generated_subuniverses(&b.algebra.algebra, &[1, 1], &Budget::default(), &Silent).unwrap();
    assert!(!subs.is_empty());
    for d in subs.iter().take(40) {
        let proof = prover.prove(d).unwrap();
        assert!(proof.is_decided(), "{:?}", d);
        prover.verify(d, &proof, false).unwrap();
    }
    let (_, subs0) = nn_generated_subuniverses(prover.zero_adjoined_witness(), &[1, 1], &Budget::default(), &Silent).unwrap();
    let mut kinds = std::collections::BTreeSet::new();
    for d in &subs0 {
        let proof = prover.prove_zero(d).unwrap();
        assert!(proof.is_decided());
        prover.verify(d, &proof, true).unwrap();
        kinds.insert(proof.kind());
    }
    assert!(kinds.contains("null"));
}

#[test]
fn suite_reports_are_deterministic() {
    let cfg = VerifyConfig {
        scenarios: vec!["s3-sizes".into(), "star-subalgebras".into(), "apaq".into()],
        ..VerifyConfig::default()
    };
    let a = render_reports(&verify_suite(&cfg).unwrap());
    let b = render_reports(&verify_suite(&cfg).unwrap());
    assert_eq!(a, b);
    assert!(a.contains("summary: 3 passed, 0 failed, 0 skipped"), "{a}");
}

#[test]
fn tight_budget_skips_instead_of_failing() {
    let cfg = VerifyConfig {
        scenarios: vec!["omega-tau-star".into()],
        budget: Budget {
            max_assignments: 1000,
            ..Budget::default()
        },
        ..VerifyConfig::default()
    };
    let reports = verify_suite(&cfg).unwrap();
    assert!(!reports[0].failed(), "{}", reports[0].render());
    assert!(reports[0].skipped.is_some());
}

#[test]
fn automatic_growth_csv_is_stable() {
    let mut cfg = GrowthConfig::new(2, vec![4, 8], Flavor::Automatic);
    cfg.full_rows = 0;
    cfg.bounded = false;
    let a = growth_csv(&growth_experiment(&cfg, &Silent).unwrap());
    let b = growth_csv(&growth_experiment(&cfg, &Silent).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.lines().nth(1).unwrap(), "2,6,4,328,1,true,-,pass,-,structural");
}
