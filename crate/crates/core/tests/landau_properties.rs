use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use seqlab::landau::{
    abel_dini_bound_convergence, abel_dini_certify_divergence, check_certificate, landau_witness, WitnessOptions,
};
use seqlab::{Budget, ConjugateExponents, SequenceFamily};

/// Random family with Σ a_n divergent.
fn divergent_family(rng: &mut StdRng) -> SequenceFamily {
    if rng.random_bool(0.7) {
        SequenceFamily::power(rng.random_range(0.05..20.0), rng.random_range(0.0..=1.0)).unwrap()
    } else {
        // powerlog with α < 1, or α = 1 and β <= 1
        if rng.random_bool(0.5) {
            SequenceFamily::power_log(rng.random_range(0.0..0.99), rng.random_range(-2.0..2.0)).unwrap()
        } else {
            SequenceFamily::power_log(1.0, rng.random_range(0.0..=1.0)).unwrap()
        }
    }
}

#[test]
fn certificates_pass_checker_and_corruptions_fail() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 40 {
        let a = divergent_family(&mut rng);
        let alpha = if rng.random_bool(0.5) { 1.0 } else { rng.random_range(0.0..1.0) };
        let cert = abel_dini_certify_divergence(&a, 1.0, alpha, 4, Budget::new(200_000)).unwrap();
        if cert.blocks.is_empty() {
            continue;
        }
        checked += 1;
        let report = check_certificate(&cert).unwrap();
        assert!(report.recomputed.iter().all(|&s| s > 0.5));
        assert!(report.established >= 0.5 * cert.blocks.len() as f64);
        // round trip through the text format keeps it valid
        let back = seqlab::landau::DivergenceCertificate::parse(&cert.to_text()).unwrap();
        check_certificate(&back).unwrap();

        let j = rng.random_range(0..cert.blocks.len());
        let mut bad = cert.clone();
        let (k, l) = bad.blocks[j];
        bad.blocks[j] = match rng.random_range(0..4) {
            0 => (k + 1, l),
            1 => (k.saturating_sub(1), l + 1),
            2 => (k, l + 1),
            _ => (k, l.saturating_sub(1)),
        };
        assert!(check_certificate(&bad).is_err(), "corrupted block {j} of {cert:?} accepted");
    }
}

#[test]
fn convergence_bound_is_never_exceeded() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..100 {
        let a = divergent_family(&mut rng);
        let delta = rng.random_range(1e-3..=2.0);
        let b = abel_dini_bound_convergence(&a, 1.0, 1.0 + delta, Budget::new(1_000_000)).unwrap();
        assert!(b.computed_partial.value <= b.bound, "{a} δ={delta}: {} > {}", b.computed_partial.value, b.bound);
        assert!(b.series.upper() <= b.bound * (1.0 + 1e-12) || b.series.lower() <= b.bound);
        if a.term(1) >= 1.0 {
            assert_eq!(b.bound, b.telescoping_bound);
            assert!(b.computed_partial.value <= b.telescoping_bound);
        }
    }
}

#[test]
fn witness_norm_enclosure_contains_one() {
    let families = [
        ("power:c=1,alpha=0.5", 2.0),
        ("power:c=1,alpha=0.3333333333333333", 2.0),
        ("power:c=3,alpha=0.2", 3.0),
        ("power:c=0.5,alpha=0", 1.5),
        ("powerlog:alpha=0.5,beta=0.5", 2.0),
        ("powerlog:alpha=0.2,beta=-1", 4.0),
    ];
    for (text, p) in families {
        let x: SequenceFamily = text.parse().unwrap();
        let e = ConjugateExponents::new(p).unwrap();
        let opts = WitnessOptions { budget: Budget::new(50_000), blocks: 2, certificate_budget: Budget::new(1_000_000) };
        let w = landau_witness(&x, e, opts).unwrap();
        assert!(w.norm_contains_one(), "{text} p={p}: {}", w.norm_check);
        assert!((w.norm_check.value - 1.0).abs() <= w.norm_check.error_bound + 1e-8);
    }
}

#[test]
fn exponent_identity_for_random_p() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..20 {
        let p = rng.random_range(1.01..10.0);
        let alpha = rng.random_range(0.0..=1.0 / p);
        let x = SequenceFamily::power(rng.random_range(0.1..10.0), alpha).unwrap();
        let e = ConjugateExponents::new(p).unwrap();
        let opts = WitnessOptions { budget: Budget::new(10_000), blocks: 0, certificate_budget: Budget::new(10_000) };
        let w = landau_witness(&x, e, opts).unwrap();
        assert!(w.identity_max_rel_dev <= 1e-12, "p={p} α={alpha}: {}", w.identity_max_rel_dev);
    }
}
