use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use seqlab::holder::{converse_witness_finite, dual_ratio, holder_finite, EQUALITY_REL_TOL};
use seqlab::{compensated_sum, lp_norm, Budget, ConjugateExponents, SequenceFamily};

fn positive_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(1e-6f64..=10.0, 1..=max_len)
}

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

proptest! {
    #[test]
    fn holder_finite_never_violated((x, y) in (1usize..=64).prop_flat_map(|n| (
        proptest::collection::vec(1e-6f64..=10.0, n),
        proptest::collection::vec(1e-6f64..=10.0, n),
    )), p in 1.0001f64..=8.0) {
        let e = ConjugateExponents::new(p).unwrap();
        let r = holder_finite(&SequenceFamily::explicit(x).unwrap(), &SequenceFamily::explicit(y).unwrap(), e).unwrap();
        prop_assert!(r.verdict.holds(), "{r:?}");
    }

    #[test]
    fn equality_iff_proportional_powers(x in proptest::collection::vec(0.01f64..=10.0, 2..=32), c in 0.1f64..10.0, p in 1.2f64..6.0) {
        let e = ConjugateExponents::new(p).unwrap();
        // y_i^q = c x_i^p
        let y: Vec<f64> = x.iter().map(|v| (c * v.powf(p)).powf(1.0 / e.q())).collect();
        let xf = SequenceFamily::explicit(x.clone()).unwrap();
        let r = holder_finite(&xf, &SequenceFamily::explicit(y.clone()).unwrap(), e).unwrap();
        prop_assert!(r.equality && r.slack.abs() <= EQUALITY_REL_TOL * r.rhs.value, "{r:?}");

        // break proportionality on the heaviest entry
        let (imax, _) = x.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        let mut z = y;
        z[imax] *= 2.0;
        let r = holder_finite(&xf, &SequenceFamily::explicit(z).unwrap(), e).unwrap();
        prop_assert!(!r.equality && r.slack > EQUALITY_REL_TOL * r.rhs.value, "{r:?}");
    }

    #[test]
    fn lp_norm_is_homogeneous(x in positive_vec(64), t in 1e-3f64..1e3, p in 1.0f64..8.0) {
        let a = lp_norm(&SequenceFamily::explicit(x.clone()).unwrap(), p, Budget::default()).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| v * t).collect();
        let b = lp_norm(&SequenceFamily::explicit(scaled).unwrap(), p, Budget::default()).unwrap();
        let tol = t * a.error_bound + b.error_bound + 4.0 * f64::EPSILON * b.value;
        prop_assert!((b.value - t * a.value).abs() <= tol);
    }

    #[test]
    fn lp_norm_agrees_with_compensated_sum(x in positive_vec(64), p in 1.0f64..8.0) {
        let n = lp_norm(&SequenceFamily::explicit(x.clone()).unwrap(), p, Budget::default()).unwrap();
        let s = compensated_sum(x.iter().map(|v| v.powf(p))).unwrap();
        let root = s.value.powf(1.0 / p);
        let tol = n.error_bound + (s.error_bound + 8.0 * f64::EPSILON * s.value) / (p * s.value) * root;
        prop_assert!((root - n.value).abs() <= tol);
    }
}

#[test]
fn witness_beats_random_competitors() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..50 {
        let n = rng.random_range(1..=32);
        let x: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, 1e-3, 1e3)).collect();
        let e = ConjugateExponents::new(rng.random_range(1.05..8.0)).unwrap();
        let w = converse_witness_finite(&SequenceFamily::explicit(x.clone()).unwrap(), e).unwrap();
        assert!(w.gap.abs() <= 1e-12 * w.target);
        for _ in 0..1000 {
            let y: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, 1e-3, 1e3)).collect();
            let r = dual_ratio(&x, &y, e.q()).unwrap();
            assert!(r <= w.achieved_ratio * (1.0 + 1e-12), "competitor {r} beats witness {}", w.achieved_ratio);
        }
    }
}
