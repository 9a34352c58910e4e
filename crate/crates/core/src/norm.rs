//! ℓ^p membership and certified p-norms.

use crate::error::{Error, Result};
use crate::family::{SequenceFamily, TERM_ULPS};
use crate::sum::{NeumaierSum, SumEstimate, SumStatus, TailRule, UNIT_ROUNDOFF};

/// Default truncation for certified sums.
pub const DEFAULT_MAX_TERMS: usize = 100_000;

/// Truncation policy for infinite series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_terms: usize,
}

impl Budget {
    pub fn new(max_terms: usize) -> Self {
        Self { max_terms: max_terms.max(1) }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_terms: DEFAULT_MAX_TERMS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember,
}

fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidExponent(format!("p must be finite and >= 1, got {p}")));
    }
    Ok(())
}

/// Exact ℓ^p membership by the integral test on the term rule.
pub fn classify_membership(x: &SequenceFamily, p: f64) -> Result<Membership> {
    check_p(p)?;
    let member = match *x {
        SequenceFamily::Power { alpha, .. } => alpha * p > 1.0,
        SequenceFamily::PowerLog { alpha, beta } => {
            let a = alpha * p;
            a > 1.0 || (a == 1.0 && beta * p > 1.0)
        }
        SequenceFamily::Geometric { .. } | SequenceFamily::Explicit(_) => true,
    };
    Ok(if member { Membership::Member } else { Membership::NotMember })
}

/// Certified enclosure of `Σ x_n^p`, in power (not root) form.
///
/// Divergent families get status `DivergentCertified` with the truncated sum
/// as value and an infinite error bound.
pub fn power_sum(x: &SequenceFamily, p: f64, budget: Budget) -> Result<SumEstimate> {
    check_p(p)?;
    let n = x.truncated_len(budget.max_terms);
    let mut acc = NeumaierSum::new();
    for k in 1..=n {
        acc.add(x.term_pow(k, p));
    }
    let partial = acc.value();
    let ulps = if p == 1.0 && x.is_explicit() { 0.0 } else { TERM_ULPS };
    let rounding = acc.rounding_bound(ulps);

    if classify_membership(x, p)? == Membership::NotMember {
        return Ok(SumEstimate {
            value: partial,
            error_bound: f64::INFINITY,
            status: SumStatus::DivergentCertified,
            terms_used: n,
            tail: TailRule::None,
        });
    }
    match x.power_tail(p, n) {
        Some(t) => Ok(SumEstimate::from_interval(partial - rounding + t.lower, partial + rounding + t.upper, n, t.rule)),
        None => Ok(SumEstimate {
            value: partial,
            error_bound: f64::INFINITY,
            status: SumStatus::Unknown,
            terms_used: n,
            tail: TailRule::None,
        }),
    }
}

/// Certified `‖x‖_p = (Σ x_n^p)^{1/p}`.
pub fn lp_norm(x: &SequenceFamily, p: f64, budget: Budget) -> Result<SumEstimate> {
    if let Some(v) = x.as_explicit() {
        check_p(p)?;
        x.validate()?;
        return Ok(explicit_norm(&v[..v.len().min(budget.max_terms)], p));
    }
    let s = power_sum(x, p, budget)?;
    let root = |v: f64| v.max(0.0).powf(1.0 / p);
    match s.status {
        SumStatus::ConvergedCertified => {
            // the 1/p root is monotone; push the enclosure through it and widen
            // by the rounding of the two powf calls
            let lo = root(s.lower()) * (1.0 - 4.0 * UNIT_ROUNDOFF);
            let hi = root(s.upper()) * (1.0 + 4.0 * UNIT_ROUNDOFF);
            Ok(SumEstimate::from_interval(lo, hi, s.terms_used, s.tail))
        }
        _ => Ok(SumEstimate { value: root(s.value), ..s }),
    }
}

/// `‖v‖_p` as `M·(Σ (v_i/M)^p)^{1/p}` with `M = max v_i`, so large `p` cannot overflow.
fn explicit_norm(v: &[f64], p: f64) -> SumEstimate {
    let m = v.iter().copied().fold(0.0, f64::max);
    let mut acc = NeumaierSum::new();
    for &x in v {
        acc.add((x / m).powf(p));
    }
    // one rounding in x/m grows to (1+u)^p - 1 after the power; underflowed
    // terms lose at most MIN_POSITIVE each against a sum >= 1
    let quotient_ulps = if m == 1.0 { 0.0 } else { (p * UNIT_ROUNDOFF.ln_1p()).exp_m1() / UNIT_ROUNDOFF };
    let ulps = if p == 1.0 && m == 1.0 { 0.0 } else { TERM_ULPS + quotient_ulps * (1.0 + TERM_ULPS * UNIT_ROUNDOFF) };
    let rounding = acc.rounding_bound(ulps) + v.len() as f64 * f64::MIN_POSITIVE;
    let root = |s: f64| s.max(0.0).powf(1.0 / p);
    let lo = m * root(acc.value() - rounding) * (1.0 - 6.0 * UNIT_ROUNDOFF);
    let hi = m * root(acc.value() + rounding) * (1.0 + 6.0 * UNIT_ROUNDOFF);
    SumEstimate::from_interval(lo, hi, v.len(), TailRule::Exact)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(s: &str) -> SequenceFamily {
        s.parse().unwrap()
    }

    #[test]
    fn huge_exponent_does_not_overflow() {
        let y = SequenceFamily::explicit(vec![10.0, 3.0, 10.0]).unwrap();
        let n = lp_norm(&y, 1e9, Budget::default()).unwrap();
        assert!(n.contains(10.0 * 2f64.powf(1e-9)));
        assert!(n.width() < 1e-12);
    }

    #[test]
    fn three_four_five() {
        let n = lp_norm(&fam("explicit:3,4"), 2.0, Budget::default()).unwrap();
        assert!(n.is_certified());
        assert!(n.contains(5.0));
        assert!((n.value - 5.0).abs() <= 1e-14);
    }

    #[test]
    fn zeta_two_norm() {
        // oracle: sqrt(pi^2/6) = 1.282549830161864
        let n = lp_norm(&fam("power:c=1,alpha=1"), 2.0, Budget::default()).unwrap();
        assert_eq!(n.status, SumStatus::ConvergedCertified);
        assert!(n.contains(1.282549830161864));
        assert!(n.error_bound < 1e-5);
        assert!((n.value - 1.2825498).abs() < 1e-5);
    }

    #[test]
    fn divergent_power() {
        let n = lp_norm(&fam("power:c=1,alpha=0.4"), 2.0, Budget::default()).unwrap();
        assert_eq!(n.status, SumStatus::DivergentCertified);
        assert!(n.error_bound.is_infinite());
    }

    #[test]
    fn membership_rules() {
        use Membership::*;
        let cases = [
            ("power:c=1,alpha=0.6", 2.0, Member),
            ("power:c=1,alpha=0.5", 2.0, NotMember),
            ("geom:c=1,r=0.5", 1.0, Member),
            ("explicit:1,2", 1.0, Member),
            ("powerlog:alpha=0.5,beta=0.5", 2.0, NotMember),
            ("powerlog:alpha=0.5,beta=0.6", 2.0, Member),
            ("powerlog:alpha=0.6,beta=-5", 2.0, Member),
            ("power:c=3,alpha=0", 1.0, NotMember),
        ];
        for (f, p, expect) in cases {
            assert_eq!(classify_membership(&fam(f), p).unwrap(), expect, "{f} p={p}");
        }
        assert!(matches!(classify_membership(&fam("explicit:1"), 0.5), Err(Error::InvalidExponent(_))));
        assert!(matches!(lp_norm(&fam("explicit:1"), 0.9, Budget::default()), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn geometric_norm_closed_form() {
        // Σ 2^{-n} = 1
        let n = lp_norm(&fam("geom:c=1,r=0.5"), 1.0, Budget::new(10)).unwrap();
        assert!(n.contains(1.0));
        assert!(n.error_bound < 1e-14);
    }

    #[test]
    fn powerlog_uncertifiable_before_monotone() {
        let f = fam("powerlog:alpha=0.6,beta=-8");
        let n0 = f.monotone_from().unwrap();
        let early = lp_norm(&f, 2.0, Budget::new(n0 - 1)).unwrap();
        assert_eq!(early.status, SumStatus::Unknown);
    }

    #[test]
    fn integral_test_certification_against_ten_n() {
        for f in ["power:c=1,alpha=0.7", "power:c=2,alpha=1.5", "powerlog:alpha=1,beta=1", "powerlog:alpha=0.8,beta=-0.5", "geom:c=3,r=0.9"] {
            let x = fam(f);
            let est = lp_norm(&x, 2.0, Budget::new(2_000)).unwrap();
            assert!(est.is_certified(), "{f}: {est}");
            let brute: f64 = (1..=20_000).map(|k| x.term_pow(k, 2.0)).sum::<f64>().sqrt();
            assert!(brute <= est.upper(), "{f}: {est} vs {brute}");
        }
    }
}
