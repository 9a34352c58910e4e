use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exponents::ConjugateExponents;
use crate::family::{SequenceFamily, TERM_ULPS};
use crate::fmt17;
use crate::norm::{classify_membership, Membership};
use crate::sum::{NeumaierSum, SumEstimate, TailRule, UNIT_ROUNDOFF};

use super::bilinear::{bilinear_fast, BilinearFormResult};
use super::quadrature::{integrate, QuadOptions};

/// `(ε, N)` schedule used when none is given.
pub const DEFAULT_SCHEDULE: [(f64, usize); 3] = [(0.1, 10_000), (0.03, 100_000), (0.01, 1_000_000)];

/// `π / sin(π/p)`.
pub fn best_constant(e: ConjugateExponents) -> f64 {
    PI / (PI / e.p()).sin()
}

/// `λ = 1/(pq)`, which equalizes the two inner-sum estimates.
pub fn default_lambda(e: ConjugateExponents) -> f64 {
    1.0 / (e.p() * e.q())
}

/// `S_N(a, b) / (‖a‖_{p,N} ‖b‖_{q,N})` with norms over the same `N` terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertRatio {
    pub ratio: f64,
    pub form: BilinearFormResult,
    pub norm_a: f64,
    pub norm_b: f64,
    pub target: f64,
}

fn truncated(f: &SequenceFamily, n: usize) -> Vec<f64> {
    (1..=f.truncated_len(n)).map(|k| f.term(k)).collect()
}

fn finite_norm(v: &[f64], p: f64) -> f64 {
    let mut acc = NeumaierSum::new();
    for x in v {
        acc.add(x.powf(p));
    }
    acc.value().powf(1.0 / p)
}

pub fn hilbert_ratio(a: &SequenceFamily, b: &SequenceFamily, e: ConjugateExponents, n: usize) -> Result<HilbertRatio> {
    a.validate()?;
    b.validate()?;
    if classify_membership(a, e.p())? == Membership::NotMember {
        return Err(Error::PreconditionNotMet(format!("a not in l^{}: {a}", e.p())));
    }
    if classify_membership(b, e.q())? == Membership::NotMember {
        return Err(Error::PreconditionNotMet(format!("b not in l^{}: {b}", e.q())));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("truncation N must be >= 1".into()));
    }
    let av = truncated(a, n);
    let bv = truncated(b, n);
    let form = bilinear_fast(&av, &bv)?;
    let norm_a = finite_norm(&av, e.p());
    let norm_b = finite_norm(&bv, e.q());
    Ok(HilbertRatio { ratio: form.value / (norm_a * norm_b), form, norm_a, norm_b, target: best_constant(e) })
}

/// Ratios along a schedule for the near-extremal family
/// `a_m = m^{-(1+ε)/p}`, `b_n = n^{-(1+ε)/q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantStudy {
    pub exponents: ConjugateExponents,
    pub schedule: Vec<(f64, usize)>,
    pub ratios: Vec<f64>,
    pub target: f64,
}

impl ConstantStudy {
    pub fn final_gap(&self) -> Option<f64> {
        self.ratios.last().map(|r| self.target - r)
    }

    pub fn is_monotone(&self) -> bool {
        self.ratios.windows(2).all(|w| w[0] <= w[1])
    }

    /// `epsilon,N,ratio,target,gap`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,N,ratio,target,gap\n");
        for (&(eps, n), &r) in self.schedule.iter().zip(&self.ratios) {
            let _ = writeln!(out, "{},{},{},{},{}", fmt17(eps), n, fmt17(r), fmt17(self.target), fmt17(self.target - r));
        }
        out
    }
}

pub fn best_constant_study(e: ConjugateExponents, schedule: &[(f64, usize)]) -> Result<ConstantStudy> {
    if let Some(&(eps, _)) = schedule.iter().find(|(eps, _)| !(eps.is_finite() && *eps > 0.0)) {
        return Err(Error::InvalidParameter(format!("epsilon must be > 0, got {eps}")));
    }
    if schedule.iter().any(|&(_, n)| n == 0) {
        return Err(Error::InvalidParameter("schedule N must be >= 1".into()));
    }
    let mut ratios = Vec::with_capacity(schedule.len());
    for &(eps, n) in schedule {
        let a = SequenceFamily::power(1.0, (1.0 + eps) / e.p())?;
        let b = SequenceFamily::power(1.0, (1.0 + eps) / e.q())?;
        ratios.push(hilbert_ratio(&a, &b, e, n)?.ratio);
    }
    Ok(ConstantStudy { exponents: e, schedule: schedule.to_vec(), ratios, target: best_constant(e) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineIntegralCheck {
    pub s: f64,
    pub numeric: f64,
    pub closed_form: f64,
    pub error_estimate: f64,
}

impl SineIntegralCheck {
    pub fn relative_error(&self) -> f64 {
        ((self.numeric - self.closed_form) / self.closed_form).abs()
    }
}

/// `∫_0^∞ dt / ((1+t) t^s)` by quadrature against `π / sin(πs)`.
///
/// The half-line is folded onto `[0, 1]` with `t -> 1/t`, giving
/// `∫_0^1 (t^{-s} + t^{s-1}) / (1+t) dt`. The two endpoint singularities are
/// removed by `t = u^{1/(1-s)}` and `t = u^{1/s}` respectively, leaving
/// bounded integrands `1/((1-s)(1+u^{1/(1-s)}))` and `1/(s(1+u^{1/s}))`.
pub fn sine_integral_check(s: f64, opts: QuadOptions) -> Result<SineIntegralCheck> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!("s must lie in (0, 1) for the integral to converge, got {s}")));
    }
    let head = integrate(|u: f64| 1.0 / ((1.0 - s) * (1.0 + u.powf(1.0 / (1.0 - s)))), 0.0, 1.0, opts)?;
    let folded = integrate(|u: f64| 1.0 / (s * (1.0 + u.powf(1.0 / s))), 0.0, 1.0, opts)?;
    Ok(SineIntegralCheck {
        s,
        numeric: head.value + folded.value,
        closed_form: PI / (PI * s).sin(),
        error_estimate: head.error_estimate + folded.error_estimate,
    })
}

/// Certified inner sum `Σ_n m^s / ((m+n) n^s)`, `s = pλ`, against `π / sin(πs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSumCheck {
    pub m: usize,
    pub s: f64,
    pub estimate: SumEstimate,
    pub bound: f64,
    /// `f(n+1) < f(n)` held on every summed index.
    pub decreasing_checked: bool,
}

impl InnerSumCheck {
    pub fn below_bound(&self) -> bool {
        self.estimate.upper() < self.bound
    }
}

/// `∫_T^∞ dt / ((1+t) t^s) = Σ_{k>=0} (-1)^k w^{k+s} / (k+s)` with `w = 1/T < 1`.
/// The series alternates with decreasing terms, so consecutive partial sums bracket it.
fn kernel_tail(t: f64, s: f64) -> (f64, f64) {
    let w = 1.0 / t;
    debug_assert!(w < 1.0);
    let mut acc = NeumaierSum::new();
    let mut pow = w.powf(s);
    let mut k = 0usize;
    loop {
        let term = pow / (k as f64 + s);
        let before = acc.value();
        if k.is_multiple_of(2) {
            acc.add(term);
        } else {
            acc.add(-term);
        }
        let after = acc.value();
        if term <= 1e-18 * after.abs() || k > 10_000 {
            let (lo, hi) = if before < after { (before, after) } else { (after, before) };
            let slack = 8.0 * UNIT_ROUNDOFF * (k as f64 + 1.0) * hi.abs();
            return (lo - slack, hi + slack);
        }
        pow *= w;
        k += 1;
    }
}

/// Inner-sum estimate from the Hardy-Hilbert argument.
///
/// The decreasing integrand bounds `Σ_{n>N} f(n)` between `∫_{N+1}^∞ f` and
/// `∫_N^∞ f`; with `x = m t` both are tails of the kernel integral. `N` is
/// raised to at least `2m`.
pub fn inner_sum_bound_check(m: usize, e: ConjugateExponents, lambda: f64, n: usize) -> Result<InnerSumCheck> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    if !(lambda > 0.0 && lambda < 1.0 / e.p()) {
        return Err(Error::InvalidParameter(format!("lambda must lie in (0, 1/p) = (0, {}), got {lambda}", 1.0 / e.p())));
    }
    let s = e.p() * lambda;
    let n = n.max(2 * m);
    let mf = m as f64;
    let f = |x: f64| (mf / x).powf(s) / (mf + x);
    let mut acc = NeumaierSum::new();
    let mut prev = f64::INFINITY;
    let mut decreasing = true;
    for k in 1..=n {
        let v = f(k as f64);
        decreasing &= v < prev;
        prev = v;
        acc.add(v);
    }
    let rho = acc.rounding_bound(TERM_ULPS);
    let (_, upper_tail) = kernel_tail(n as f64 / mf, s);
    let (lower_tail, _) = kernel_tail((n as f64 + 1.0) / mf, s);
    let estimate = SumEstimate::from_interval(
        acc.value() - rho + lower_tail.max(0.0),
        acc.value() + rho + upper_tail,
        n,
        TailRule::Alternating,
    );
    Ok(InnerSumCheck { m, s, estimate, bound: PI / (PI * s).sin(), decreasing_checked: decreasing })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conj(p: f64) -> ConjugateExponents {
        ConjugateExponents::new(p).unwrap()
    }

    #[test]
    fn targets() {
        assert!((best_constant(conj(2.0)) - PI).abs() < 1e-15);
        assert!((best_constant(conj(4.0)) - PI * 2f64.sqrt()).abs() < 1e-14);
        // sin(π/p) = sin(π/q)
        let e = conj(3.7);
        assert!((best_constant(e) - best_constant(e.swap())).abs() < 1e-13);
    }

    #[test]
    fn ratio_single_term() {
        let one = SequenceFamily::explicit(vec![1.0]).unwrap();
        let r = hilbert_ratio(&one, &one, conj(2.0), 10).unwrap();
        assert!((r.ratio - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ratio_fixtures() {
        // fixtures from an independent numpy/scipy fftconvolve evaluation
        let a = SequenceFamily::power(1.0, 0.51).unwrap();
        let r = hilbert_ratio(&a, &a, conj(2.0), 100_000).unwrap();
        assert!((r.ratio - 2.544078524762856).abs() < 1e-9 * r.ratio);
        assert!(r.ratio < PI);

        let a = SequenceFamily::power(1.0, 0.26).unwrap();
        let b = SequenceFamily::power(1.0, 0.76).unwrap();
        let r = hilbert_ratio(&a, &b, conj(4.0), 10_000).unwrap();
        assert!((r.ratio - 2.8503414521928065).abs() < 1e-9 * r.ratio);
        assert!(r.ratio < PI * 2f64.sqrt());
    }

    #[test]
    fn ratio_requires_membership() {
        let a = SequenceFamily::power(1.0, 0.5).unwrap();
        let b = SequenceFamily::power(1.0, 1.0).unwrap();
        assert!(matches!(hilbert_ratio(&a, &b, conj(2.0), 100), Err(Error::PreconditionNotMet(_))));
        assert!(matches!(hilbert_ratio(&b, &a, conj(2.0), 100), Err(Error::PreconditionNotMet(_))));
    }

    #[test]
    fn study_single_entry() {
        // oracle: 1.8894521688560302
        let st = best_constant_study(conj(2.0), &[(0.5, 1000)]).unwrap();
        assert!((st.ratios[0] - 1.8894521688560302).abs() < 1e-10);
        assert!(st.ratios[0] < PI);
        let csv = st.to_csv();
        assert!(csv.starts_with("epsilon,N,ratio,target,gap\n5.0000000000000000e-1,1000,"));
        assert!(matches!(best_constant_study(conj(2.0), &[(0.0, 10)]), Err(Error::InvalidParameter(_))));
        assert!(matches!(best_constant_study(conj(2.0), &[(-0.1, 10)]), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn sine_integral_values() {
        let r = sine_integral_check(0.5, QuadOptions::default()).unwrap();
        assert!((r.closed_form - PI).abs() < 1e-15);
        assert!(r.relative_error() < 1e-12);
        let r = sine_integral_check(1.0 / 3.0, QuadOptions::default()).unwrap();
        assert!((r.closed_form - 3.6275987284684357).abs() < 1e-12);
        assert!(r.relative_error() < 1e-12);
        let r = sine_integral_check(0.99, QuadOptions::default()).unwrap();
        assert!((r.closed_form - 100.01645123493).abs() < 1e-8);
        assert!(r.relative_error() < 1e-10);
        for bad in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(sine_integral_check(bad, QuadOptions::default()), Err(Error::InvalidParameter(_))));
        }
    }

    #[test]
    fn inner_sum_examples() {
        let e = conj(2.0);
        let lam = default_lambda(e);
        assert_eq!(lam, 0.25);
        // oracle (mpmath Euler-Maclaurin): Σ 1/((1+n)√n) = 1.86002507922119
        let c = inner_sum_bound_check(1, e, lam, 100_000).unwrap();
        assert!(c.estimate.contains(1.86002507922119), "{}", c.estimate);
        assert!(c.below_bound() && c.decreasing_checked);
        // oracle: 3.095418762331915
        let c = inner_sum_bound_check(1000, e, lam, 100_000).unwrap();
        assert!(c.estimate.contains(3.095418762331915), "{}", c.estimate);
        assert!(c.below_bound());
        assert!(matches!(inner_sum_bound_check(1, e, 0.5, 100), Err(Error::InvalidParameter(_))));
        assert!(matches!(inner_sum_bound_check(1, e, 0.0, 100), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn kernel_tail_brackets_quadrature() {
        for &(t, s) in &[(2.0, 0.5), (10.0, 0.25), (1.5, 0.9)] {
            let (lo, hi) = kernel_tail(t, s);
            // ∫_T^∞ dt/((1+t)t^s) = ∫_0^{1/T} u^{s-1}/(1+u) du; with u = v^{1/s}: (1/s)∫_0^{T^{-s}} dv/(1+v^{1/s})
            let r = integrate(|v: f64| 1.0 / (s * (1.0 + v.powf(1.0 / s))), 0.0, t.powf(-s), QuadOptions::default()).unwrap();
            assert!(lo <= r.value + 1e-14 && r.value - 1e-14 <= hi, "t={t} s={s}: [{lo}, {hi}] vs {}", r.value);
        }
    }
}
