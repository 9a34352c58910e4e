use crate::error::{Error, Result};
use crate::family::{SequenceFamily, TERM_ULPS};
use crate::norm::Budget;
use crate::sum::{NeumaierSum, SumEstimate, SumStatus, TailRule, UNIT_ROUNDOFF};

use super::require_divergent;

/// Smallest integer `r` with `1/r < δ`, i.e. `⌊1/δ⌋ + 1`.
pub fn smallest_r(delta: f64) -> u32 {
    (1.0 / delta).floor() as u32 + 1
}

/// Certified bounds on `Σ a_n / s_n^{1+δ}` for divergent `Σ a_n`, `a_n = x_n^power`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceBound {
    pub delta: f64,
    pub r: u32,
    /// `(r+1) / a_1^{1/r}`; valid whenever `a_1 >= 1`.
    pub telescoping_bound: f64,
    /// A global cap valid for every `a_1 > 0`: equal to `telescoping_bound`
    /// when `a_1 >= 1`, otherwise `(r+1) / a_1^δ` (the same argument applied
    /// to the rescaled series `a_n / a_1`).
    pub bound: f64,
    /// The truncated sum `Σ_{n<=N}` itself, with its rounding bound.
    pub computed_partial: SumEstimate,
    pub s_n: f64,
    /// `r / s_N^{1/r}`, available when `s_N >= 1`.
    pub telescoping_tail: Option<f64>,
    /// `[lower, upper]` for the tail from `∫_{s_N}^∞ ds / s^{1+δ}`.
    pub integral_tail: (f64, f64),
    /// Certified enclosure of the full series.
    pub series: SumEstimate,
}

impl ConvergenceBound {
    /// `[S_N, S_N + r/s_N^{1/r}]` widened by rounding.
    pub fn telescoping_bracket(&self) -> Option<(f64, f64)> {
        self.telescoping_tail
            .map(|t| (self.computed_partial.lower(), self.computed_partial.upper() + t * (1.0 + 4.0 * UNIT_ROUNDOFF)))
    }
}

/// Two-sided bound on `Σ_{n>N} a_n / s_n^{1+δ}` given `s_N` and `ρ >= sup_{n>N} a_n/s_n`.
///
/// Upper: each term is at most `∫_{s_{n-1}}^{s_n} s^{-1-δ} ds`.
/// Lower: each term is at least `(1-ρ)^{1+δ}` times that integral.
pub(crate) fn integral_tail(s_n: f64, delta: f64, rho: Option<f64>) -> (f64, f64) {
    let upper = s_n.powf(-delta) / delta;
    let lower = match rho {
        Some(rho) if rho < 1.0 => (1.0 - rho).powf(1.0 + delta) * upper,
        _ => 0.0,
    };
    (lower, upper)
}

/// `r / s^{1/r}`, the telescoping tail past a partial sum `s >= 1`.
pub(crate) fn telescoping_tail(s_n: f64, r: u32) -> Option<f64> {
    (s_n >= 1.0).then(|| r as f64 / s_n.powf(1.0 / r as f64))
}

/// Convergent branch of Abel-Dini: bounds `Σ a_n / s_n^α` for `α > 1`.
pub fn abel_dini_bound_convergence(
    family: &SequenceFamily,
    power: f64,
    alpha: f64,
    budget: Budget,
) -> Result<ConvergenceBound> {
    family.validate()?;
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
    }
    if alpha <= 1.0 {
        return Err(Error::WrongBranch(format!("alpha = {alpha} <= 1: the series diverges")));
    }
    require_divergent(family, power)?;
    let delta = alpha - 1.0;
    let r = smallest_r(delta);
    let a1 = family.term_pow(1, power);
    let telescoping_bound = (r as f64 + 1.0) / a1.powf(1.0 / r as f64);
    let bound = if a1 >= 1.0 { telescoping_bound } else { (r as f64 + 1.0) / a1.powf(delta) };

    let n = budget.max_terms;
    let mut s = NeumaierSum::new();
    let mut sum = NeumaierSum::new();
    for k in 1..=n {
        let a = family.term_pow(k, power);
        s.add(a);
        sum.add(a / s.value().powf(alpha));
    }
    let s_n = s.value();
    let s_rel = s.rounding_bound(TERM_ULPS) / s_n;
    // a_k carries TERM_ULPS, s_k^α carries α·s_rel plus one pow and one division
    let term_ulps = TERM_ULPS + alpha * s_rel / UNIT_ROUNDOFF + 4.0;
    let rho = sum.rounding_bound(term_ulps);
    let computed_partial = SumEstimate {
        value: sum.value(),
        error_bound: rho,
        status: SumStatus::ConvergedHeuristic,
        terms_used: n,
        tail: TailRule::None,
    };

    let a_next = family.term_pow(n + 1, power);
    let monotone = family.monotone_from().is_some_and(|m| m <= n + 1);
    let sup_ratio = monotone.then(|| a_next / (s_n + a_next));
    let (mut lo_tail, mut hi_tail) = integral_tail(s_n * (1.0 + s_rel), delta, sup_ratio);
    let s_lo = s_n * (1.0 - s_rel);
    hi_tail = hi_tail.max(integral_tail(s_lo, delta, None).1) * (1.0 + 8.0 * UNIT_ROUNDOFF);
    lo_tail *= 1.0 - 8.0 * UNIT_ROUNDOFF;
    let tele = telescoping_tail(s_lo, r);
    let (hi_tail, rule) = match tele {
        Some(t) if t < hi_tail => (t, TailRule::Telescoping { r }),
        _ => (hi_tail, TailRule::PartialSumIntegral),
    };
    let series = SumEstimate::from_interval(computed_partial.lower() + lo_tail, computed_partial.upper() + hi_tail, n, rule);

    Ok(ConvergenceBound {
        delta,
        r,
        telescoping_bound,
        bound,
        computed_partial,
        s_n,
        telescoping_tail: tele,
        integral_tail: (lo_tail, hi_tail.max(lo_tail)),
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(c: f64) -> SequenceFamily {
        SequenceFamily::power(c, 0.0).unwrap()
    }

    #[test]
    fn r_choice() {
        assert_eq!(smallest_r(1.0), 2);
        assert_eq!(smallest_r(0.5), 3);
        assert_eq!(smallest_r(0.3), 4);
        assert_eq!(smallest_r(2.0), 1);
    }

    #[test]
    fn constant_ones_alpha_two() {
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        let b = abel_dini_bound_convergence(&constant(1.0), 1.0, 2.0, Budget::new(100_000)).unwrap();
        assert_eq!(b.r, 2);
        assert_eq!(b.bound, 3.0);
        assert!(b.computed_partial.value < 3.0);
        let (lo, hi) = b.telescoping_bracket().unwrap();
        assert!(lo <= z2 && z2 <= hi);
        assert!(b.series.contains(z2));
        assert!(b.series.error_bound < 1e-9);
    }

    #[test]
    fn constant_ones_alpha_three_halves() {
        let b = abel_dini_bound_convergence(&constant(1.0), 1.0, 1.5, Budget::new(100_000)).unwrap();
        assert_eq!(b.r, 3);
        assert_eq!(b.bound, 4.0);
        // ζ(3/2) = 2.612375348685488
        assert!(b.series.contains(2.612375348685488));
        assert!(b.computed_partial.value < 4.0);
    }

    #[test]
    fn scaling_by_first_term() {
        let b = abel_dini_bound_convergence(&constant(16.0), 1.0, 2.0, Budget::new(1000)).unwrap();
        assert_eq!(b.telescoping_bound, 0.75);
        assert_eq!(b.bound, 0.75);
        // Σ 16 / (16 n)^2 = ζ(2) / 16
        assert!(b.series.contains(std::f64::consts::PI.powi(2) / 96.0));
    }

    #[test]
    fn small_first_term_needs_rescaled_bound() {
        // a_n = 0.01: Σ a_n/s_n^2 = 100 ζ(2) ≈ 164.5, above (r+1)/a_1^{1/r} = 30
        let b = abel_dini_bound_convergence(&constant(0.01), 1.0, 2.0, Budget::new(100_000)).unwrap();
        assert!((b.telescoping_bound - 30.0).abs() < 1e-12);
        assert!(b.series.lower() > b.telescoping_bound);
        assert!((b.bound - 300.0).abs() < 1e-9);
        assert!(b.series.upper() <= b.bound);
    }

    #[test]
    fn wrong_branch_and_preconditions() {
        assert!(matches!(
            abel_dini_bound_convergence(&constant(1.0), 1.0, 1.0, Budget::default()),
            Err(Error::WrongBranch(_))
        ));
        let g = SequenceFamily::geometric(1.0, 0.5).unwrap();
        assert!(matches!(
            abel_dini_bound_convergence(&g, 1.0, 2.0, Budget::default()),
            Err(Error::PreconditionNotMet(_))
        ));
    }
}
