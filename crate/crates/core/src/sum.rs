//! Compensated summation and certified sum estimates.
//!
//! All accumulation on the certified path goes through [`NeumaierSum`], in
//! stream order. The rounding bound attached to a finished sum is the
//! cascaded-summation bound `u|s| + γ²_{n-1} Σ|x_i|`, with an additional
//! `k·u·Σ|x_i|` term when the inputs are themselves results of `k`-ulp
//! accurate evaluations (e.g. `powf`).

use std::fmt;

use crate::error::{Error, Result};

/// Unit roundoff of `f64`.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// `γ_k = k·u / (1 - k·u)`.
pub fn gamma(k: usize) -> f64 {
    let ku = k as f64 * UNIT_ROUNDOFF;
    ku / (1.0 - ku)
}

/// Kahan-Babuška-Neumaier accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    abs_sum: f64,
    count: usize,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
        self.count += 1;
    }

    /// Current compensated value.
    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Upper bound on `Σ|x_i|` over everything added so far.
    pub fn abs_sum(&self) -> f64 {
        self.abs_sum * (1.0 + gamma(self.count.max(1)))
    }

    /// Rounding bound for the current value, assuming each input carries a
    /// relative error of at most `term_ulps` units of roundoff.
    pub fn rounding_bound(&self, term_ulps: f64) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        let n = self.count;
        let g = gamma(n.saturating_sub(1).max(1));
        let abs = self.abs_sum();
        2.0 * UNIT_ROUNDOFF * self.value().abs() + g * g * abs + term_ulps * UNIT_ROUNDOFF * abs
    }
}

/// Convergence status of a numerical series value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumStatus {
    /// The true value lies in `value ± error_bound`.
    ConvergedCertified,
    /// Finite error estimate without a rigorous tail bound.
    ConvergedHeuristic,
    /// The underlying series is proven divergent; `value` is a truncated sum.
    DivergentCertified,
    Unknown,
}

/// How the tail beyond the summed terms was accounted for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailRule {
    /// Finite input; no tail.
    None,
    /// Tail summed in closed form (geometric).
    Exact,
    /// Integral test on the term rule.
    IntegralTest,
    /// Integral test on a dominating comparison family `x^{-a'}` after
    /// bounding `ln(x+1) <= ln(N+1)·(x/N)^eta`.
    Comparison { eta: f64 },
    /// Abel-Dini telescoping bound `r / s_N^{1/r}`.
    Telescoping { r: u32 },
    /// Integral comparison over the partial sums, `∫_{s_N}^∞ ds / s^{1+δ}`.
    PartialSumIntegral,
    /// Alternating series remainder.
    Alternating,
}

/// A numerical sum together with a rigorous error bound and status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub status: SumStatus,
    pub terms_used: usize,
    pub tail: TailRule,
}

impl SumEstimate {
    /// Certified estimate spanning the interval `[lo, hi]`.
    pub fn from_interval(lo: f64, hi: f64, terms_used: usize, tail: TailRule) -> Self {
        debug_assert!(lo <= hi, "empty enclosure [{lo}, {hi}]");
        let value = 0.5 * (lo + hi);
        // widen by the rounding of the midpoint itself
        let error_bound = (0.5 * (hi - lo)) * (1.0 + UNIT_ROUNDOFF) + UNIT_ROUNDOFF * value.abs();
        Self { value, error_bound, status: SumStatus::ConvergedCertified, terms_used, tail }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    pub fn width(&self) -> f64 {
        2.0 * self.error_bound
    }

    pub fn is_certified(&self) -> bool {
        self.status == SumStatus::ConvergedCertified
    }
}

impl fmt::Display for SumEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e} ± {:.3e} ({:?}, {} terms)", self.value, self.error_bound, self.status, self.terms_used)
    }
}

/// Compensated sum of a finite stream, in stream order.
pub fn compensated_sum<I>(terms: I) -> Result<SumEstimate>
where
    I: IntoIterator<Item = f64>,
{
    let mut acc = NeumaierSum::new();
    for (i, x) in terms.into_iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::InvalidTerm(format!("term {} is not finite ({x})", i + 1)));
        }
        acc.add(x);
    }
    Ok(SumEstimate {
        value: acc.value(),
        error_bound: acc.rounding_bound(0.0),
        status: SumStatus::ConvergedCertified,
        terms_used: acc.count(),
        tail: TailRule::None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_integers_are_exact() {
        let s = compensated_sum([1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.value, 6.0);
        assert!(s.error_bound <= 8.0 * UNIT_ROUNDOFF * 6.0);
    }

    #[test]
    fn empty_sum() {
        let s = compensated_sum(std::iter::empty()).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.error_bound, 0.0);
        assert_eq!(s.terms_used, 0);
    }

    #[test]
    fn cancellation_is_recovered() {
        // exact rational value of 1e16 + 1 - 1e16 is 1
        let s = compensated_sum([1e16, 1.0, -1e16]).unwrap();
        assert_eq!(s.value, 1.0);
        assert!(s.contains(1.0));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(compensated_sum([1.0, f64::NAN]), Err(Error::InvalidTerm(_))));
        assert!(matches!(compensated_sum([f64::INFINITY]), Err(Error::InvalidTerm(_))));
    }

    #[test]
    fn tenths_sum_better_than_naive() {
        let naive: f64 = std::iter::repeat_n(0.1, 1_000_000).sum();
        let s = compensated_sum(std::iter::repeat_n(0.1, 1_000_000)).unwrap();
        let exact = 100_000.0;
        // the represented 0.1 is slightly above 1/10
        let represented = 0.1f64 * 1e6;
        assert!((s.value - represented).abs() <= (naive - exact).abs());
        assert!(s.contains(represented));
    }

    proptest! {
        // exact reference: integers scaled by a power of two are summed exactly in i128
        #[test]
        fn enclosure_contains_exact_sum(v in proptest::collection::vec(-1_000_000_000i64..1_000_000_000, 0..200), shift in -40i32..40) {
            let scale = 2f64.powi(shift);
            let terms: Vec<f64> = v.iter().map(|&k| k as f64 * scale).collect();
            let exact: i128 = v.iter().map(|&k| k as i128).sum();
            let s = compensated_sum(terms).unwrap();
            prop_assert!(s.contains(exact as f64 * scale));
        }
    }
}
