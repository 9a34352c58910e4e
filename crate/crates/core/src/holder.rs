//! Hölder's inequality: Young's pointwise step, finite and infinite
//! verifiers, and the extremal witness `y_i = x_i^{1/(q-1)}` of the finite
//! converse.

use crate::error::{Error, Result};
use crate::exponents::ConjugateExponents;
use crate::family::{SequenceFamily, TERM_ULPS};
use crate::norm::{classify_membership, lp_norm, Budget, Membership};
use crate::sum::{NeumaierSum, SumEstimate, SumStatus, TailRule, UNIT_ROUNDOFF};

/// Relative slack below which an inequality is reported as an equality.
pub const EQUALITY_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `lhs` is below `rhs` even after both error bounds are applied.
    Holds,
    /// The enclosures overlap.
    HoldsWithinTolerance,
    /// `lhs` exceeds `rhs` beyond both error bounds. On valid input this is a bug.
    ViolatedBeyondTolerance,
}

impl Verdict {
    pub fn holds(self) -> bool {
        !matches!(self, Verdict::ViolatedBeyondTolerance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub lhs: SumEstimate,
    pub rhs: SumEstimate,
    /// `rhs.value - lhs.value`
    pub slack: f64,
    pub verdict: Verdict,
    /// Slack is within `1e-10·rhs` plus both error bounds.
    pub equality: bool,
}

impl InequalityReport {
    pub fn new(lhs: SumEstimate, rhs: SumEstimate) -> Self {
        let verdict = if lhs.upper() <= rhs.lower() {
            Verdict::Holds
        } else if lhs.lower() > rhs.upper() {
            Verdict::ViolatedBeyondTolerance
        } else {
            Verdict::HoldsWithinTolerance
        };
        let slack = rhs.value - lhs.value;
        let equality = slack.abs() <= EQUALITY_REL_TOL * rhs.value.abs() + lhs.error_bound + rhs.error_bound;
        Self { lhs, rhs, slack, verdict, equality }
    }
}

fn point(value: f64, rel: f64) -> SumEstimate {
    let e = rel * value.abs();
    SumEstimate::from_interval(value - e, value + e, 1, TailRule::None)
}

fn positive(v: f64, what: &str) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTerm(format!("{what} must be positive and finite, got {v}")))
    }
}

/// Young's inequality `xy <= x^p/p + y^q/q`.
pub fn young_check(x: f64, y: f64, e: ConjugateExponents) -> Result<InequalityReport> {
    positive(x, "x")?;
    positive(y, "y")?;
    let lhs = point(x * y, UNIT_ROUNDOFF);
    let rhs = point(x.powf(e.p()) / e.p() + y.powf(e.q()) / e.q(), 2.0 * TERM_ULPS * UNIT_ROUNDOFF);
    Ok(InequalityReport::new(lhs, rhs))
}

/// Certified enclosure of the product of two certified positive quantities.
fn product(a: &SumEstimate, b: &SumEstimate) -> SumEstimate {
    let terms = a.terms_used.max(b.terms_used);
    if !(a.is_certified() && b.is_certified()) {
        return SumEstimate {
            value: a.value * b.value,
            error_bound: f64::INFINITY,
            status: SumStatus::Unknown,
            terms_used: terms,
            tail: TailRule::None,
        };
    }
    let lo = a.lower().max(0.0) * b.lower().max(0.0) * (1.0 - UNIT_ROUNDOFF);
    let hi = a.upper() * b.upper() * (1.0 + UNIT_ROUNDOFF);
    SumEstimate::from_interval(lo, hi, terms, a.tail)
}

fn explicit<'a>(f: &'a SequenceFamily, name: &str) -> Result<&'a [f64]> {
    f.as_explicit()
        .ok_or_else(|| Error::InvalidParameter(format!("{name} must be an explicit finite sequence, got {f}")))
}

/// Finite Hölder inequality `Σ x_i y_i <= ‖x‖_p ‖y‖_q`.
pub fn holder_finite(x: &SequenceFamily, y: &SequenceFamily, e: ConjugateExponents) -> Result<InequalityReport> {
    x.validate()?;
    y.validate()?;
    let xs = explicit(x, "x")?;
    let ys = explicit(y, "y")?;
    if xs.len() != ys.len() {
        return Err(Error::ShapeError(format!("length mismatch: x has {}, y has {}", xs.len(), ys.len())));
    }
    let mut acc = NeumaierSum::new();
    for (a, b) in xs.iter().zip(ys) {
        acc.add(a * b);
    }
    let rho = acc.rounding_bound(1.0);
    let lhs = SumEstimate::from_interval(acc.value() - rho, acc.value() + rho, xs.len(), TailRule::None);
    let budget = Budget::new(xs.len());
    let rhs = product(&lp_norm(x, e.p(), budget)?, &lp_norm(y, e.q(), budget)?);
    Ok(InequalityReport::new(lhs, rhs))
}

/// Infinite Hölder inequality `‖xy‖_1 <= ‖x‖_p ‖y‖_q` with certified tails.
///
/// The tail of `Σ x_n y_n` past the truncation is bounded by Hölder applied to
/// the two tails, each bounded by the integral test.
pub fn holder_infinite(
    x: &SequenceFamily,
    y: &SequenceFamily,
    e: ConjugateExponents,
    budget: Budget,
) -> Result<InequalityReport> {
    x.validate()?;
    y.validate()?;
    if classify_membership(x, e.p())? == Membership::NotMember {
        return Err(Error::PreconditionNotMet(format!("x not in l^{}: {x}", e.p())));
    }
    if classify_membership(y, e.q())? == Membership::NotMember {
        return Err(Error::PreconditionNotMet(format!("y not in l^{}: {y}", e.q())));
    }
    let n = x.truncated_len(y.truncated_len(budget.max_terms));
    let mut acc = NeumaierSum::new();
    for k in 1..=n {
        acc.add(x.term(k) * y.term(k));
    }
    let rho = acc.rounding_bound(2.0 * TERM_ULPS + 1.0);
    let exhausted = |f: &SequenceFamily| f.len().is_some_and(|len| n >= len);
    let tail = if exhausted(x) || exhausted(y) {
        Some((0.0, TailRule::None))
    } else {
        match (x.power_tail(e.p(), n), y.power_tail(e.q(), n)) {
            (Some(tx), Some(ty)) => Some((
                tx.upper.powf(1.0 / e.p()) * ty.upper.powf(1.0 / e.q()) * (1.0 + 8.0 * UNIT_ROUNDOFF),
                tx.rule,
            )),
            _ => None,
        }
    };
    let lhs = match tail {
        Some((t, rule)) => SumEstimate::from_interval(acc.value() - rho, acc.value() + rho + t, n, rule),
        None => SumEstimate {
            value: acc.value(),
            error_bound: f64::INFINITY,
            status: SumStatus::Unknown,
            terms_used: n,
            tail: TailRule::None,
        },
    };
    let rhs = product(&lp_norm(x, e.p(), budget)?, &lp_norm(y, e.q(), budget)?);
    Ok(InequalityReport::new(lhs, rhs))
}

/// Result of testing the finite converse at its extremal witness.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    /// `y_i = x_i^{1/(q-1)}`
    pub witness: SequenceFamily,
    /// `Σ x_i y_i / (Σ y_i^q)^{1/q}`
    pub achieved_ratio: f64,
    /// `‖x‖_p`
    pub target: f64,
    /// `target - achieved_ratio`
    pub gap: f64,
}

/// `Σ x_i y_i / ‖y‖_q` for a finite competitor `y`.
pub fn dual_ratio(x: &[f64], y: &[f64], q: f64) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::ShapeError(format!("need equal nonzero lengths, got {} and {}", x.len(), y.len())));
    }
    let mut num = NeumaierSum::new();
    let mut den = NeumaierSum::new();
    for (a, b) in x.iter().zip(y) {
        num.add(a * b);
        den.add(b.powf(q));
    }
    Ok(num.value() / den.value().powf(1.0 / q))
}

/// Extremal witness for the converse of the finite Hölder inequality: no
/// constant `C < ‖x‖_p` can bound `Σ x_i y_i` by `C ‖y‖_q`.
pub fn converse_witness_finite(x: &SequenceFamily, e: ConjugateExponents) -> Result<WitnessReport> {
    x.validate()?;
    let xs = explicit(x, "x")?;
    let exponent = 1.0 / (e.q() - 1.0);
    let ys: Vec<f64> = xs.iter().map(|v| v.powf(exponent)).collect();
    let achieved_ratio = dual_ratio(xs, &ys, e.q())?;
    let target = lp_norm(x, e.p(), Budget::new(xs.len()))?.value;
    let witness = SequenceFamily::explicit(ys)?;
    Ok(WitnessReport { witness, achieved_ratio, target, gap: target - achieved_ratio })
}
