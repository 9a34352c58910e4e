use crate::error::Result;
use crate::exponents::ConjugateExponents;
use crate::family::{SequenceFamily, TERM_ULPS};
use crate::norm::Budget;
use crate::sum::{NeumaierSum, SumEstimate, TailRule, UNIT_ROUNDOFF};

use super::certificate::{abel_dini_certify_divergence, DivergenceCertificate, DEFAULT_BLOCKS};
use super::convergence::{integral_tail, smallest_r, telescoping_tail};
use super::partial::{partial_sums, PartialSumTable};
use super::require_divergent;

/// Number of leading indices on which the exponent identity is checked.
const IDENTITY_CHECK_TERMS: usize = 10_000;

/// `λ` with `1/λ^q = Σ x_i^p / s_i^q`, and its certified enclosure.
#[derive(Debug, Clone)]
pub struct LambdaEstimate {
    pub lambda: f64,
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    /// Certified enclosure of `Σ x_i^p / s_i^q`.
    pub series: SumEstimate,
    /// `r / s_N^{1/r}` with `δ = q - 1`, when `s_N >= 1`.
    pub telescoping_tail: Option<f64>,
    /// Tail bracket actually used.
    pub tail: (f64, f64),
}

impl LambdaEstimate {
    pub fn contains(&self, lambda: f64) -> bool {
        self.lambda_lower <= lambda && lambda <= self.lambda_upper
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WitnessOptions {
    /// Truncation for the λ series and the norm check.
    pub budget: Budget,
    pub blocks: usize,
    /// Term budget for the divergence block search.
    pub certificate_budget: Budget,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self { budget: Budget::default(), blocks: DEFAULT_BLOCKS, certificate_budget: Budget::new(100_000_000) }
    }
}

fn lambda_from_table(table: &PartialSumTable, e: ConjugateExponents) -> LambdaEstimate {
    let q = e.q();
    let n = table.len();
    let mut acc = NeumaierSum::new();
    for i in 1..=n {
        acc.add(table.term(i) / table.s(i).powf(q));
    }
    let s_rel = table.relative_error();
    let rho = acc.rounding_bound(TERM_ULPS + q * s_rel / UNIT_ROUNDOFF + 4.0);

    let delta = q - 1.0;
    let s_n = table.s(n);
    let family = table.family();
    let a_next = table.term(n + 1);
    let monotone = family.monotone_from().is_some_and(|m| m <= n + 1);
    let sup_ratio = monotone.then(|| a_next / (s_n + a_next));
    let lo_tail = integral_tail(s_n * (1.0 + s_rel), delta, sup_ratio).0 * (1.0 - 8.0 * UNIT_ROUNDOFF);
    let hi_integral = integral_tail(s_n * (1.0 - s_rel), delta, None).1 * (1.0 + 8.0 * UNIT_ROUNDOFF);
    let tele = telescoping_tail(s_n * (1.0 - s_rel), smallest_r(delta)).map(|t| t * (1.0 + 8.0 * UNIT_ROUNDOFF));
    let (hi_tail, rule) = match tele {
        Some(t) if t < hi_integral => (t, TailRule::Telescoping { r: smallest_r(delta) }),
        _ => (hi_integral, TailRule::PartialSumIntegral),
    };
    let lo = acc.value() - rho + lo_tail;
    let hi = acc.value() + rho + hi_tail;
    let series = SumEstimate::from_interval(lo, hi, n, rule);
    let lambda = series.value.powf(-1.0 / q);
    LambdaEstimate {
        lambda,
        lambda_lower: series.upper().powf(-1.0 / q) * (1.0 - 4.0 * UNIT_ROUNDOFF),
        lambda_upper: series.lower().powf(-1.0 / q) * (1.0 + 4.0 * UNIT_ROUNDOFF),
        series,
        telescoping_tail: tele,
        tail: (lo_tail, hi_tail),
    }
}

/// Normalizing constant of the Landau witness for `x ∉ ℓ^p`.
pub fn landau_lambda(x: &SequenceFamily, e: ConjugateExponents, budget: Budget) -> Result<LambdaEstimate> {
    x.validate()?;
    require_divergent(x, e.p())?;
    let table = partial_sums(x, e.p(), budget.max_terms);
    Ok(lambda_from_table(&table, e))
}

/// Witness `y ∈ ℓ^q` with `Σ x_i y_i = ∞`, for `x ∉ ℓ^p`.
#[derive(Debug, Clone)]
pub struct LandauWitness {
    pub x: SequenceFamily,
    pub exponents: ConjugateExponents,
    pub lambda: LambdaEstimate,
    /// `s_i = Σ_{j<=i} x_j^p` for the truncation used.
    pub table: PartialSumTable,
    /// Certified enclosure of `Σ y_i^q`; should contain 1.
    pub norm_check: SumEstimate,
    /// Doubling blocks for `Σ x_i^p / s_i`, hence for `Σ x_i y_i = λ Σ x_i^p / s_i`.
    pub divergence: DivergenceCertificate,
    /// Largest relative deviation of `x_i y_i` from `λ x_i^p / s_i` on the first indices.
    pub identity_max_rel_dev: f64,
}

impl LandauWitness {
    /// `y_i = λ x_i^{p/q} / s_i`, for `1 <= i <= table.len()`.
    pub fn y(&self, i: usize) -> f64 {
        let e = self.exponents;
        self.lambda.lambda * self.x.term_pow(i, e.p() / e.q()) / self.table.s(i)
    }

    pub fn y_values(&self, n: usize) -> Vec<f64> {
        (1..=n.min(self.table.len())).map(|i| self.y(i)).collect()
    }

    pub fn norm_contains_one(&self) -> bool {
        self.norm_check.lower() <= 1.0 && 1.0 <= self.norm_check.upper()
    }
}

pub fn landau_witness(x: &SequenceFamily, e: ConjugateExponents, options: WitnessOptions) -> Result<LandauWitness> {
    x.validate()?;
    require_divergent(x, e.p())?;
    let (p, q) = (e.p(), e.q());
    let table = partial_sums(x, p, options.budget.max_terms);
    let lambda = lambda_from_table(&table, e);
    let n = table.len();

    let mut witness = LandauWitness {
        x: x.clone(),
        exponents: e,
        lambda,
        norm_check: SumEstimate::from_interval(0.0, 0.0, 0, TailRule::None),
        divergence: abel_dini_certify_divergence(x, p, 1.0, options.blocks, options.certificate_budget)?,
        identity_max_rel_dev: 0.0,
        table,
    };

    let mut acc = NeumaierSum::new();
    let mut dev = 0.0f64;
    for i in 1..=n {
        let y = witness.y(i);
        acc.add(y.powf(q));
        if i <= IDENTITY_CHECK_TERMS {
            let lhs = x.term(i) * y;
            let rhs = witness.lambda.lambda * witness.table.term(i) / witness.table.s(i);
            dev = dev.max(((lhs - rhs) / rhs).abs());
        }
    }
    witness.identity_max_rel_dev = dev;

    // y_i^q carries the error of λ^q, x^{p/q}, s_i and three roundings
    let s_rel = witness.table.relative_error();
    let ulps = q * (2.0 * TERM_ULPS + s_rel / UNIT_ROUNDOFF + 3.0);
    let rho = acc.rounding_bound(ulps);
    let lam_q = witness.lambda.lambda.powf(q);
    let (tl, th) = witness.lambda.tail;
    let lo = acc.value() - rho + lam_q * tl * (1.0 - 4.0 * UNIT_ROUNDOFF);
    let hi = acc.value() + rho + lam_q * th * (1.0 + 4.0 * UNIT_ROUNDOFF);
    witness.norm_check = SumEstimate::from_interval(lo, hi, n, witness.lambda.series.tail);
    Ok(witness)
}
