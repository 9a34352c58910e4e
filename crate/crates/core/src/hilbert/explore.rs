//! Landau-type candidates against the Hilbert kernel.
//!
//! For `a ∉ ℓ^p`, pair `a` with its Landau witness `b ∈ ℓ^q` and tabulate the
//! truncated double sums `S_N = Σ_{m,n<=N} a_m b_n / (m+n)`. The table is a
//! record of growth only; it carries no verdict.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exponents::ConjugateExponents;
use crate::family::SequenceFamily;
use crate::fmt17;
use crate::landau::{landau_witness, WitnessOptions};
use crate::norm::{classify_membership, lp_norm, Budget, Membership};
use crate::sum::SumEstimate;

use super::bilinear::bilinear_fast;
use super::constant::best_constant;

pub const DEFAULT_EXPLORE_SCHEDULE: [usize; 5] = [100, 1_000, 10_000, 100_000, 1_000_000];

#[derive(Debug, Clone, PartialEq)]
pub enum ExplorationReport {
    /// `a ∉ ℓ^p`: rows `(N, S_N)` with `b` the Landau witness of `a`.
    Growth { lambda: f64, rows: Vec<(usize, f64)> },
    /// `a ∈ ℓ^p`: the Hardy-Hilbert bound applies, nothing to explore.
    Bounded { constant: f64, norm_a: SumEstimate },
}

impl ExplorationReport {
    /// `N,S_N` for a growth table; for the bounded case a one-row
    /// `constant,norm_a` table.
    pub fn to_csv(&self) -> String {
        match self {
            ExplorationReport::Growth { rows, .. } => {
                let mut out = String::from("N,S_N\n");
                for (n, s) in rows {
                    let _ = writeln!(out, "{n},{}", fmt17(*s));
                }
                out
            }
            ExplorationReport::Bounded { constant, norm_a } => {
                format!("constant,norm_a\n{},{}\n", fmt17(*constant), fmt17(norm_a.value))
            }
        }
    }
}

pub fn converse_explore(a: &SequenceFamily, e: ConjugateExponents, schedule: &[usize]) -> Result<ExplorationReport> {
    a.validate()?;
    if classify_membership(a, e.p())? == Membership::Member {
        return Ok(ExplorationReport::Bounded {
            constant: best_constant(e),
            norm_a: lp_norm(a, e.p(), Budget::default())?,
        });
    }
    if schedule.is_empty() || schedule.contains(&0) {
        return Err(Error::InvalidParameter("schedule needs positive truncation sizes".into()));
    }
    let mut schedule = schedule.to_vec();
    schedule.sort_unstable();
    schedule.dedup();
    let n_max = *schedule.last().expect("nonempty");
    let opts = WitnessOptions { budget: Budget::new(n_max), blocks: 0, certificate_budget: Budget::new(n_max) };
    let witness = landau_witness(a, e, opts)?;
    let av: Vec<f64> = (1..=n_max).map(|k| a.term(k)).collect();
    let bv = witness.y_values(n_max);
    let mut rows = Vec::with_capacity(schedule.len());
    for n in schedule {
        rows.push((n, bilinear_fast(&av[..n], &bv[..n])?.value));
    }
    Ok(ExplorationReport::Growth { lambda: witness.lambda.lambda, rows })
}
