//! Abel-Dini certificates and Landau's converse to Hölder's inequality.
//!
//! For a positive series `Σ a_n` with partial sums `s_n → ∞`, the series
//! `Σ a_n / s_n^α` diverges for `α <= 1` and converges for `α > 1`. Both
//! branches are made checkable here:
//!
//! * divergence: a [`DivergenceCertificate`] lists consecutive blocks
//!   `(k, ℓ)` with `s_{k+ℓ} > 2 s_k`, each contributing more than 1/2;
//! * convergence: a [`ConvergenceBound`] reports the telescoping cap
//!   `(r+1)/a_1^{1/r}` and a two-sided tail enclosure.
//!
//! The Landau witness uses both: with `a_i = x_i^p` it builds
//! `y_i = λ x_i^{p/q} / s_i`, whose q-norm is 1 (convergent branch with
//! `α = q`) while `Σ x_i y_i = λ Σ a_i/s_i` diverges (`α = 1`).

mod certificate;
mod convergence;
mod partial;
mod witness;

pub use certificate::{
    abel_dini_certify_divergence, check_certificate, CertificateCheck, DivergenceCertificate, DEFAULT_BLOCKS,
};
pub use convergence::{abel_dini_bound_convergence, smallest_r, ConvergenceBound};
pub use partial::{partial_sums, PartialSumTable};
pub use witness::{landau_lambda, landau_witness, LambdaEstimate, LandauWitness, WitnessOptions};

use crate::error::{Error, Result};
use crate::family::SequenceFamily;
use crate::norm::{classify_membership, Membership};

/// Rejects families whose series `Σ x_n^power` converges.
pub(crate) fn require_divergent(a: &SequenceFamily, power: f64) -> Result<()> {
    if a.is_explicit() {
        return Err(Error::PreconditionNotMet(format!(
            "a divergent series of positive terms is required; explicit family {a} is finite"
        )));
    }
    if classify_membership(a, power)? == Membership::Member {
        return Err(Error::PreconditionNotMet(format!(
            "a divergent series of positive terms is required; sum of ({a})^{power} converges"
        )));
    }
    Ok(())
}
