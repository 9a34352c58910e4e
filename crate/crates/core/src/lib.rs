//! Certified numerics for sequence-space inequalities.
//!
//! * [`holder`]: Hölder's inequality on finite and infinite sequences, and the
//!   extremal witness of its finite converse.
//! * [`landau`]: Abel-Dini certificates for `Σ a_n / s_n^α` and the witness
//!   `y ∈ ℓ^q` with `Σ x_n y_n = ∞` for any `x ∉ ℓ^p`.
//! * [`hilbert`]: Hilbert bilinear forms `Σ a_m b_n / (m+n)`, evaluated by
//!   convolution, and numerical studies of the constant `π / sin(π/p)`.
//!
//! Every numerical series value is returned as a [`SumEstimate`]: a value,
//! an error bound and a status saying whether the bound is rigorous.

pub mod error;
pub mod exponents;
pub mod family;
pub mod hilbert;
pub mod holder;
pub mod landau;
pub mod norm;
pub mod sum;

pub use error::{Error, Result};
pub use exponents::ConjugateExponents;
pub use family::{SequenceFamily, TailBound};
pub use norm::{classify_membership, lp_norm, Budget, Membership};
pub use sum::{compensated_sum, NeumaierSum, SumEstimate, SumStatus, TailRule};

/// Fixed 17-significant-digit rendering used in every emitted file.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
