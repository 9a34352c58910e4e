//! Hilbert's inequality `Σ_m Σ_n a_m b_n/(m+n) < π/sin(π/p) ‖a‖_p ‖b‖_q`.
//!
//! Bilinear forms are evaluated with [`bilinear_fast`] (one convolution) and
//! cross-checked against [`bilinear_naive`]. The remaining operations probe
//! the constant numerically: truncated Rayleigh-type ratios, the integral
//! `∫_0^∞ dt / ((1+t) t^s) = π / sin(πs)`, the inner-sum estimate and an
//! exploration of Landau-type candidates against the Hilbert kernel.

mod bilinear;
mod constant;
mod explore;
pub mod quadrature;

pub use bilinear::{bilinear_fast, bilinear_naive, BilinearFormResult, EvalMethod, FAST_DYNAMIC_RANGE_LIMIT};
pub use constant::{
    best_constant, best_constant_study, default_lambda, hilbert_ratio, inner_sum_bound_check, sine_integral_check,
    ConstantStudy, HilbertRatio, InnerSumCheck, SineIntegralCheck, DEFAULT_SCHEDULE,
};
pub use explore::{converse_explore, ExplorationReport, DEFAULT_EXPLORE_SCHEDULE};
