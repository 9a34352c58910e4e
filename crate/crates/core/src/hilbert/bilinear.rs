//! `Σ_m Σ_n a_m b_n / (m+n)` by direct double loop or by one convolution.
//!
//! The kernel depends only on `m + n`, so the form equals
//! `Σ_s (1/s) Σ_{m+n=s} a_m b_n`; the inner sums are a linear convolution,
//! computed with a single complex FFT carrying `a` in the real part and `b`
//! in the imaginary part.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::sum::{NeumaierSum, UNIT_ROUNDOFF};

/// Inputs whose max/min ratio exceeds this are evaluated by the double loop.
pub const FAST_DYNAMIC_RANGE_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    Naive,
    FastConvolution,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearFormResult {
    pub value: f64,
    pub method: EvalMethod,
    pub m_terms: usize,
    pub n_terms: usize,
    /// Estimated floating-point error of `value`.
    pub roundoff_bound: f64,
    /// Certified bound on the neglected tail, when the inputs come from closed families.
    pub tail_note: Option<f64>,
}

fn validate(a: &[f64], name: &str) -> Result<()> {
    if a.is_empty() {
        return Err(Error::ShapeError(format!("{name} is empty")));
    }
    if let Some((i, v)) = a.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidTerm(format!("{name}[{}] must be positive and finite, got {v}", i + 1)));
    }
    Ok(())
}

fn dynamic_range(a: &[f64]) -> f64 {
    let (lo, hi) = a.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    hi / lo
}

/// O(M·N) reference evaluation with compensated accumulation.
pub fn bilinear_naive(a: &[f64], b: &[f64]) -> Result<BilinearFormResult> {
    validate(a, "a")?;
    validate(b, "b")?;
    let mut acc = NeumaierSum::new();
    for (m, &am) in a.iter().enumerate() {
        let m1 = (m + 1) as f64;
        for (n, &bn) in b.iter().enumerate() {
            acc.add(am * bn / (m1 + (n + 1) as f64));
        }
    }
    Ok(BilinearFormResult {
        value: acc.value(),
        method: EvalMethod::Naive,
        m_terms: a.len(),
        n_terms: b.len(),
        roundoff_bound: acc.rounding_bound(2.0),
        tail_note: None,
    })
}

/// Linear convolution `c[k] = Σ_{i+j=k} a[i] b[j]` for positive real inputs.
pub(crate) fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let out_len = a.len() + b.len() - 1;
    let l = out_len.next_power_of_two();
    let mut buf: Vec<Complex<f64>> = (0..l)
        .map(|i| Complex::new(a.get(i).copied().unwrap_or(0.0), b.get(i).copied().unwrap_or(0.0)))
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(l).process(&mut buf);
    // X = A + iB with A, B the transforms of the real inputs:
    // A_k = (X_k + conj X_{-k}) / 2, B_k = (X_k - conj X_{-k}) / 2i, so
    // A_k B_k = (X_k^2 - conj(X_{-k})^2) / 4i
    let prod: Vec<Complex<f64>> = (0..l)
        .map(|k| {
            let xk = buf[k];
            let xm = buf[(l - k) % l].conj();
            (xk * xk - xm * xm) * Complex::new(0.0, -0.25)
        })
        .collect();
    let mut prod = prod;
    planner.plan_fft_inverse(l).process(&mut prod);
    let scale = 1.0 / l as f64;
    prod[..out_len].iter().map(|z| z.re * scale).collect()
}

/// Convolution evaluation in O((M+N) log(M+N)).
///
/// Falls back to [`bilinear_naive`] when either input spans more than
/// [`FAST_DYNAMIC_RANGE_LIMIT`]; the returned `method` says which path ran.
pub fn bilinear_fast(a: &[f64], b: &[f64]) -> Result<BilinearFormResult> {
    validate(a, "a")?;
    validate(b, "b")?;
    if dynamic_range(a) > FAST_DYNAMIC_RANGE_LIMIT || dynamic_range(b) > FAST_DYNAMIC_RANGE_LIMIT {
        return bilinear_naive(a, b);
    }
    let c = convolve(a, b);
    let mut acc = NeumaierSum::new();
    for (k, ck) in c.iter().enumerate() {
        // c[k] collects m + n = k + 2
        acc.add(ck / (k + 2) as f64);
    }
    let l = c.len().next_power_of_two() as f64;
    let norm2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    // per-entry transform error is O(u log L)·‖a‖₂‖b‖₂; by Cauchy-Schwarz the
    // 1/s weights contribute at most sqrt(π²/6 - 1) < 0.81
    let transform = 8.0 * UNIT_ROUNDOFF * l.log2().max(1.0) * norm2(a) * norm2(b) * 0.81;
    Ok(BilinearFormResult {
        value: acc.value(),
        method: EvalMethod::FastConvolution,
        m_terms: a.len(),
        n_terms: b.len(),
        roundoff_bound: transform + acc.rounding_bound(2.0),
        tail_note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_term() {
        assert_eq!(bilinear_naive(&[1.0], &[1.0]).unwrap().value, 0.5);
        assert!((bilinear_fast(&[1.0], &[1.0]).unwrap().value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_by_two() {
        let exact = 17.0 / 12.0;
        let n = bilinear_naive(&[1.0, 1.0], &[1.0, 1.0]).unwrap();
        let f = bilinear_fast(&[1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert!((n.value - exact).abs() < 1e-15);
        assert!((f.value - exact).abs() < 1e-15);
        assert_eq!(f.method, EvalMethod::FastConvolution);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(bilinear_naive(&[], &[1.0]), Err(Error::ShapeError(_))));
        assert!(matches!(bilinear_fast(&[1.0], &[]), Err(Error::ShapeError(_))));
        assert!(matches!(bilinear_naive(&[1.0], &[0.0]), Err(Error::InvalidTerm(_))));
        assert!(matches!(bilinear_fast(&[1.0, -1.0], &[1.0]), Err(Error::InvalidTerm(_))));
    }

    #[test]
    fn random_256_agrees_with_naive() {
        let mut rng = StdRng::seed_from_u64(256);
        let a: Vec<f64> = (0..256).map(|_| rng.random_range(1e-3..1.0)).collect();
        let b: Vec<f64> = (0..256).map(|_| rng.random_range(1e-3..1.0)).collect();
        let n = bilinear_naive(&a, &b).unwrap();
        let f = bilinear_fast(&a, &b).unwrap();
        assert!(((f.value - n.value) / n.value).abs() <= 1e-12);
        assert!((f.value - n.value).abs() <= f.roundoff_bound + n.roundoff_bound);
    }

    #[test]
    fn unequal_lengths() {
        let a = [0.3, 1.2, 0.7, 2.0, 0.1];
        let b = [0.9, 0.4];
        let n = bilinear_naive(&a, &b).unwrap();
        let f = bilinear_fast(&a, &b).unwrap();
        assert!((n.value - f.value).abs() < 1e-14);
        assert_eq!((f.m_terms, f.n_terms), (5, 2));
    }

    #[test]
    fn wide_dynamic_range_falls_back() {
        let a = [1.0, 1e-13];
        let f = bilinear_fast(&a, &[1.0]).unwrap();
        assert_eq!(f.method, EvalMethod::Naive);
    }

    #[test]
    fn convolution_matches_direct() {
        let a = [1.0, 2.0, 3.0];
        let b = [4.0, 5.0];
        let c = convolve(&a, &b);
        let expect = [4.0, 13.0, 22.0, 15.0];
        for (x, y) in c.iter().zip(expect) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
