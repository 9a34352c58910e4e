use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::family::SequenceFamily;
use crate::fmt17;
use crate::norm::Budget;
use crate::sum::NeumaierSum;

use super::require_divergent;

/// Number of doubling blocks requested when the caller does not say.
pub const DEFAULT_BLOCKS: usize = 20;

/// Margin above 1/2 a block sum must clear before the block is closed.
const BLOCK_MARGIN: f64 = 1e-12;

/// Relative agreement required between recorded and recomputed block sums.
const RECORD_TOL: f64 = 1e-9;

/// Finite evidence that `Σ a_n / s_n^α` diverges, where `a_n = x_n^power`.
///
/// Blocks are consecutive: the first starts at `start_index`, each next one
/// at the end of the previous. Each satisfies `s_{k+ℓ} > 2 s_k` and contributes
/// more than 1/2, so the partial sum through the last block exceeds
/// `0.5 · blocks.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceCertificate {
    pub family: SequenceFamily,
    pub power: f64,
    pub alpha: f64,
    /// First index with `s_k >= 1`.
    pub start_index: usize,
    /// `(k, ℓ)` pairs.
    pub blocks: Vec<(usize, usize)>,
    /// `Σ_{i=k+1}^{k+ℓ} a_i / s_i^α` per block.
    pub per_block_sum: Vec<f64>,
    pub total_established: f64,
    pub requested_blocks: usize,
    /// Largest index examined while searching.
    pub terms_scanned: usize,
}

impl DivergenceCertificate {
    /// All requested blocks were closed within the budget.
    pub fn is_complete(&self) -> bool {
        self.blocks.len() >= self.requested_blocks
    }

    /// `α < 1`: blocks bound `Σ a_i/s_i^α` from below through `Σ a_i/s_i`, using `s_i >= 1`.
    pub fn uses_comparison(&self) -> bool {
        self.alpha < 1.0
    }

    /// Line-oriented text form read back by [`DivergenceCertificate::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("abel-dini-certificate v1\n");
        let _ = writeln!(out, "family {}", self.family);
        let _ = writeln!(out, "power {}", fmt17(self.power));
        let _ = writeln!(out, "alpha {}", fmt17(self.alpha));
        let _ = writeln!(out, "k0 {}", self.start_index);
        let _ = writeln!(out, "requested {}", self.requested_blocks);
        let _ = writeln!(out, "scanned {}", self.terms_scanned);
        let _ = writeln!(out, "blocks {}", self.blocks.len());
        for (&(k, l), sum) in self.blocks.iter().zip(&self.per_block_sum) {
            let _ = writeln!(out, "{k} {l} {}", fmt17(*sum));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("certificate: {msg}"));
        let mut lines = text.lines();
        if lines.next() != Some("abel-dini-certificate v1") {
            return Err(bad("missing header line"));
        }
        let mut field = |key: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad(&format!("missing '{key}' line")))?;
            let rest = line
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| bad(&format!("expected '{key} <value>', got '{line}'")))?;
            Ok(rest.to_string())
        };
        let num = |s: String, key: &str| -> Result<f64> { s.parse().map_err(|_| bad(&format!("bad {key} '{s}'"))) };
        let int = |s: String, key: &str| -> Result<usize> { s.parse().map_err(|_| bad(&format!("bad {key} '{s}'"))) };

        let family: SequenceFamily = field("family")?.parse()?;
        let power = num(field("power")?, "power")?;
        let alpha = num(field("alpha")?, "alpha")?;
        let start_index = int(field("k0")?, "k0")?;
        let requested_blocks = int(field("requested")?, "requested")?;
        let terms_scanned = int(field("scanned")?, "scanned")?;
        let count = int(field("blocks")?, "blocks")?;
        let mut blocks = Vec::with_capacity(count);
        let mut per_block_sum = Vec::with_capacity(count);
        for _ in 0..count {
            let line = lines.next().ok_or_else(|| bad("fewer block lines than declared"))?;
            let parts: Vec<&str> = line.split(' ').collect();
            if parts.len() != 3 {
                return Err(bad(&format!("block line '{line}' needs 'k l blocksum'")));
            }
            let k = int(parts[0].to_string(), "k")?;
            let l = int(parts[1].to_string(), "l")?;
            let sum = num(parts[2].to_string(), "blocksum")?;
            blocks.push((k, l));
            per_block_sum.push(sum);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(bad("trailing content after block lines"));
        }
        let total_established = per_block_sum.iter().sum();
        Ok(Self {
            family,
            power,
            alpha,
            start_index,
            blocks,
            per_block_sum,
            total_established,
            requested_blocks,
            terms_scanned,
        })
    }
}

/// Builds doubling blocks for `Σ a_n / s_n^α`, `a_n = family_n^power`, `α <= 1`.
///
/// Terms are scanned up to `budget.max_terms`; if the budget runs out first
/// the certificate holds fewer blocks than requested (see
/// [`DivergenceCertificate::is_complete`]).
pub fn abel_dini_certify_divergence(
    family: &SequenceFamily,
    power: f64,
    alpha: f64,
    blocks_requested: usize,
    budget: Budget,
) -> Result<DivergenceCertificate> {
    family.validate()?;
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
    }
    if alpha > 1.0 {
        return Err(Error::WrongBranch(format!("alpha = {alpha} > 1: the series converges")));
    }
    if !(power.is_finite() && power > 0.0) {
        return Err(Error::InvalidExponent(format!("power must be positive, got {power}")));
    }
    require_divergent(family, power)?;

    let weight = |a: f64, s: f64| if alpha == 1.0 { a / s } else { a / s.powf(alpha) };
    let mut acc = NeumaierSum::new();
    let mut cert = DivergenceCertificate {
        family: family.clone(),
        power,
        alpha,
        start_index: 0,
        blocks: Vec::with_capacity(blocks_requested),
        per_block_sum: Vec::with_capacity(blocks_requested),
        total_established: 0.0,
        requested_blocks: blocks_requested,
        terms_scanned: 0,
    };
    let mut block_start = 0usize;
    let mut s_start = 0.0;
    let mut block_sum = NeumaierSum::new();
    for n in 1..=budget.max_terms {
        let a = family.term_pow(n, power);
        acc.add(a);
        let s = acc.value();
        cert.terms_scanned = n;
        if block_start == 0 {
            if s >= 1.0 {
                cert.start_index = n;
                block_start = n;
                s_start = s;
                if blocks_requested == 0 {
                    break;
                }
            }
            continue;
        }
        block_sum.add(weight(a, s));
        if s > 2.0 * s_start && block_sum.value() > 0.5 + BLOCK_MARGIN {
            cert.blocks.push((block_start, n - block_start));
            cert.per_block_sum.push(block_sum.value());
            cert.total_established += block_sum.value();
            if cert.blocks.len() == blocks_requested {
                break;
            }
            block_start = n;
            s_start = s;
            block_sum = NeumaierSum::new();
        }
    }
    Ok(cert)
}

/// Outcome of [`check_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateCheck {
    pub blocks_verified: usize,
    /// Independently recomputed block sums.
    pub recomputed: Vec<f64>,
    /// `Σ recomputed`, a lower bound for the partial sum through the last block.
    pub established: f64,
}

/// Verifies a certificate from its term rule and block indices alone.
///
/// Rejects non-consecutive blocks, a wrong `k0`, a failed doubling condition,
/// a block sum at or below 1/2, and recorded sums that disagree with the
/// recomputation.
// negated comparisons below also reject NaN
#[allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
pub fn check_certificate(cert: &DivergenceCertificate) -> Result<CertificateCheck> {
    let fail = |msg: String| Err(Error::PreconditionNotMet(format!("certificate rejected: {msg}")));
    cert.family.validate()?;
    if cert.family.is_explicit() {
        return fail("explicit families are finite".into());
    }
    if !(cert.alpha <= 1.0) {
        return fail(format!("alpha = {} is not on the divergent branch", cert.alpha));
    }
    if cert.blocks.len() != cert.per_block_sum.len() {
        return fail("block and sum counts differ".into());
    }
    if cert.start_index == 0 {
        return fail("k0 must be a positive index".into());
    }
    let last = cert.blocks.iter().map(|&(k, l)| k + l).max().unwrap_or(cert.start_index).max(cert.start_index);

    // plain prefix recomputation, one pass
    let mut s = vec![0.0f64; last + 1];
    let mut acc = NeumaierSum::new();
    for (n, slot) in s.iter_mut().enumerate().skip(1) {
        acc.add(cert.family.term_pow(n, cert.power));
        *slot = acc.value();
    }
    let k0 = cert.start_index;
    if !(s[k0] >= 1.0 && (k0 == 1 || s[k0 - 1] < 1.0)) {
        return fail(format!("k0 = {k0} is not the first index with s_k >= 1"));
    }

    let mut expected_k = k0;
    let mut recomputed = Vec::with_capacity(cert.blocks.len());
    for (j, (&(k, l), &recorded)) in cert.blocks.iter().zip(&cert.per_block_sum).enumerate() {
        if k != expected_k {
            return fail(format!("block {j} starts at {k}, expected {expected_k}"));
        }
        if l == 0 {
            return fail(format!("block {j} is empty"));
        }
        if !(s[k + l] > 2.0 * s[k]) {
            return fail(format!("block {j}: s_{} = {} is not > 2 s_{} = {}", k + l, s[k + l], k, 2.0 * s[k]));
        }
        let mut b = NeumaierSum::new();
        for i in k + 1..=k + l {
            b.add(cert.family.term_pow(i, cert.power) / s[i].powf(cert.alpha));
        }
        let sum = b.value();
        if !(sum > 0.5) {
            return fail(format!("block {j}: sum {sum} is not > 1/2"));
        }
        if !((sum - recorded).abs() <= RECORD_TOL * sum) {
            return fail(format!("block {j}: recorded sum {recorded} disagrees with recomputed {sum}"));
        }
        recomputed.push(sum);
        expected_k = k + l;
    }
    let established: f64 = recomputed.iter().sum();
    if !(established >= 0.5 * recomputed.len() as f64) {
        return fail("established total below 0.5 per block".into());
    }
    Ok(CertificateCheck { blocks_verified: recomputed.len(), recomputed, established })
}
