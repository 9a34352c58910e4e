//! Closed-form positive sequence families and their canonical text form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sum::{TailRule, UNIT_ROUNDOFF};

/// Relative accuracy, in units of roundoff, assumed for one evaluated term
/// or one evaluated `term^p`.
pub const TERM_ULPS: f64 = 8.0;

/// A positive sequence `(x_n)_{n>=1}` given by a closed-form term rule.
///
/// Signed or complex data reduces to this case by taking absolute values;
/// only strictly positive terms are representable.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceFamily {
    /// `c · n^(-alpha)`
    Power { c: f64, alpha: f64 },
    /// `n^(-alpha) · ln(n+1)^(-beta)`
    PowerLog { alpha: f64, beta: f64 },
    /// `c · r^n`
    Geometric { c: f64, r: f64 },
    /// Listed values; the sequence terminates after the last one.
    Explicit(Vec<f64>),
}

/// Two-sided bound on a series tail `Σ_{n>N} term`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub lower: f64,
    pub upper: f64,
    pub rule: TailRule,
}

impl SequenceFamily {
    pub fn power(c: f64, alpha: f64) -> Result<Self> {
        let f = SequenceFamily::Power { c, alpha };
        f.validate()?;
        Ok(f)
    }

    pub fn power_log(alpha: f64, beta: f64) -> Result<Self> {
        let f = SequenceFamily::PowerLog { alpha, beta };
        f.validate()?;
        Ok(f)
    }

    pub fn geometric(c: f64, r: f64) -> Result<Self> {
        let f = SequenceFamily::Geometric { c, r };
        f.validate()?;
        Ok(f)
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        let f = SequenceFamily::Explicit(values);
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_pos = |v: f64| v.is_finite() && v > 0.0;
        match *self {
            SequenceFamily::Power { c, alpha } => {
                if !finite_pos(c) {
                    return Err(Error::InvalidParameter(format!("power: c must be > 0, got {c}")));
                }
                if !(alpha.is_finite() && alpha >= 0.0) {
                    return Err(Error::InvalidParameter(format!("power: alpha must be >= 0, got {alpha}")));
                }
            }
            SequenceFamily::PowerLog { alpha, beta } => {
                if !(alpha.is_finite() && alpha >= 0.0) {
                    return Err(Error::InvalidParameter(format!("powerlog: alpha must be >= 0, got {alpha}")));
                }
                if !beta.is_finite() {
                    return Err(Error::InvalidParameter(format!("powerlog: beta must be finite, got {beta}")));
                }
            }
            SequenceFamily::Geometric { c, r } => {
                if !finite_pos(c) {
                    return Err(Error::InvalidParameter(format!("geom: c must be > 0, got {c}")));
                }
                if !(r > 0.0 && r < 1.0) {
                    return Err(Error::InvalidParameter(format!("geom: r must lie in (0, 1), got {r}")));
                }
            }
            SequenceFamily::Explicit(ref v) => {
                if v.is_empty() {
                    return Err(Error::ShapeError("explicit family needs at least one term".into()));
                }
                if let Some((i, x)) = v.iter().enumerate().find(|(_, &x)| !finite_pos(x)) {
                    return Err(Error::InvalidTerm(format!("explicit term {} must be positive and finite, got {x}", i + 1)));
                }
            }
        }
        Ok(())
    }

    /// Number of terms, or `None` for an infinite family.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match self {
            SequenceFamily::Explicit(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn as_explicit(&self) -> Option<&[f64]> {
        match self {
            SequenceFamily::Explicit(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, SequenceFamily::Explicit(_))
    }

    /// Number of terms available when truncating at `n`.
    pub fn truncated_len(&self, n: usize) -> usize {
        self.len().map_or(n, |len| len.min(n))
    }

    /// Term `x_n` for `n >= 1`. Explicit families return 0 past their end.
    #[inline]
    pub fn term(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        let x = n as f64;
        match *self {
            SequenceFamily::Power { c, alpha } => {
                if alpha == 0.0 {
                    c
                } else {
                    c * x.powf(-alpha)
                }
            }
            SequenceFamily::PowerLog { alpha, beta } => x.powf(-alpha) * (x + 1.0).ln().powf(-beta),
            SequenceFamily::Geometric { c, r } => c * r.powf(x),
            SequenceFamily::Explicit(ref v) => v.get(n - 1).copied().unwrap_or(0.0),
        }
    }

    /// `x_n^p`, evaluated from the term rule directly where that is more accurate.
    #[inline]
    pub fn term_pow(&self, n: usize, p: f64) -> f64 {
        let x = n as f64;
        match *self {
            SequenceFamily::Power { c, alpha } => {
                if alpha == 0.0 {
                    c.powf(p)
                } else {
                    c.powf(p) * x.powf(-alpha * p)
                }
            }
            SequenceFamily::PowerLog { alpha, beta } => x.powf(-alpha * p) * (x + 1.0).ln().powf(-beta * p),
            SequenceFamily::Geometric { c, r } => c.powf(p) * r.powf(p * x),
            SequenceFamily::Explicit(_) => self.term(n).powf(p),
        }
    }

    /// First index from which the terms are nonincreasing, if any.
    pub fn monotone_from(&self) -> Option<usize> {
        match *self {
            SequenceFamily::Power { .. } | SequenceFamily::Geometric { .. } => Some(1),
            SequenceFamily::PowerLog { alpha, beta } => powerlog_monotone_from(alpha, beta),
            SequenceFamily::Explicit(ref v) => {
                // last index i such that v[i-1..] is nonincreasing
                let mut start = v.len();
                while start > 1 && v[start - 2] >= v[start - 1] {
                    start -= 1;
                }
                Some(start.max(1))
            }
        }
    }

    /// Bounds on `Σ_{n>N} x_n^p` by the integral test, for closed families in ℓ^p.
    ///
    /// Returns `None` when the tail cannot be certified at this `N` (not yet
    /// monotone, or the comparison exponent is not summable).
    pub fn power_tail(&self, p: f64, n: usize) -> Option<TailBound> {
        let nf = n as f64;
        let up = |v: f64| v * (1.0 + 32.0 * UNIT_ROUNDOFF);
        let down = |v: f64| v * (1.0 - 32.0 * UNIT_ROUNDOFF);
        match *self {
            SequenceFamily::Explicit(ref v) => {
                if n >= v.len() {
                    Some(TailBound { lower: 0.0, upper: 0.0, rule: TailRule::None })
                } else {
                    None
                }
            }
            SequenceFamily::Geometric { c, r } => {
                let rp = r.powf(p);
                let t = c.powf(p) * r.powf(p * (nf + 1.0)) / (1.0 - rp);
                Some(TailBound { lower: down(t), upper: up(t), rule: TailRule::Exact })
            }
            SequenceFamily::Power { c, alpha } => {
                let a = alpha * p;
                if a <= 1.0 || n == 0 {
                    return None;
                }
                let cp = c.powf(p);
                let upper = cp * nf.powf(1.0 - a) / (a - 1.0);
                let lower = cp * (nf + 1.0).powf(1.0 - a) / (a - 1.0);
                Some(TailBound { lower: down(lower), upper: up(upper), rule: TailRule::IntegralTest })
            }
            SequenceFamily::PowerLog { alpha, beta } => {
                if n < self.monotone_from()? {
                    return None;
                }
                let a = alpha * p;
                let b = beta * p;
                let l1 = (nf + 1.0).ln();
                let l2 = (nf + 2.0).ln();
                if a > 1.0 {
                    if b >= 0.0 {
                        let upper = l1.powf(-b) * nf.powf(1.0 - a) / (a - 1.0);
                        Some(TailBound { lower: 0.0, upper: up(upper), rule: TailRule::IntegralTest })
                    } else {
                        let nb = -b;
                        let eta = 1.0 / l1;
                        let denom = a - 1.0 - eta * nb;
                        if denom <= 0.0 {
                            return None;
                        }
                        let upper = l1.powf(nb) * nf.powf(1.0 - a) / denom;
                        let lower = l2.powf(nb) * (nf + 1.0).powf(1.0 - a) / (a - 1.0);
                        Some(TailBound { lower: down(lower), upper: up(upper), rule: TailRule::Comparison { eta } })
                    }
                } else if a == 1.0 && b > 1.0 && n >= 2 {
                    let upper = nf.ln().powf(1.0 - b) / (b - 1.0);
                    let lower = l2.powf(1.0 - b) / (b - 1.0);
                    Some(TailBound { lower: down(lower), upper: up(upper), rule: TailRule::IntegralTest })
                } else {
                    None
                }
            }
        }
    }
}

fn powerlog_monotone_from(alpha: f64, beta: f64) -> Option<usize> {
    if beta >= 0.0 {
        return Some(1);
    }
    if alpha == 0.0 {
        return None;
    }
    // d/dx log term <= 0  iff  g(x) = alpha (x+1) ln(x+1) + beta x >= 0; g is convex,
    // so g >= 0 and g' > 0 at a point propagate to every larger x.
    let g = |x: f64| alpha * (x + 1.0) * (x + 1.0).ln() + beta * x;
    let g_prime = |x: f64| alpha * ((x + 1.0).ln() + 1.0) + beta;
    let ok = |n: usize| {
        let x = n as f64;
        g(x) >= 0.0 && g_prime(x) > 0.0
    };
    let mut hi = 1usize;
    while !ok(hi) {
        hi = hi.checked_mul(2)?;
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return Some(1);
    }
    // ok(lo) is false, ok(hi) is true
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

impl fmt::Display for SequenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceFamily::Power { c, alpha } => write!(f, "power:c={c},alpha={alpha}"),
            SequenceFamily::PowerLog { alpha, beta } => write!(f, "powerlog:alpha={alpha},beta={beta}"),
            SequenceFamily::Geometric { c, r } => write!(f, "geom:c={c},r={r}"),
            SequenceFamily::Explicit(v) => {
                f.write_str("explicit:")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_number(s: &str, what: &str) -> Result<f64> {
    let s = s.trim();
    s.parse::<f64>().map_err(|_| Error::Parse(format!("{what}: cannot parse number '{s}'")))
}

fn parse_keyed(kind: &str, body: &str, keys: &[&str]) -> Result<Vec<Option<f64>>> {
    let mut out = vec![None; keys.len()];
    if body.trim().is_empty() {
        return Ok(out);
    }
    for part in body.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{kind}: expected key=value, got '{part}'")))?;
        let k = k.trim();
        let idx = keys
            .iter()
            .position(|&name| name == k)
            .ok_or_else(|| Error::Parse(format!("{kind}: unknown key '{k}'")))?;
        if out[idx].is_some() {
            return Err(Error::Parse(format!("{kind}: duplicate key '{k}'")));
        }
        out[idx] = Some(parse_number(v, kind)?);
    }
    Ok(out)
}

fn required(v: Option<f64>, kind: &str, key: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Parse(format!("{kind}: missing key '{key}'")))
}

impl FromStr for SequenceFamily {
    type Err = Error;

    /// Parses `power:c=1,alpha=0.5`, `powerlog:alpha=0.5,beta=1`,
    /// `geom:c=1,r=0.5` or `explicit:3,4`. `c` defaults to 1.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("family '{s}' has no ':' separator")))?;
        match kind {
            "power" => {
                let v = parse_keyed(kind, body, &["c", "alpha"])?;
                SequenceFamily::power(v[0].unwrap_or(1.0), required(v[1], kind, "alpha")?)
            }
            "powerlog" => {
                let v = parse_keyed(kind, body, &["alpha", "beta"])?;
                SequenceFamily::power_log(required(v[0], kind, "alpha")?, required(v[1], kind, "beta")?)
            }
            "geom" => {
                let v = parse_keyed(kind, body, &["c", "r"])?;
                SequenceFamily::geometric(v[0].unwrap_or(1.0), required(v[1], kind, "r")?)
            }
            "explicit" => {
                let values = body
                    .split(',')
                    .map(|t| parse_number(t, kind))
                    .collect::<Result<Vec<_>>>()?;
                SequenceFamily::explicit(values)
            }
            other => Err(Error::Parse(format!("unknown family kind '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_canonical_forms() {
        let cases = [
            ("power:c=1,alpha=0.5", SequenceFamily::Power { c: 1.0, alpha: 0.5 }),
            ("powerlog:alpha=0.5,beta=1", SequenceFamily::PowerLog { alpha: 0.5, beta: 1.0 }),
            ("geom:c=1,r=0.5", SequenceFamily::Geometric { c: 1.0, r: 0.5 }),
            ("explicit:3,4", SequenceFamily::Explicit(vec![3.0, 4.0])),
        ];
        for (text, fam) in cases {
            let parsed: SequenceFamily = text.parse().unwrap();
            assert_eq!(parsed, fam);
            assert_eq!(parsed.to_string(), text);
        }
    }

    #[test]
    fn default_c_is_made_explicit() {
        let f: SequenceFamily = "power:alpha=2".parse().unwrap();
        assert_eq!(f.to_string(), "power:c=1,alpha=2");
    }

    #[test]
    fn rejects_bad_text() {
        for bad in [
            "power:c=1,alpha=0.5,gamma=2",
            "power:c=1",
            "power:c=1,c=2,alpha=1",
            "geom:c=1,r=1",
            "geom:c=1,r=0",
            "explicit:",
            "explicit:1,-2",
            "explicit:1,0",
            "exp:1",
            "power",
            "power:c=x,alpha=1",
            "power:c=-1,alpha=1",
            "power:c=1,alpha=-1",
        ] {
            assert!(bad.parse::<SequenceFamily>().is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn term_rules() {
        let p = SequenceFamily::power(2.0, 1.0).unwrap();
        assert_eq!(p.term(4), 0.5);
        let g = SequenceFamily::geometric(1.0, 0.5).unwrap();
        assert_eq!(g.term(3), 0.125);
        let e = SequenceFamily::explicit(vec![3.0, 4.0]).unwrap();
        assert_eq!(e.term(2), 4.0);
        assert_eq!(e.term(3), 0.0);
        let pl = SequenceFamily::power_log(1.0, 1.0).unwrap();
        assert!((pl.term(1) - 1.0 / 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn powerlog_negative_beta_monotone_index() {
        let f = SequenceFamily::power_log(0.5, -3.0).unwrap();
        let n0 = f.monotone_from().unwrap();
        assert!(n0 > 1);
        for n in n0..n0 + 10_000 {
            assert!(f.term(n + 1) <= f.term(n), "not monotone at {n}");
        }
        // the term increases somewhere before n0
        assert!((1..n0).any(|n| f.term(n + 1) > f.term(n)));
        assert_eq!(SequenceFamily::power_log(0.0, -1.0).unwrap().monotone_from(), None);
    }

    #[test]
    fn power_tail_brackets_brute_force() {
        let f = SequenceFamily::power(1.0, 1.0).unwrap();
        let t = f.power_tail(2.0, 1000).unwrap();
        let brute: f64 = (1001..2_000_000).map(|n| 1.0 / (n as f64 * n as f64)).sum::<f64>() + 1.0 / 2_000_000.0;
        assert!(t.lower <= brute && brute <= t.upper);
        assert!(f.power_tail(1.0, 1000).is_none());

        let g = SequenceFamily::geometric(1.0, 0.5).unwrap();
        let t = g.power_tail(1.0, 3).unwrap();
        assert!(t.lower <= 0.125 && 0.125 <= t.upper);
    }

    #[test]
    fn powerlog_tails_bracket_brute_force() {
        for (alpha, beta, p) in [(1.0, 2.0, 1.0), (0.75, 1.0, 2.0), (0.8, -1.0, 2.0), (1.0, 1.5, 1.5)] {
            let f = SequenceFamily::power_log(alpha, beta).unwrap();
            let n = 1000;
            let Some(t) = f.power_tail(p, n) else { panic!("no tail for {f} p={p}") };
            // partial tail up to 2·10^6 is a lower bound for the true tail
            let partial: f64 = (n + 1..2_000_000).map(|k| f.term_pow(k, p)).sum();
            assert!(partial <= t.upper, "{f} p={p}: {partial} > {}", t.upper);
        }
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(c in 1e-3f64..1e3, alpha in 0.0f64..4.0, beta in -3.0f64..3.0, r in 0.001f64..0.999) {
            for fam in [
                SequenceFamily::power(c, alpha).unwrap(),
                SequenceFamily::power_log(alpha, beta).unwrap(),
                SequenceFamily::geometric(c, r).unwrap(),
                SequenceFamily::explicit(vec![c, r, alpha + 1.0]).unwrap(),
            ] {
                let text = fam.to_string();
                let back: SequenceFamily = text.parse().unwrap();
                prop_assert_eq!(&back, &fam);
                prop_assert_eq!(back.to_string(), text);
            }
        }
    }
}
