use crate::family::{SequenceFamily, TERM_ULPS};
use crate::sum::NeumaierSum;

/// Prefix sums `s_n = Σ_{i<=n} x_i^power` with `s_0 = 0`.
///
/// Strictly increasing as long as each new term exceeds half an ulp of `s_n`.
#[derive(Debug, Clone)]
pub struct PartialSumTable {
    family: SequenceFamily,
    power: f64,
    s: Vec<f64>,
    acc: NeumaierSum,
}

impl PartialSumTable {
    pub fn new(family: SequenceFamily, power: f64) -> Self {
        Self { family, power, s: vec![0.0], acc: NeumaierSum::new() }
    }

    /// Extends the table through index `n`.
    pub fn extend_to(&mut self, n: usize) {
        let n = self.family.truncated_len(n);
        self.s.reserve(n.saturating_sub(self.len()));
        for i in self.len() + 1..=n {
            self.acc.add(self.family.term_pow(i, self.power));
            self.s.push(self.acc.value());
        }
    }

    pub fn family(&self) -> &SequenceFamily {
        &self.family
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// Largest computed index.
    pub fn len(&self) -> usize {
        self.s.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `s_n` for `0 <= n <= len()`.
    #[inline]
    pub fn s(&self, n: usize) -> f64 {
        self.s[n]
    }

    /// `a_n = x_n^power`.
    #[inline]
    pub fn term(&self, n: usize) -> f64 {
        self.family.term_pow(n, self.power)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.s
    }

    /// Relative rounding bound valid for every stored `s_n` (positive terms).
    pub fn relative_error(&self) -> f64 {
        let last = self.s[self.len()];
        if last == 0.0 {
            0.0
        } else {
            self.acc.rounding_bound(TERM_ULPS) / last
        }
    }
}

/// Computes `s_1 .. s_{n_max}` for `a_i = x_i^power`.
pub fn partial_sums(x: &SequenceFamily, power: f64, n_max: usize) -> PartialSumTable {
    let mut t = PartialSumTable::new(x.clone(), power);
    t.extend_to(n_max);
    t
}
