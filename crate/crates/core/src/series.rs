//! Truncation policy shared by every infinite-series evaluator.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    /// Stop once `|term| ≤ rel_tol·|partial sum|` ...
    pub rel_tol: f64,
    /// ... for this many consecutive terms.
    pub consecutive_small: u32,
    pub max_terms: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            consecutive_small: 3,
            max_terms: 10_000,
        }
    }
}

impl SeriesOptions {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::domain(format!(
                "series rel_tol must be > 0, got {}",
                self.rel_tol
            )));
        }
        if self.consecutive_small < 1 {
            return Err(Error::domain("consecutive_small must be >= 1"));
        }
        if self.max_terms < 1 {
            return Err(Error::domain("max_terms must be >= 1"));
        }
        Ok(())
    }
}

/// Compensated running sum carrying the stop rule.
#[derive(Debug, Clone)]
pub(crate) struct Summation {
    sum: f64,
    comp: f64,
    abs_sum: f64,
    small: u32,
    terms: usize,
    last: f64,
    prev: f64,
    opts: SeriesOptions,
}

impl Summation {
    pub fn new(opts: SeriesOptions) -> Self {
        Self {
            sum: 0.0,
            comp: 0.0,
            abs_sum: 0.0,
            small: 0,
            terms: 0,
            last: 0.0,
            prev: 0.0,
            opts,
        }
    }

    /// Adds a term and reports whether the stop rule has fired.
    pub fn add(&mut self, term: f64) -> bool {
        let t = self.sum + term;
        // Neumaier compensation
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += term.abs();
        self.terms += 1;
        self.prev = self.last;
        self.last = term;
        if term.abs() <= self.opts.rel_tol * self.value().abs() {
            self.small += 1;
        } else {
            self.small = 0;
        }
        self.small >= self.opts.consecutive_small
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// Size of the discarded tail, modelled as geometric with the ratio of
    /// the last two terms (capped at `max_ratio`). Never below `|last term|`.
    pub fn tail_estimate(&self, max_ratio: f64) -> f64 {
        let last = self.last.abs();
        if last == 0.0 {
            return 0.0;
        }
        let q = if self.prev != 0.0 {
            (last / self.prev.abs()).min(max_ratio)
        } else {
            0.5
        };
        last * (q / (1.0 - q)).max(1.0)
    }

    /// Rounding bound for the accumulated sum.
    pub fn rounding(&self) -> f64 {
        4.0 * f64::EPSILON * self.abs_sum
    }

    pub fn exhausted(&self) -> bool {
        self.terms >= self.opts.max_terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_stops_with_small_tail() {
        let mut s = Summation::new(SeriesOptions::default());
        let mut term = 1.0;
        while !s.add(term) {
            term *= 0.5;
        }
        assert!((s.value() - 2.0).abs() < 1e-11);
        assert!(s.tail_estimate(0.9) < 1e-11);
        assert!(s.terms() < 60);
    }

    #[test]
    fn compensation_recovers_cancelled_digits() {
        let mut s = Summation::new(SeriesOptions::default());
        for t in [1.0, 1e100, 1.0, -1e100] {
            s.add(t);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn validation() {
        assert!(SeriesOptions::default().validate().is_ok());
        assert!(SeriesOptions {
            rel_tol: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SeriesOptions {
            consecutive_small: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SeriesOptions {
            max_terms: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
