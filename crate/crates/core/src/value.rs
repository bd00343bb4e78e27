//! The `Approx` result type carried by every numeric evaluator.

use crate::error::{Error, Result};

/// A computed value with an absolute error estimate and a work counter.
///
/// `work` counts series terms or integrand evaluations, whichever the
/// producing routine spends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub err_est: f64,
    pub work: u64,
}

impl Approx {
    /// Builds a checked value. Non-finite values or estimates are errors.
    pub fn new(value: f64, err_est: f64, work: u64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("value {value}")));
        }
        if !(err_est.is_finite() && err_est >= 0.0) {
            return Err(Error::NonFinite(format!("error estimate {err_est}")));
        }
        Ok(Self {
            value,
            err_est,
            work,
        })
    }

    /// An exactly known value.
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            err_est: 0.0,
            work: 0,
        }
    }

    /// Multiplies by a constant known to full precision.
    pub fn scale(self, factor: f64) -> Result<Self> {
        Self::new(
            self.value * factor,
            self.err_est * factor.abs() + f64::EPSILON * (self.value * factor).abs(),
            self.work,
        )
    }

    /// Relative size of the error estimate, `err_est / |value|`.
    pub fn rel_err(&self) -> f64 {
        if self.value == 0.0 {
            if self.err_est == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.err_est / self.value.abs()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            Approx::new(f64::NAN, 0.0, 0),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            Approx::new(1.0, f64::INFINITY, 0),
            Err(Error::NonFinite(_))
        ));
        assert!(Approx::new(1.0, -1.0, 0).is_err());
    }

    #[test]
    fn scale_tracks_error() {
        let a = Approx::new(2.0, 1e-10, 7).unwrap().scale(-3.0).unwrap();
        assert_eq!(a.value, -6.0);
        assert!(a.err_est >= 3e-10);
        assert_eq!(a.work, 7);
    }
}
